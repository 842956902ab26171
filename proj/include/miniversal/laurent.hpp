#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <string>
#include <vector>

#include "miniversal/common.hpp"
#include "miniversal/fields.hpp"

namespace miniversal {

// ---------------------------------------------------------------------------
// Coefficient domains for Laurent series.
// ---------------------------------------------------------------------------

template <typename D>
concept CoeffDomain = requires(const D d, const typename D::Coeff c, const Rational r) {
    typename D::Coeff;
    { d.czero() } -> std::same_as<typename D::Coeff>;
    { d.cadd(c, c) } -> std::same_as<typename D::Coeff>;
    { d.cmul(c, c) } -> std::same_as<typename D::Coeff>;
    { d.cneg(c) } -> std::same_as<typename D::Coeff>;
    { d.cinv(c) } -> std::same_as<typename D::Coeff>;
    { d.cis_zero(c) } -> std::same_as<bool>;
    { d.ceq(c, c) } -> std::same_as<bool>;
    { d.cfrom_rational(r) } -> std::same_as<typename D::Coeff>;
    { d.cdescribe() } -> std::same_as<std::string>;
};

struct RationalCoeffs {
    using Coeff = Rational;
    Coeff czero() const { return Rational(0); }
    Coeff cadd(const Coeff& a, const Coeff& b) const { return a + b; }
    Coeff cmul(const Coeff& a, const Coeff& b) const { return a * b; }
    Coeff cneg(const Coeff& a) const { return -a; }
    Coeff cinv(const Coeff& a) const {
        if (a == 0) throw DivisionByZero("inversion of zero rational coefficient");
        return 1 / a;
    }
    bool cis_zero(const Coeff& a) const { return a == 0; }
    bool ceq(const Coeff& a, const Coeff& b) const { return a == b; }
    Coeff cfrom_rational(const Rational& r) const { return r; }
    std::string cdescribe() const { return "Q"; }
    bool operator==(const RationalCoeffs&) const { return true; }
};

struct PrimeFieldCoeffs {
    using Coeff = long long;
    long long q = 2;

    PrimeFieldCoeffs() = default;
    explicit PrimeFieldCoeffs(long long modulus) : q(modulus) {
        if (!is_prime(modulus)) throw SpecError("prime-field modulus must be prime, got " + std::to_string(modulus));
    }

    Coeff czero() const { return 0; }
    Coeff cadd(Coeff a, Coeff b) const { return (a + b) % q; }
    Coeff cmul(Coeff a, Coeff b) const { return static_cast<long long>((__int128)a * b % q); }
    Coeff cneg(Coeff a) const { return a == 0 ? 0 : q - a; }
    Coeff cinv(Coeff a) const {
        if (a == 0) throw DivisionByZero("inversion of zero prime-field coefficient");
        return static_cast<long long>(mod_inverse(BigInt(a), BigInt(q)));
    }
    bool cis_zero(Coeff a) const { return a == 0; }
    bool ceq(Coeff a, Coeff b) const { return a == b; }
    Coeff cfrom_rational(const Rational& r) const {
        BigInt num = boost::multiprecision::numerator(r) % q;
        BigInt den = boost::multiprecision::denominator(r) % q;
        if (den == 0) throw DivisionByZero("rational denominator divisible by the field characteristic");
        BigInt v = ((num * mod_inverse(den, BigInt(q))) % q + q) % q;
        return static_cast<long long>(v);
    }
    std::string cdescribe() const { return "F_" + std::to_string(q); }
    bool operator==(const PrimeFieldCoeffs& o) const { return q == o.q; }
};

// ---------------------------------------------------------------------------
// Truncated Laurent series a_z T^z + a_{z+1} T^{z+1} + ... with capped
// relative precision, |x| = 2^(-z).  coeffs[0] is the (nonzero) leading
// coefficient; coefficients beyond coeffs.size() but below the precision
// bound are known zeros.
// ---------------------------------------------------------------------------
template <CoeffDomain D>
class LaurentField {
  public:
    struct Value {
        bool zero = true;
        long long z = 0;
        int prec = 0;
        std::vector<typename D::Coeff> coeffs;
    };
    static constexpr bool kExact = true;
    static constexpr bool kNonArchimedean = true;

    explicit LaurentField(int precision = 64, D domain = D{}) : dom_(std::move(domain)), prec_(precision) {
        if (precision < 1 || precision > 4096) throw SpecError("Laurent precision out of range");
    }

    const D& domain() const { return dom_; }
    int precision() const { return prec_; }
    double base() const { return 2.0; }

    Value zero() const { return {}; }
    Value one() const { return make(0, {dom_.cfrom_rational(Rational(1))}, prec_); }

    Value add(const Value& a, const Value& b) const {
        if (a.zero) return b;
        if (b.zero) return a;
        long long zmin = std::min(a.z, b.z);
        long long cap = std::min(a.z + a.prec, b.z + b.prec);
        int len = static_cast<int>(cap - zmin);  // >= 1
        std::vector<typename D::Coeff> buf(static_cast<std::size_t>(len), dom_.czero());
        accumulate(buf, a, zmin, len);
        accumulate(buf, b, zmin, len);
        int lead = 0;
        while (lead < len && dom_.cis_zero(buf[static_cast<std::size_t>(lead)])) ++lead;
        if (lead == len) return {};
        buf.erase(buf.begin(), buf.begin() + lead);
        return make(zmin + lead, std::move(buf), len - lead);
    }

    Value sub(const Value& a, const Value& b) const { return add(a, neg(b)); }

    Value neg(const Value& a) const {
        if (a.zero) return a;
        Value r = a;
        for (auto& c : r.coeffs) c = dom_.cneg(c);
        return r;
    }

    Value mul(const Value& a, const Value& b) const {
        if (a.zero || b.zero) return {};
        int prec = std::min(a.prec, b.prec);
        std::size_t len = std::min<std::size_t>(a.coeffs.size() + b.coeffs.size() - 1, static_cast<std::size_t>(prec));
        std::vector<typename D::Coeff> out(len, dom_.czero());
        for (std::size_t i = 0; i < a.coeffs.size() && i < len; ++i) {
            if (dom_.cis_zero(a.coeffs[i])) continue;
            std::size_t jmax = std::min(b.coeffs.size(), len - i);
            for (std::size_t j = 0; j < jmax; ++j)
                out[i + j] = dom_.cadd(out[i + j], dom_.cmul(a.coeffs[i], b.coeffs[j]));
        }
        return make(a.z + b.z, std::move(out), prec);
    }

    Value inv(const Value& a) const {
        if (a.zero) throw DivisionByZero("inversion of zero Laurent series");
        // Reciprocal of the unit part, term by term.
        std::vector<typename D::Coeff> w(static_cast<std::size_t>(a.prec), dom_.czero());
        auto u = [&](std::size_t j) { return j < a.coeffs.size() ? a.coeffs[j] : dom_.czero(); };
        typename D::Coeff u0inv = dom_.cinv(a.coeffs[0]);
        w[0] = u0inv;
        for (std::size_t k = 1; k < w.size(); ++k) {
            typename D::Coeff s = dom_.czero();
            std::size_t jmax = std::min(k, a.coeffs.size() - 1);
            for (std::size_t j = 1; j <= jmax; ++j) s = dom_.cadd(s, dom_.cmul(u(j), w[k - j]));
            w[k] = dom_.cneg(dom_.cmul(u0inv, s));
        }
        return make(-a.z, std::move(w), a.prec);
    }

    bool is_zero(const Value& a) const { return a.zero; }

    bool eq(const Value& a, const Value& b) const {
        if (a.zero || b.zero) return a.zero == b.zero;
        if (a.z != b.z) return false;
        int common = std::min(a.prec, b.prec);
        for (int i = 0; i < common; ++i) {
            auto ca = i < static_cast<int>(a.coeffs.size()) ? a.coeffs[static_cast<std::size_t>(i)] : dom_.czero();
            auto cb = i < static_cast<int>(b.coeffs.size()) ? b.coeffs[static_cast<std::size_t>(i)] : dom_.czero();
            if (!dom_.ceq(ca, cb)) return false;
        }
        return true;
    }

    double abs(const Value& a) const { return a.zero ? 0.0 : std::pow(2.0, -static_cast<double>(a.z)); }

    long long valuation(const Value& a) const {
        if (a.zero) throw DivisionByZero("valuation of zero is undefined");
        return a.z;
    }

    Value from_int(long long k) const { return from_rational(Rational(k)); }

    Value from_rational(const Rational& r) const {
        if (r == 0) return {};
        auto c = dom_.cfrom_rational(r);
        if (dom_.cis_zero(c)) return {};  // prime-field embedding may annihilate
        return make(0, {c}, prec_);
    }

    // Finite coefficient lists are exact inputs, embedded at full precision.
    Value from_terms(long long z, std::vector<typename D::Coeff> coeffs) const {
        std::size_t lead = 0;
        while (lead < coeffs.size() && dom_.cis_zero(coeffs[lead])) ++lead;
        if (lead == coeffs.size()) return {};
        coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(lead));
        if (coeffs.size() > static_cast<std::size_t>(prec_)) coeffs.resize(static_cast<std::size_t>(prec_));
        return make(z + static_cast<long long>(lead), std::move(coeffs), prec_);
    }

    double default_tol() const { return 0.0; }
    std::string describe() const {
        return dom_.cdescribe() + "((T)) (precision " + std::to_string(prec_) + ")";
    }

  private:
    Value make(long long z, std::vector<typename D::Coeff> coeffs, int prec) const {
        if (prec < 1) throw PrecisionExhausted();
        prec = std::min(prec, prec_);
        if (coeffs.size() > static_cast<std::size_t>(prec)) coeffs.resize(static_cast<std::size_t>(prec));
        while (!coeffs.empty() && dom_.cis_zero(coeffs.back())) coeffs.pop_back();
        Value r;
        r.zero = false;
        r.z = z;
        r.prec = prec;
        r.coeffs = std::move(coeffs);
        return r;
    }

    void accumulate(std::vector<typename D::Coeff>& buf, const Value& v, long long zmin, int len) const {
        long long shift = v.z - zmin;
        for (std::size_t i = 0; i < v.coeffs.size(); ++i) {
            long long pos = shift + static_cast<long long>(i);
            if (pos >= len) break;
            auto& slot = buf[static_cast<std::size_t>(pos)];
            slot = dom_.cadd(slot, v.coeffs[i]);
        }
    }

    D dom_;
    int prec_;
};

using LaurentRationalField = LaurentField<RationalCoeffs>;
using LaurentPrimeField = LaurentField<PrimeFieldCoeffs>;

static_assert(FieldBackend<LaurentRationalField>);
static_assert(FieldBackend<LaurentPrimeField>);

}  // namespace miniversal
