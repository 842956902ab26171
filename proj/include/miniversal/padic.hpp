#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "miniversal/common.hpp"
#include "miniversal/fields.hpp"

namespace miniversal {

// A truncated p-adic number with capped relative precision: the expansion
// a_z p^z + a_{z+1} p^{z+1} + ... is stored as the unit mantissa
// a_z + a_{z+1} p + ... (mod p^prec) together with the valuation z.  A value
// is known modulo p^(z+prec); additive cancellation past that bound collapses
// to the dedicated zero representation.
struct PadicValue {
    bool zero = true;
    long long z = 0;
    int prec = 0;
    BigInt mantissa;
};

class PadicField {
  public:
    using Value = PadicValue;
    static constexpr bool kExact = true;
    static constexpr bool kNonArchimedean = true;

    explicit PadicField(long long p, int precision = 64) : p_(p), prec_(precision) {
        if (!is_prime(p)) throw SpecError("p-adic base must be prime, got " + std::to_string(p));
        if (precision < 1 || precision > 4096) throw SpecError("p-adic precision out of range");
        auto pows = std::make_shared<std::vector<BigInt>>(precision + 1);
        (*pows)[0] = 1;
        for (int k = 1; k <= precision; ++k) (*pows)[k] = (*pows)[k - 1] * p;
        pow_ = std::move(pows);
    }

    long long prime() const { return p_; }
    int precision() const { return prec_; }
    double base() const { return static_cast<double>(p_); }

    Value zero() const { return {}; }
    Value one() const { return make(0, 1, prec_); }

    Value add(const Value& a, const Value& b) const {
        if (a.zero) return b;
        if (b.zero) return a;
        long long zmin = std::min(a.z, b.z);
        long long cap = std::min(a.z + a.prec, b.z + b.prec);
        int len = static_cast<int>(cap - zmin);  // >= min(a.prec, b.prec) >= 1
        BigInt m = 0;
        if (a.z - zmin < len) m += a.mantissa * ppow(static_cast<int>(a.z - zmin));
        if (b.z - zmin < len) m += b.mantissa * ppow(static_cast<int>(b.z - zmin));
        m %= ppow(len);
        if (m == 0) return {};
        long long v = strip_factor(m, p_);
        return make(zmin + v, std::move(m), len - static_cast<int>(v));
    }

    Value sub(const Value& a, const Value& b) const { return add(a, neg(b)); }

    Value neg(const Value& a) const {
        if (a.zero) return a;
        Value r = a;
        r.mantissa = ppow(a.prec) - a.mantissa;
        return r;
    }

    Value mul(const Value& a, const Value& b) const {
        if (a.zero || b.zero) return {};
        int prec = std::min(a.prec, b.prec);
        BigInt m = (a.mantissa * b.mantissa) % ppow(prec);
        return make(a.z + b.z, std::move(m), prec);
    }

    Value inv(const Value& a) const {
        if (a.zero) throw DivisionByZero("inversion of zero p-adic value");
        return make(-a.z, mod_inverse(a.mantissa, ppow(a.prec)), a.prec);
    }

    bool is_zero(const Value& a) const { return a.zero; }

    // Equality at the common retained precision.
    bool eq(const Value& a, const Value& b) const {
        if (a.zero || b.zero) return a.zero == b.zero;
        if (a.z != b.z) return false;
        int common = std::min(a.prec, b.prec);
        return a.mantissa % ppow(common) == b.mantissa % ppow(common);
    }

    double abs(const Value& a) const { return a.zero ? 0.0 : std::pow(base(), -static_cast<double>(a.z)); }

    long long valuation(const Value& a) const {
        if (a.zero) throw DivisionByZero("valuation of zero is undefined");
        return a.z;
    }

    Value from_int(long long k) const { return from_rational(Rational(k)); }

    Value from_rational(const Rational& r) const {
        if (r == 0) return {};
        BigInt num = boost::multiprecision::numerator(r);
        BigInt den = boost::multiprecision::denominator(r);
        bool negative = num < 0;
        if (negative) num = -num;
        long long v = strip_factor(num, p_) - strip_factor(den, p_);
        BigInt m = (num % ppow(prec_)) * mod_inverse(den, ppow(prec_)) % ppow(prec_);
        if (negative) m = ppow(prec_) - m;
        return make(v, std::move(m), prec_);
    }

    // Finite expansions are exact inputs: embed at full context precision.
    Value from_digits(long long z, const std::vector<long long>& digits) const {
        BigInt d = 0;
        for (std::size_t i = digits.size(); i-- > 0;) {
            if (digits[i] < 0 || digits[i] >= p_) throw SpecError("p-adic digit out of range");
            d = d * p_ + digits[i];
        }
        if (d == 0) return {};
        long long v = strip_factor(d, p_);
        return make(z + v, d % ppow(prec_), prec_);
    }

    // The retained digits a_z, a_{z+1}, ...; the leading one is nonzero.
    std::vector<long long> digits(const Value& a) const {
        if (a.zero) return {};
        std::vector<long long> out(a.prec);
        BigInt m = a.mantissa;
        for (int i = 0; i < a.prec; ++i) {
            out[i] = static_cast<long long>(m % p_);
            m /= p_;
        }
        return out;
    }

    // The stored truncation as an exact rational, p^z * mantissa.
    Rational to_rational(const Value& a) const {
        if (a.zero) return Rational(0);
        if (a.z >= 0) {
            BigInt scale = 1;
            for (long long i = 0; i < a.z; ++i) scale *= p_;
            return Rational(a.mantissa * scale);
        }
        BigInt scale = 1;
        for (long long i = 0; i < -a.z; ++i) scale *= p_;
        return Rational(a.mantissa, scale);
    }

    double default_tol() const { return 0.0; }
    std::string describe() const { return "Q_" + std::to_string(p_) + " (precision " + std::to_string(prec_) + ")"; }

  private:
    Value make(long long z, BigInt m, int prec) const {
        if (prec < 1) throw PrecisionExhausted();
        prec = std::min(prec, prec_);
        m %= ppow(prec);
        Value r;
        r.zero = false;
        r.z = z;
        r.prec = prec;
        r.mantissa = std::move(m);
        return r;
    }

    const BigInt& ppow(int k) const { return (*pow_)[static_cast<std::size_t>(std::min(k, prec_))]; }

    long long p_;
    int prec_;
    std::shared_ptr<const std::vector<BigInt>> pow_;
};

static_assert(FieldBackend<ComplexField>);
static_assert(FieldBackend<PadicField>);

}  // namespace miniversal
