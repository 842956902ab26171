#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "miniversal/common.hpp"
#include "miniversal/laurent.hpp"
#include "miniversal/matrix.hpp"
#include "miniversal/pattern.hpp"
#include "miniversal/polynomial.hpp"

namespace miniversal {

// ---------------------------------------------------------------------------
// Irreducibility.  Definitive answers only up to degree 3 (a cubic or
// quadratic is reducible iff it has a root); higher degrees are accepted on
// caller assertion.
// ---------------------------------------------------------------------------

enum class Irreducibility { Irreducible, Reducible, Unknown };

namespace detail {

inline std::optional<std::vector<BigInt>> small_divisors(const BigInt& value) {
    BigInt v = value < 0 ? BigInt(-value) : value;
    if (v > 1000000) return std::nullopt;
    long long m = v.convert_to<long long>();
    std::vector<BigInt> out;
    for (long long d = 1; d * d <= m; ++d) {
        if (m % d != 0) continue;
        out.emplace_back(d);
        out.emplace_back(m / d);
    }
    return out;
}

}  // namespace detail

// Rational-root based test over Q.  A monic polynomial with rational
// coefficients of degree <= 3 is reducible over Q iff it has a rational
// root; for degree <= 3 this settles reducibility over Q((T)) as well, since
// a Laurent-series root of a constant-coefficient monic polynomial must have
// valuation zero and constant leading part.
inline Irreducibility rational_irreducibility(const RationalPoly& p) {
    if (p.is_zero() || p.degree() == 0) return Irreducibility::Reducible;
    if (!p.is_monic()) return Irreducibility::Unknown;
    if (p.degree() == 1) return Irreducibility::Irreducible;
    if (p.degree() > 3) return Irreducibility::Unknown;
    if (p.coeff[0] == 0) return Irreducibility::Reducible;  // root at 0
    BigInt lcm_den = 1;
    for (const auto& c : p.coeff) lcm_den = boost::multiprecision::lcm(lcm_den, boost::multiprecision::denominator(c));
    // After x = y / L the candidate roots y are integers dividing the
    // constant term of the scaled polynomial.
    BigInt constant = boost::multiprecision::numerator(Rational(p.coeff[0] * lcm_den));
    BigInt deg_scale = 1;
    for (std::size_t k = 1; k < p.degree(); ++k) deg_scale *= lcm_den;
    constant *= deg_scale;
    auto divisors = detail::small_divisors(constant);
    if (!divisors) return Irreducibility::Unknown;
    for (const auto& d : *divisors)
        for (int sign : {1, -1}) {
            Rational root(sign * d, lcm_den);
            if (poly_eval(p, root) == 0) return Irreducibility::Reducible;
        }
    return Irreducibility::Irreducible;
}

// Exhaustive root scan over a prime field (degree <= 3 definitive).
inline Irreducibility prime_field_irreducibility(const RationalPoly& p, long long q) {
    if (p.is_zero() || p.degree() == 0) return Irreducibility::Reducible;
    if (p.degree() == 1) return Irreducibility::Irreducible;
    if (p.degree() > 3) return Irreducibility::Unknown;
    PrimeFieldCoeffs dom(q);
    std::vector<long long> c(p.coeff.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = dom.cfrom_rational(p.coeff[i]);
    if (c.back() == 0) return Irreducibility::Reducible;  // degree dropped mod q
    for (long long x = 0; x < q; ++x) {
        long long acc = 0;
        for (std::size_t i = c.size(); i-- > 0;) acc = dom.cadd(dom.cmul(acc, x), c[i]);
        if (acc == 0) return Irreducibility::Reducible;
    }
    return Irreducibility::Irreducible;
}

template <FieldBackend F>
Irreducibility check_irreducible(const F& f, const RationalPoly& p) {
    if (p.is_zero() || p.degree() == 0) return Irreducibility::Reducible;
    if (p.degree() == 1) return Irreducibility::Irreducible;
    if constexpr (std::is_same_v<F, ComplexField>) {
        (void)f;
        return Irreducibility::Reducible;  // C is algebraically closed
    } else if constexpr (std::is_same_v<F, LaurentField<RationalCoeffs>>) {
        (void)f;
        return rational_irreducibility(p);
    } else if constexpr (std::is_same_v<F, LaurentField<PrimeFieldCoeffs>>) {
        return prime_field_irreducibility(p, f.domain().q);
    } else {
        (void)f;  // roots in Q_p are beyond the degree <= 3 toolbox here
        return Irreducibility::Unknown;
    }
}

// ---------------------------------------------------------------------------
// The dimension table for pairs of Frobenius blocks Phi(p^r), Phi(q^s):
//   dim T = mn          if p != q,
//           (m-1) n     if p = q and r >= s,
//           m (n-1)     if p = q and r <= s,
// with the complements 0-down (last row) and 0-left (first column).
// ---------------------------------------------------------------------------

struct LemmaCase {
    RationalPoly p, q;
    unsigned r = 1, s = 1;

    std::size_t m() const { return p.degree() * r; }
    std::size_t n() const { return q.degree() * s; }
};

namespace detail {

inline void validate_case(const LemmaCase& c) {
    if (c.p.is_zero() || c.p.degree() == 0 || c.q.is_zero() || c.q.degree() == 0)
        throw SpecError("lemma case polynomials must have degree >= 1");
    if (!c.p.is_monic() || !c.q.is_monic()) throw SpecError("lemma case polynomials must be monic");
    if (c.r < 1 || c.s < 1) throw SpecError("lemma case exponents must be >= 1");
}

}  // namespace detail

// rank of the mn x mn operator X -> X Psi - Phi X.
template <FieldBackend F>
std::size_t pair_tangent_dim(const F& f, const LemmaCase& c, double tol) {
    detail::validate_case(c);
    Matrix<F> phi = frobenius_block(f, c.m(), c.p);
    Matrix<F> psi = frobenius_block(f, c.n(), c.q);
    return gauss_rank(commutator_operator(phi, psi), tol);
}

template <FieldBackend F>
std::size_t pair_tangent_dim(const F& f, const LemmaCase& c) {
    return pair_tangent_dim(f, c, f.default_tol());
}

struct Lemma42Report {
    std::size_t m = 0, n = 0;
    bool same_poly = false;
    std::size_t dim = 0;
    std::size_t expected = 0;
    bool dim_ok = false;
    std::optional<bool> last_row_complement_ok;      // p = q, r >= s
    std::optional<bool> first_column_complement_ok;  // p = q, r <= s

    bool all_ok() const {
        return dim_ok && last_row_complement_ok.value_or(true) && first_column_complement_ok.value_or(true);
    }
};

namespace detail {

// rank of { images of all units } + { complement units } stacked as rows.
template <FieldBackend F>
bool complement_direct(const F& f, const Matrix<F>& phi, const Matrix<F>& psi,
                       const std::vector<std::pair<std::size_t, std::size_t>>& extra, double tol) {
    std::size_t m = phi.rows(), n = psi.rows();
    Matrix<F> stack(f, m * n + extra.size(), m * n);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < n; ++l) {
            auto img = commutator_unit_image(phi, psi, k, l);
            for (std::size_t j = 0; j < m * n; ++j) stack.at(k * n + l, j) = img[j];
        }
    std::size_t row = m * n;
    for (auto [i, j] : extra) stack.at(row++, i * n + j) = f.one();
    return gauss_rank(stack, tol) == m * n;
}

}  // namespace detail

template <FieldBackend F>
Lemma42Report lemma42_check(const F& f, const LemmaCase& c, double tol) {
    detail::validate_case(c);
    if (check_irreducible(f, c.p) == Irreducibility::Reducible)
        throw SpecError("polynomial '" + poly_string(c.p) + "' is reducible over " + f.describe());
    if (check_irreducible(f, c.q) == Irreducibility::Reducible)
        throw SpecError("polynomial '" + poly_string(c.q) + "' is reducible over " + f.describe());

    Lemma42Report rep;
    rep.m = c.m();
    rep.n = c.n();
    rep.same_poly = (c.p == c.q);
    rep.dim = pair_tangent_dim(f, c, tol);
    if (!rep.same_poly)
        rep.expected = rep.m * rep.n;
    else if (c.r >= c.s)
        rep.expected = (rep.m - 1) * rep.n;
    else
        rep.expected = rep.m * (rep.n - 1);
    rep.dim_ok = (rep.dim == rep.expected);

    if (rep.same_poly) {
        Matrix<F> phi = frobenius_block(f, rep.m, c.p);
        Matrix<F> psi = frobenius_block(f, rep.n, c.q);
        if (c.r >= c.s) {
            std::vector<std::pair<std::size_t, std::size_t>> last_row;
            for (std::size_t j = 0; j < rep.n; ++j) last_row.emplace_back(rep.m - 1, j);
            rep.last_row_complement_ok = detail::complement_direct(f, phi, psi, last_row, tol);
        }
        if (c.r <= c.s) {
            std::vector<std::pair<std::size_t, std::size_t>> first_col;
            for (std::size_t i = 0; i < rep.m; ++i) first_col.emplace_back(i, 0);
            rep.first_column_complement_ok = detail::complement_direct(f, phi, psi, first_col, tol);
        }
    }
    return rep;
}

template <FieldBackend F>
Lemma42Report lemma42_check(const F& f, const LemmaCase& c) {
    return lemma42_check(f, c, f.default_tol());
}

// n^2 - dim T(A), the codimension of the similarity class.
template <FieldBackend F>
std::size_t codim(const Matrix<F>& a, double tol) {
    if (!a.is_square()) throw SpecError("codimension needs a square matrix");
    std::size_t n = a.rows();
    return n * n - gauss_rank(commutator_operator(a), tol);
}

template <FieldBackend F>
std::size_t codim(const Matrix<F>& a) {
    return codim(a, a.field().default_tol());
}

}  // namespace miniversal
