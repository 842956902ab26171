#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "miniversal/common.hpp"
#include "miniversal/matrix.hpp"
#include "miniversal/pattern.hpp"

namespace miniversal {

inline constexpr double kDefaultEpsilonMargin = 1e-6;

// The corrector family F_ij with E_ij + F_ij A - A F_ij in D(F), plus the
// constants of the convergence estimate:
//   a = ||A||, f = max(sum ||F_ij||, 1/3), v = 3 sqrt(n) (a+1) f,
//   rho = 1 / (48 sqrt(n) (a+1) f^2).
// f is rounded up and rho down, so the stored radius never overstates U.
template <FieldBackend F>
struct CorrectorSet {
    StarPattern pattern;
    std::vector<Matrix<F>> units;  // row-major by (i, j); zero at star positions
    double a = 0;
    double f = 0;
    double v = 0;
    double rho = 0;
    SolveMode mode = SolveMode::particular;

    std::size_t n() const { return pattern.n(); }
    const Matrix<F>& at(std::size_t i, std::size_t j) const { return units[i * pattern.n() + j]; }
};

template <FieldBackend F>
SolveMode default_corrector_mode() {
    // Least-norm correctors shrink f and widen the radius, but only the
    // complex backend has the inner product for them; exact backends get the
    // reproducible particular solution.
    return F::kExact ? SolveMode::particular : SolveMode::min_norm;
}

// Solves the n^2 corrector systems: for every non-star (i, j), the
// off-pattern coordinates of F A - A F must cancel -E_ij.  Star positions
// take F_ij = 0.  Requires a certified pattern; an inconsistent system here
// signals a certification or tolerance bug, not bad input.
template <FieldBackend F>
CorrectorSet<F> solve_correctors(const Matrix<F>& a, const StarPattern& d, SolveMode mode, double tol) {
    const F& f = a.field();
    std::size_t n = a.rows();
    if (!a.is_square() || d.n() != n) throw SpecError("corrector solve needs a square matrix and matching pattern");

    std::vector<std::size_t> off;  // row-major vec indices of non-star positions
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!d.is_star(i, j)) off.push_back(i * n + j);

    CorrectorSet<F> cs{d, {}, 0, 0, 0, 0, mode};
    cs.units.assign(n * n, Matrix<F>(f, n, n));

    if (!off.empty()) {
        Matrix<F> op = commutator_operator(a);  // vec(F) -> vec(F A - A F)
        Matrix<F> lhs(f, off.size(), n * n);
        for (std::size_t r = 0; r < off.size(); ++r)
            for (std::size_t c = 0; c < n * n; ++c) lhs.at(r, c) = op.at(off[r], c);
        Matrix<F> rhs(f, off.size(), off.size());
        for (std::size_t t = 0; t < off.size(); ++t) rhs.at(t, t) = f.neg(f.one());
        Matrix<F> sol = solve_linear_multi(lhs, rhs, mode, tol);
        for (std::size_t t = 0; t < off.size(); ++t) {
            std::vector<typename F::Value> col(n * n);
            for (std::size_t c = 0; c < n * n; ++c) col[c] = sol.at(c, t);
            cs.units[off[t]] = Matrix<F>::from_row_major(f, n, n, std::move(col));
        }
    }

    cs.a = a.norm();
    double sum = 0;
    for (const auto& u : cs.units) sum += u.norm();
    cs.f = std::nextafter(std::max(sum, 1.0 / 3.0), std::numeric_limits<double>::infinity());
    double root_n = std::sqrt(static_cast<double>(n));
    cs.v = 3.0 * root_n * (cs.a + 1.0) * cs.f;
    cs.rho = std::nextafter(1.0 / (48.0 * root_n * (cs.a + 1.0) * cs.f * cs.f), 0.0);
    return cs;
}

template <FieldBackend F>
CorrectorSet<F> solve_correctors(const Matrix<F>& a, const StarPattern& d) {
    return solve_correctors(a, d, default_corrector_mode<F>(), a.field().default_tol());
}

template <FieldBackend F>
double radius(const CorrectorSet<F>& cs) {
    return cs.rho;
}

template <FieldBackend F>
bool in_radius(const CorrectorSet<F>& cs, const Matrix<F>& x) {
    return x.norm() < cs.rho;
}

// The smallest eps <= 1/2 with ||X|| < tau_1(eps) = eps / (24 sqrt(n) (a+1) f^2),
// floored at the margin so the monitors stay positive for X = 0.
template <FieldBackend F>
double epsilon_for(double x_norm, const CorrectorSet<F>& cs, double margin = kDefaultEpsilonMargin) {
    if (!(margin > 0 && margin < 0.5)) throw SpecError("epsilon margin must lie in (0, 1/2)");
    if (!(x_norm < cs.rho)) throw OutsideRadius(x_norm, cs.rho);
    double denom = 24.0 * std::sqrt(static_cast<double>(cs.n())) * (cs.a + 1.0) * cs.f * cs.f;
    return std::min(0.5, std::max(x_norm * denom * (1.0 + margin), margin));
}

template <FieldBackend F>
double epsilon_for(const Matrix<F>& x, const CorrectorSet<F>& cs, double margin = kDefaultEpsilonMargin) {
    return epsilon_for(x.norm(), cs, margin);
}

}  // namespace miniversal
