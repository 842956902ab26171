#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "miniversal/common.hpp"
#include "miniversal/correctors.hpp"
#include "miniversal/matrix.hpp"
#include "miniversal/pattern.hpp"

namespace miniversal {

inline constexpr int kDefaultKMax = 200;

struct ReduceOptions {
    std::optional<double> tol_stop;  // default: 1e-12 (1+||A||) on complex, exact zero otherwise
    int k_max = kDefaultKMax;
    double margin = kDefaultEpsilonMargin;
};

template <FieldBackend F>
double default_tol_stop(const F&, const Matrix<F>& a) {
    if constexpr (F::kExact)
        return 0.0;
    else
        return 1e-12 * (1.0 + a.norm());
}

// -1 + (1+eps)(1+eps^2)(1+eps^3)...; factors are multiplied until they are
// within 1e-16 of 1.
inline double geo_series_bound(double eps) {
    double prod = 1.0, term = eps;
    while (term > 1e-16) {
        prod *= 1.0 + term;
        term *= eps;
    }
    return prod - 1.0;
}

template <FieldBackend F>
struct IterationState {
    Matrix<F> M;  // current perturbation M_k
    Matrix<F> S;  // partial product (I - C_1)...(I - C_{k-1})
    int k = 1;
    double eps = 0;
    double delta = 0;  // delta_k
    double tau = 0;    // tau_k
};

template <FieldBackend F>
struct ReductionResult {
    Matrix<F> S;
    Matrix<F> residual;  // D(X), the limit of the M_k
    bool converged = false;
    int steps = 0;
    double epsilon = 0;
    double tol_stop = 0;
    std::vector<TraceRow> trace;
    double s_deviation = 0;  // ||S - I||
    double s_bound = 0;      // -1 + prod(1 + eps^k)
    bool s_bound_ok = false;
    double d_norm = 0;  // ||D(X)||
    double d_bound = 0;  // eps / (2f)
    bool d_bound_ok = false;
};

// C_k = sum over off-pattern (i, j) of m_ij^(k) F_ij; star correctors are
// zero so they never contribute.
template <FieldBackend F>
Matrix<F> corrector_combination(const Matrix<F>& m, const CorrectorSet<F>& cs) {
    const F& f = m.field();
    std::size_t n = cs.n();
    Matrix<F> c(f, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (cs.pattern.is_star(i, j) || f.is_zero(m.at(i, j))) continue;
            c = c + cs.at(i, j).scaled(m.at(i, j));
        }
    return c;
}

template <FieldBackend F>
IterationState<F> begin_reduction(const Matrix<F>& x, const CorrectorSet<F>& cs, double eps) {
    const F& f = x.field();
    double tau1 = eps / (8.0 * cs.f * cs.v);  // == eps / (24 sqrt(n) (a+1) f^2)
    double norm_x = x.norm();
    if (!(norm_x < tau1)) throw MonitorViolation(1, "||M_1|| < tau_1", norm_x, tau1);
    return IterationState<F>{x, Matrix<F>::identity(f, cs.n()), 1, eps, tau1, tau1};
}

template <FieldBackend F>
TraceRow observe(const IterationState<F>& st, const CorrectorSet<F>& cs) {
    return TraceRow{st.k, st.M.norm(), offpattern_norm(st.M, cs.pattern), st.delta, st.tau,
                    corrector_combination(st.M, cs).norm()};
}

// One step of A + M_{k+1} = (I - C_k)^{-1} (A + M_k) (I - C_k).  Returns the
// trace row of the state it consumed.  A monitor violation here signals a
// tolerance or precision failure: under ||M_1|| < tau_1 the bounds
// ||M_k|| < tau_k, ||M_k||_D < delta_k, ||C_k|| <= delta_k f always hold
// mathematically.
template <FieldBackend F>
TraceRow reduction_step(IterationState<F>& st, const Matrix<F>& a, const CorrectorSet<F>& cs) {
    const F& f = a.field();
    Matrix<F> c = corrector_combination(st.M, cs);
    TraceRow row{st.k, st.M.norm(), offpattern_norm(st.M, cs.pattern), st.delta, st.tau, c.norm()};
    double c_bound = st.delta * cs.f;
    if (!(row.norm_C <= c_bound * (1.0 + 1e-9)))
        throw MonitorViolation(st.k, "||C_k|| <= delta_k f", row.norm_C, c_bound);
    if (!(row.norm_C < 1.0)) throw MonitorViolation(st.k, "||C_k|| < 1", row.norm_C, 1.0);

    Matrix<F> i_minus_c = Matrix<F>::identity(f, cs.n()) - c;
    Matrix<F> next = invert(i_minus_c) * (a + st.M) * i_minus_c - a;
    st.S = st.S * i_minus_c;
    st.M = std::move(next);
    st.k += 1;
    st.tau = st.tau + st.delta * cs.v;
    st.delta = st.delta * st.eps;

    double norm_m = st.M.norm();
    if (!(norm_m < st.tau)) throw MonitorViolation(st.k, "||M_k|| < tau_k", norm_m, st.tau);
    double norm_md = offpattern_norm(st.M, cs.pattern);
    if (!(norm_md < st.delta)) throw MonitorViolation(st.k, "||M_k||_D < delta_k", norm_md, st.delta);
    return row;
}

// Runs the iteration until the off-pattern residual passes tol_stop (exact
// zero at retained precision on the truncated backends) and reports the
// transformation, the residual, the trace, and the closed-form bounds
// ||S - I|| < -1 + prod(1+eps^k) and ||D(X)|| <= eps/(2f).
template <FieldBackend F>
ReductionResult<F> reduce(const Matrix<F>& a, const Matrix<F>& x, const CorrectorSet<F>& cs,
                          const ReduceOptions& opts = {}) {
    const F& f = a.field();
    if (!a.is_square() || a.rows() != cs.n() || x.rows() != a.rows() || x.cols() != a.cols())
        throw SpecError("reduce: dimension mismatch");
    double norm_x = x.norm();
    if (!(norm_x < cs.rho)) throw OutsideRadius(norm_x, cs.rho);
    double eps = epsilon_for(norm_x, cs, opts.margin);
    double tol_stop = opts.tol_stop ? *opts.tol_stop : default_tol_stop(f, a);

    // Below this delta the certified truncation error sits under the
    // representable precision, so the residual cannot improve further.
    double delta_floor = 0.0;
    if constexpr (F::kExact) delta_floor = std::pow(f.base(), -static_cast<double>(f.precision() + 16));

    IterationState<F> st = begin_reduction(x, cs, eps);
    std::vector<TraceRow> trace;
    bool converged = false;
    while (true) {
        bool done;
        if constexpr (F::kExact)
            done = offpattern_is_zero(st.M, cs.pattern) ||
                   (tol_stop > 0 && offpattern_norm(st.M, cs.pattern) <= tol_stop) || st.delta < delta_floor;
        else
            done = offpattern_norm(st.M, cs.pattern) <= tol_stop;
        if (done) {
            trace.push_back(observe(st, cs));
            converged = true;
            break;
        }
        if (st.k >= opts.k_max) {
            trace.push_back(observe(st, cs));
            throw NoConvergence(st.k, std::move(trace));
        }
        trace.push_back(reduction_step(st, a, cs));
    }

    ReductionResult<F> res{std::move(st.S), std::move(st.M), converged, st.k, eps, tol_stop, std::move(trace)};
    res.s_deviation = (res.S - Matrix<F>::identity(f, cs.n())).norm();
    res.s_bound = geo_series_bound(eps);
    res.s_bound_ok = res.s_deviation < res.s_bound;
    res.d_norm = res.residual.norm();
    res.d_bound = eps / (2.0 * cs.f);
    res.d_bound_ok = res.d_norm <= res.d_bound;
    return res;
}

// ---------------------------------------------------------------------------
// Independent verification of a reduction result.
// ---------------------------------------------------------------------------

struct VerifyReport {
    bool equality_ok = false;  // S^{-1}(A+X)S - A recomputed by elimination matches the residual
    double equality_error = 0;
    double equality_tol = 0;
    bool membership_ok = false;  // residual lies in D(F)
    double offpattern_residual = 0;
    bool trace_ok = false;
    bool det_ok = false;
    bool charpoly_ok = false;  // similarity invariants of A+X vs A+D(X)
    double charpoly_max_err = 0;

    bool all_ok() const { return equality_ok && membership_ok && trace_ok && det_ok && charpoly_ok; }
};

namespace detail {

// Agreement tolerance for recomputed quantities: loose rounding budget on the
// complex backend, half the retained digits on the truncated ones.
template <FieldBackend F>
double agreement_tol(const F& f, double scale) {
    if constexpr (F::kExact)
        return std::pow(f.base(), -static_cast<double>(f.precision() / 2)) * (1.0 + scale);
    else
        return 1e-9 * (1.0 + scale);
}

template <FieldBackend F>
double charpoly_rel_tol(const F& f) {
    if constexpr (F::kExact)
        return std::pow(f.base(), -static_cast<double>(f.precision() / 2));
    else
        return 1e-8;
}

}  // namespace detail

template <FieldBackend F>
VerifyReport verify_reduction(const Matrix<F>& a, const Matrix<F>& x, const ReductionResult<F>& res,
                              const StarPattern& d) {
    const F& f = a.field();
    VerifyReport rep;

    Matrix<F> recomputed = invert(res.S) * (a + x) * res.S - a;
    double scale = a.norm() + x.norm();
    rep.equality_tol = detail::agreement_tol(f, scale);
    rep.equality_error = (recomputed - res.residual).norm();
    rep.equality_ok = rep.equality_error <= rep.equality_tol;

    rep.offpattern_residual = offpattern_norm(res.residual, d);
    if constexpr (F::kExact)
        rep.membership_ok = res.tol_stop > 0 ? rep.offpattern_residual <= res.tol_stop
                                             : offpattern_is_zero(res.residual, d);
    else
        rep.membership_ok = rep.offpattern_residual <= res.tol_stop * (1.0 + 1e-9);

    Matrix<F> lhs = a + x;
    Matrix<F> rhs = a + res.residual;
    double rel = detail::charpoly_rel_tol(f);
    auto close = [&](const typename F::Value& u, const typename F::Value& v) {
        double err = f.abs(f.sub(u, v));
        double ref = std::max({1.0, f.abs(u), f.abs(v)});
        return std::make_pair(err / ref, err <= rel * ref);
    };
    auto [terr, tok] = close(matrix_trace(lhs), matrix_trace(rhs));
    rep.trace_ok = tok;
    auto [derr, dok] = close(determinant(lhs), determinant(rhs));
    rep.det_ok = dok;
    auto cp1 = characteristic_polynomial(lhs);
    auto cp2 = characteristic_polynomial(rhs);
    rep.charpoly_ok = true;
    rep.charpoly_max_err = std::max(terr, derr);
    for (std::size_t i = 0; i < cp1.size(); ++i) {
        auto [err, ok] = close(cp1[i], cp2[i]);
        rep.charpoly_max_err = std::max(rep.charpoly_max_err, err);
        rep.charpoly_ok = rep.charpoly_ok && ok;
    }
    return rep;
}

}  // namespace miniversal
