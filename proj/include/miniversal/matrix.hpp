#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "miniversal/common.hpp"
#include "miniversal/fields.hpp"

namespace miniversal {

// Dense m-by-n matrix over a field backend.  Entries are stored row-major;
// the norm is sqrt(sum |m_ij|^2) built on the field's absolute value.
template <FieldBackend F>
class Matrix {
  public:
    using Value = typename F::Value;

    Matrix(const F& field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), e_(rows * cols, field.zero()) {}

    static Matrix identity(const F& field, std::size_t n) {
        Matrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = field.one();
        return m;
    }

    // Matrix unit E_ij.
    static Matrix unit(const F& field, std::size_t rows, std::size_t cols, std::size_t i, std::size_t j) {
        Matrix m(field, rows, cols);
        m.at(i, j) = field.one();
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    const F& field() const { return field_; }

    Value& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const Value& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

    Matrix operator+(const Matrix& o) const {
        Matrix r(field_, rows_, cols_);
        for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = field_.add(e_[k], o.e_[k]);
        return r;
    }

    Matrix operator-(const Matrix& o) const {
        Matrix r(field_, rows_, cols_);
        for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = field_.sub(e_[k], o.e_[k]);
        return r;
    }

    Matrix operator*(const Matrix& o) const {
        Matrix r(field_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Value& a = at(i, k);
                if (field_.is_zero(a)) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) {
                    const Value& b = o.at(k, j);
                    if (field_.is_zero(b)) continue;
                    r.at(i, j) = field_.add(r.at(i, j), field_.mul(a, b));
                }
            }
        return r;
    }

    Matrix scaled(const Value& s) const {
        Matrix r(field_, rows_, cols_);
        for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = field_.mul(e_[k], s);
        return r;
    }

    Matrix negated() const {
        Matrix r(field_, rows_, cols_);
        for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = field_.neg(e_[k]);
        return r;
    }

    Matrix transposed() const {
        Matrix r(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    double norm() const {
        double s = 0;
        for (const auto& v : e_) {
            double a = field_.abs(v);
            s += a * a;
        }
        return std::sqrt(s);
    }

    double max_abs() const {
        double s = 0;
        for (const auto& v : e_) s = std::max(s, field_.abs(v));
        return s;
    }

    bool all_zero() const {
        for (const auto& v : e_)
            if (!field_.is_zero(v)) return false;
        return true;
    }

    // Row-major flattening; index of (i, j) is i*cols + j.
    std::vector<Value> row_major() const { return e_; }

    static Matrix from_row_major(const F& field, std::size_t rows, std::size_t cols, std::vector<Value> entries) {
        Matrix m(field, rows, cols);
        m.e_ = std::move(entries);
        return m;
    }

  private:
    F field_;
    std::size_t rows_, cols_;
    std::vector<Value> e_;
};

template <FieldBackend F>
double matrix_norm(const Matrix<F>& m) {
    return m.norm();
}

template <FieldBackend F>
double max_abs_diff(const Matrix<F>& a, const Matrix<F>& b) {
    return (a - b).max_abs();
}

// ---------------------------------------------------------------------------
// Gaussian elimination.  Pivoting always selects the candidate of largest
// absolute value; on the non-archimedean backends that is the
// valuation-minimizing pivot.  A pivot counts iff its absolute value exceeds
// tol * (largest initial entry); exact backends use tol = 0, where the zero
// flag is authoritative.
// ---------------------------------------------------------------------------

template <FieldBackend F>
struct EchelonForm {
    Matrix<F> lhs;
    std::optional<Matrix<F>> rhs;
    std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col), in elimination order
    int sign = 1;
    double scale = 0;
    std::size_t rank() const { return pivots.size(); }
};

template <FieldBackend F>
EchelonForm<F> echelon_reduce(Matrix<F> m, std::optional<Matrix<F>> rhs, double tol) {
    EchelonForm<F> ech{std::move(m), std::move(rhs), {}, 1, 0.0};
    Matrix<F>& a = ech.lhs;
    const F& f = a.field();
    ech.scale = a.max_abs();
    std::size_t pr = 0;
    for (std::size_t c = 0; c < a.cols() && pr < a.rows(); ++c) {
        std::size_t best = pr;
        double best_abs = -1;
        for (std::size_t r = pr; r < a.rows(); ++r) {
            if (f.is_zero(a.at(r, c))) continue;
            double v = f.abs(a.at(r, c));
            if (v > best_abs) {
                best_abs = v;
                best = r;
            }
        }
        bool usable;
        if constexpr (F::kExact)
            usable = best_abs >= 0;  // any nonzero entry
        else
            usable = best_abs > tol * ech.scale;
        if (!usable) continue;
        if (best != pr) {
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a.at(best, j), a.at(pr, j));
            if (ech.rhs)
                for (std::size_t j = 0; j < ech.rhs->cols(); ++j) std::swap(ech.rhs->at(best, j), ech.rhs->at(pr, j));
            ech.sign = -ech.sign;
        }
        const auto piv_inv = f.inv(a.at(pr, c));
        for (std::size_t r = pr + 1; r < a.rows(); ++r) {
            if (f.is_zero(a.at(r, c))) continue;
            auto factor = f.mul(a.at(r, c), piv_inv);
            a.at(r, c) = f.zero();
            for (std::size_t j = c + 1; j < a.cols(); ++j)
                a.at(r, j) = f.sub(a.at(r, j), f.mul(factor, a.at(pr, j)));
            if (ech.rhs)
                for (std::size_t j = 0; j < ech.rhs->cols(); ++j)
                    ech.rhs->at(r, j) = f.sub(ech.rhs->at(r, j), f.mul(factor, ech.rhs->at(pr, j)));
        }
        ech.pivots.emplace_back(pr, c);
        ++pr;
    }
    return ech;
}

template <FieldBackend F>
std::size_t gauss_rank(const Matrix<F>& m, double tol) {
    return echelon_reduce(m, std::optional<Matrix<F>>{}, tol).rank();
}

template <FieldBackend F>
std::size_t gauss_rank(const Matrix<F>& m) {
    return gauss_rank(m, m.field().default_tol());
}

template <FieldBackend F>
typename F::Value determinant(const Matrix<F>& m) {
    if (!m.is_square()) throw SpecError("determinant of a non-square matrix");
    const F& f = m.field();
    auto ech = echelon_reduce(m, std::optional<Matrix<F>>{}, f.default_tol());
    if (ech.rank() < m.rows()) return f.zero();
    auto det = f.one();
    for (auto [r, c] : ech.pivots) det = f.mul(det, ech.lhs.at(r, c));
    if (ech.sign < 0) det = f.neg(det);
    return det;
}

enum class SolveMode { particular, min_norm };

namespace detail {

template <FieldBackend F>
void check_consistency(const EchelonForm<F>& ech, double tol, double rhs_scale) {
    const F& f = ech.lhs.field();
    double thresh = 0;
    if constexpr (!F::kExact) thresh = std::max(tol, 1e-12) * std::max({1.0, ech.scale, rhs_scale});
    for (std::size_t r = ech.rank(); r < ech.lhs.rows(); ++r)
        for (std::size_t j = 0; j < ech.rhs->cols(); ++j) {
            const auto& v = ech.rhs->at(r, j);
            if constexpr (F::kExact) {
                if (!f.is_zero(v)) throw InconsistentSystem();
            } else {
                if (f.abs(v) > thresh) throw InconsistentSystem();
            }
        }
}

template <FieldBackend F>
Matrix<F> back_substitute(const EchelonForm<F>& ech) {
    const F& f = ech.lhs.field();
    const Matrix<F>& a = ech.lhs;
    const Matrix<F>& b = *ech.rhs;
    Matrix<F> x(f, a.cols(), b.cols());  // free variables stay zero
    for (std::size_t t = ech.pivots.size(); t-- > 0;) {
        auto [r, c] = ech.pivots[t];
        const auto piv_inv = f.inv(a.at(r, c));
        for (std::size_t j = 0; j < b.cols(); ++j) {
            auto acc = b.at(r, j);
            for (std::size_t c2 = c + 1; c2 < a.cols(); ++c2) {
                if (f.is_zero(a.at(r, c2)) || f.is_zero(x.at(c2, j))) continue;
                acc = f.sub(acc, f.mul(a.at(r, c2), x.at(c2, j)));
            }
            x.at(c, j) = f.mul(acc, piv_inv);
        }
    }
    return x;
}

}  // namespace detail

// Solves M X = B column-wise for a consistent system.  `particular` zeroes
// the free variables after elimination with lexicographic column order;
// `min_norm` (complex only) returns the minimum-norm solution via orthogonal
// projection onto the row space.
template <FieldBackend F>
Matrix<F> solve_linear_multi(const Matrix<F>& m, const Matrix<F>& b, SolveMode mode, double tol) {
    const F& f = m.field();
    if (m.rows() != b.rows()) throw SpecError("solve: dimension mismatch");
    auto ech = echelon_reduce(m, std::optional<Matrix<F>>(b), tol);
    detail::check_consistency(ech, tol, b.max_abs());
    if (mode == SolveMode::particular) return detail::back_substitute(ech);

    if constexpr (requires(const F ff, typename F::Value vv) { ff.conj(vv); }) {
        // Minimum-norm solution: x = R^H y with (R R^H) y = b' over the
        // independent rows R of the echelon form.
        std::size_t rank = ech.rank();
        Matrix<F> g(f, rank, rank);
        for (std::size_t i = 0; i < rank; ++i)
            for (std::size_t j = 0; j < rank; ++j) {
                auto acc = f.zero();
                for (std::size_t c = 0; c < ech.lhs.cols(); ++c)
                    acc = f.add(acc, f.mul(ech.lhs.at(i, c), f.conj(ech.lhs.at(j, c))));
                g.at(i, j) = acc;
            }
        Matrix<F> bp(f, rank, b.cols());
        for (std::size_t i = 0; i < rank; ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) bp.at(i, j) = ech.rhs->at(i, j);
        auto gech = echelon_reduce(g, std::optional<Matrix<F>>(bp), tol);
        if (gech.rank() < rank) throw SingularMatrix("row Gram matrix unexpectedly singular");
        Matrix<F> y = detail::back_substitute(gech);
        Matrix<F> x(f, m.cols(), b.cols());
        for (std::size_t c = 0; c < m.cols(); ++c)
            for (std::size_t j = 0; j < b.cols(); ++j) {
                auto acc = f.zero();
                for (std::size_t i = 0; i < rank; ++i) acc = f.add(acc, f.mul(f.conj(ech.lhs.at(i, c)), y.at(i, j)));
                x.at(c, j) = acc;
            }
        return x;
    } else {
        throw UnsupportedMode("min_norm solving requires the complex backend");
    }
}

template <FieldBackend F>
std::vector<typename F::Value> solve_linear(const Matrix<F>& m, const std::vector<typename F::Value>& b,
                                            SolveMode mode, double tol) {
    Matrix<F> bm(m.field(), b.size(), 1);
    for (std::size_t i = 0; i < b.size(); ++i) bm.at(i, 0) = b[i];
    Matrix<F> x = solve_linear_multi(m, bm, mode, tol);
    std::vector<typename F::Value> out(m.cols());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x.at(i, 0);
    return out;
}

template <FieldBackend F>
std::vector<typename F::Value> solve_linear(const Matrix<F>& m, const std::vector<typename F::Value>& b,
                                            SolveMode mode = SolveMode::particular) {
    return solve_linear(m, b, mode, m.field().default_tol());
}

// Elimination-based inversion (Gauss-Jordan).
template <FieldBackend F>
Matrix<F> invert(const Matrix<F>& m) {
    if (!m.is_square()) throw SpecError("inversion of a non-square matrix");
    const F& f = m.field();
    std::size_t n = m.rows();
    auto ech = echelon_reduce(m, std::optional<Matrix<F>>(Matrix<F>::identity(f, n)), 0.0);
    if (ech.rank() < n) throw SingularMatrix();
    Matrix<F>& a = ech.lhs;
    Matrix<F>& inv = *ech.rhs;
    for (std::size_t t = n; t-- > 0;) {
        auto [r, c] = ech.pivots[t];
        const auto piv_inv = f.inv(a.at(r, c));
        for (std::size_t j = 0; j < n; ++j) inv.at(r, j) = f.mul(inv.at(r, j), piv_inv);
        for (std::size_t j = c; j < n; ++j) a.at(r, j) = f.mul(a.at(r, j), piv_inv);
        for (std::size_t r2 = 0; r2 < r; ++r2) {
            const auto factor = a.at(r2, c);
            if (f.is_zero(factor)) continue;
            a.at(r2, c) = f.zero();
            for (std::size_t j = c + 1; j < n; ++j) a.at(r2, j) = f.sub(a.at(r2, j), f.mul(factor, a.at(r, j)));
            for (std::size_t j = 0; j < n; ++j) inv.at(r2, j) = f.sub(inv.at(r2, j), f.mul(factor, inv.at(r, j)));
        }
    }
    return inv;
}

// ---------------------------------------------------------------------------
// Commutator operators.
// ---------------------------------------------------------------------------

// Matrix of X -> X Q - P X on row-major vec(X), X in F^{m x n}.
template <FieldBackend F>
Matrix<F> commutator_operator(const Matrix<F>& p, const Matrix<F>& q) {
    if (!p.is_square() || !q.is_square()) throw SpecError("commutator operator needs square blocks");
    const F& f = p.field();
    std::size_t m = p.rows(), n = q.rows();
    Matrix<F> op(f, m * n, m * n);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < n; ++l) {
            std::size_t col = k * n + l;
            for (std::size_t j = 0; j < n; ++j)
                op.at(k * n + j, col) = f.add(op.at(k * n + j, col), q.at(l, j));
            for (std::size_t i = 0; i < m; ++i)
                op.at(i * n + l, col) = f.sub(op.at(i * n + l, col), p.at(i, k));
        }
    return op;
}

// Matrix of X -> X A - A X; its image is the tangent space T(A).
template <FieldBackend F>
Matrix<F> commutator_operator(const Matrix<F>& a) {
    return commutator_operator(a, a);
}

// vec(E_kl Q - P E_kl) without forming the operator.
template <FieldBackend F>
std::vector<typename F::Value> commutator_unit_image(const Matrix<F>& p, const Matrix<F>& q, std::size_t k,
                                                     std::size_t l) {
    const F& f = p.field();
    std::size_t m = p.rows(), n = q.rows();
    std::vector<typename F::Value> v(m * n, f.zero());
    for (std::size_t j = 0; j < n; ++j) v[k * n + j] = f.add(v[k * n + j], q.at(l, j));
    for (std::size_t i = 0; i < m; ++i) v[i * n + l] = f.sub(v[i * n + l], p.at(i, k));
    return v;
}

// ---------------------------------------------------------------------------
// Characteristic polynomial det(xI - A) by the Berkowitz iteration
// (division-free, valid over any field).  Coefficients ascending.
// ---------------------------------------------------------------------------
template <FieldBackend F>
std::vector<typename F::Value> characteristic_polynomial(const Matrix<F>& a) {
    if (!a.is_square()) throw SpecError("characteristic polynomial of a non-square matrix");
    const F& f = a.field();
    std::size_t n = a.rows();
    std::vector<typename F::Value> poly{f.one()};  // descending during the build
    for (std::size_t r = 1; r <= n; ++r) {
        std::vector<typename F::Value> q(r + 1, f.zero());
        q[0] = f.one();
        q[1] = f.neg(a.at(r - 1, r - 1));
        if (r >= 2) {
            std::vector<typename F::Value> col(r - 1);
            for (std::size_t i = 0; i < r - 1; ++i) col[i] = a.at(i, r - 1);
            for (std::size_t k = 2; k <= r; ++k) {
                auto dot = f.zero();
                for (std::size_t i = 0; i < r - 1; ++i) dot = f.add(dot, f.mul(a.at(r - 1, i), col[i]));
                q[k] = f.neg(dot);
                if (k == r) break;
                std::vector<typename F::Value> next(r - 1, f.zero());
                for (std::size_t i = 0; i < r - 1; ++i)
                    for (std::size_t j = 0; j < r - 1; ++j) next[i] = f.add(next[i], f.mul(a.at(i, j), col[j]));
                col = std::move(next);
            }
        }
        std::vector<typename F::Value> np(r + 1, f.zero());
        for (std::size_t j = 0; j <= r; ++j)
            for (std::size_t t = 0; t <= std::min(j, r - 1); ++t) np[j] = f.add(np[j], f.mul(q[j - t], poly[t]));
        poly = std::move(np);
    }
    std::reverse(poly.begin(), poly.end());
    return poly;
}

template <FieldBackend F>
typename F::Value matrix_trace(const Matrix<F>& a) {
    const F& f = a.field();
    auto t = f.zero();
    for (std::size_t i = 0; i < a.rows(); ++i) t = f.add(t, a.at(i, i));
    return t;
}

}  // namespace miniversal
