#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "miniversal/common.hpp"
#include "miniversal/matrix.hpp"
#include "miniversal/polynomial.hpp"

namespace miniversal {

// ---------------------------------------------------------------------------
// Star patterns.  The stars are the positions (i, j) whose span D(F) is meant
// to complement the tangent space T(A); indices are 0-based here, 1-based in
// the JSON interface.
// ---------------------------------------------------------------------------
class StarPattern {
  public:
    explicit StarPattern(std::size_t n) : n_(n), mask_(n * n, 0) {}

    static StarPattern all_stars(std::size_t n) {
        StarPattern d(n);
        std::fill(d.mask_.begin(), d.mask_.end(), 1);
        d.count_ = n * n;
        return d;
    }

    static StarPattern from_pairs(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& stars) {
        StarPattern d(n);
        for (auto [i, j] : stars) d.add_star(i, j);
        return d;
    }

    void add_star(std::size_t i, std::size_t j) {
        if (i >= n_ || j >= n_) throw SpecError("star index out of range");
        if (!mask_[i * n_ + j]) {
            mask_[i * n_ + j] = 1;
            ++count_;
        }
    }

    bool is_star(std::size_t i, std::size_t j) const { return mask_[i * n_ + j] != 0; }
    std::size_t n() const { return n_; }
    std::size_t star_count() const { return count_; }

    std::vector<std::pair<std::size_t, std::size_t>> stars() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        out.reserve(count_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (is_star(i, j)) out.emplace_back(i, j);
        return out;
    }

    bool operator==(const StarPattern& o) const { return n_ == o.n_ && mask_ == o.mask_; }

  private:
    std::size_t n_;
    std::vector<char> mask_;
    std::size_t count_ = 0;
};

// Norm over the non-star coordinates only.
template <FieldBackend F>
double offpattern_norm(const Matrix<F>& m, const StarPattern& d) {
    if (m.rows() != d.n() || m.cols() != d.n()) throw SpecError("pattern size mismatch");
    const F& f = m.field();
    double s = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (d.is_star(i, j)) continue;
            double a = f.abs(m.at(i, j));
            s += a * a;
        }
    return std::sqrt(s);
}

// True iff every non-star entry is exactly zero (at retained precision on the
// truncated backends); unlike the norm this cannot be fooled by double
// underflow at deep valuations.
template <FieldBackend F>
bool offpattern_is_zero(const Matrix<F>& m, const StarPattern& d) {
    const F& f = m.field();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!d.is_star(i, j) && !f.is_zero(m.at(i, j))) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Incremental row-space membership with max-abs pivoting.  On the complex
// backend a candidate whose reduced magnitude lands inside the band
// (tol/10, tol*10) * scale is neither clearly dependent nor independent and
// raises AmbiguousRank.
// ---------------------------------------------------------------------------
template <FieldBackend F>
class RowSpaceReducer {
  public:
    RowSpaceReducer(const F& f, double tol, double scale) : f_(f), tol_(tol), scale_(scale) {}

    // Returns true (and absorbs the vector) iff it is independent of the
    // rows fed so far.
    bool feed(std::vector<typename F::Value> w) {
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            std::size_t pc = pivot_cols_[r];
            if (f_.is_zero(w[pc])) continue;
            auto factor = f_.mul(w[pc], f_.inv(rows_[r][pc]));
            w[pc] = f_.zero();
            for (std::size_t j = 0; j < w.size(); ++j) {
                if (j == pc || f_.is_zero(rows_[r][j])) continue;
                w[j] = f_.sub(w[j], f_.mul(factor, rows_[r][j]));
            }
        }
        std::size_t best = 0;
        double best_abs = -1;
        bool any_nonzero = false;
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (f_.is_zero(w[j])) continue;
            any_nonzero = true;
            double v = f_.abs(w[j]);
            if (v > best_abs) {
                best_abs = v;
                best = j;
            }
        }
        if constexpr (F::kExact) {
            if (!any_nonzero) return false;
        } else {
            double lo = tol_ * scale_ / 10.0, hi = tol_ * scale_ * 10.0;
            if (!any_nonzero || best_abs <= lo) return false;
            if (best_abs < hi) throw AmbiguousRank(best_abs);
        }
        pivot_cols_.push_back(best);
        rows_.push_back(std::move(w));
        return true;
    }

    std::size_t dimension() const { return rows_.size(); }

  private:
    F f_;
    double tol_, scale_;
    std::vector<std::vector<typename F::Value>> rows_;
    std::vector<std::size_t> pivot_cols_;
};

// ---------------------------------------------------------------------------
// Greedy complement: walk the matrix units in lexicographic order and keep
// those not in the span of T(A) and the previously kept units.
// ---------------------------------------------------------------------------
template <FieldBackend F>
StarPattern greedy_pattern(const Matrix<F>& a, double tol) {
    if (!a.is_square()) throw SpecError("greedy pattern needs a square matrix");
    const F& f = a.field();
    std::size_t n = a.rows();
    double scale = std::max(1.0, 2.0 * a.max_abs());
    RowSpaceReducer<F> red(f, tol, scale);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) red.feed(commutator_unit_image(a, a, k, l));
    StarPattern d(n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
            std::vector<typename F::Value> unit(n * n, f.zero());
            unit[k * n + l] = f.one();
            if (red.feed(std::move(unit))) d.add_star(k, l);
        }
    return d;
}

template <FieldBackend F>
StarPattern greedy_pattern(const Matrix<F>& a) {
    return greedy_pattern(a, a.field().default_tol());
}

struct PatternCertificate {
    std::size_t dim_tangent = 0;
    std::size_t star_count = 0;
};

// Checks F^{n x n} = T(A) (+) D(F): the dimensions must add up to n^2 and the
// stacked basis must have full rank.  The star count certified here equals
// the codimension of the similarity class of A.
template <FieldBackend F>
PatternCertificate certify_pattern(const Matrix<F>& a, const StarPattern& d, double tol) {
    if (!a.is_square()) throw SpecError("certification needs a square matrix");
    if (a.rows() != d.n()) throw SpecError("pattern size mismatch");
    const F& f = a.field();
    std::size_t n = a.rows();
    std::size_t dim_t = gauss_rank(commutator_operator(a), tol);
    PatternCertificate cert{dim_t, d.star_count()};
    if (dim_t + d.star_count() != n * n) throw NotAComplement(dim_t, d.star_count(), n);

    Matrix<F> stack(f, n * n + d.star_count(), n * n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
            auto img = commutator_unit_image(a, a, k, l);
            for (std::size_t j = 0; j < n * n; ++j) stack.at(k * n + l, j) = img[j];
        }
    std::size_t row = n * n;
    for (auto [i, j] : d.stars()) stack.at(row++, i * n + j) = f.one();
    if (gauss_rank(stack, tol) != n * n) throw NotAComplement(dim_t, d.star_count(), n);
    return cert;
}

template <FieldBackend F>
PatternCertificate certify_pattern(const Matrix<F>& a, const StarPattern& d) {
    return certify_pattern(a, d, a.field().default_tol());
}

// ---------------------------------------------------------------------------
// Canonical matrices and their closed-form patterns.
// ---------------------------------------------------------------------------

enum class CanonicalKind { frobenius, jordan, real_jordan };

struct RotationPair {
    double a = 0;
    double b = 0;
    bool operator==(const RotationPair&) const = default;
};

// One group of same-label blocks with weakly decreasing sizes.
template <FieldBackend F>
struct BlockGroup {
    std::variant<typename F::Value, RotationPair, RationalPoly> label;
    std::vector<std::size_t> sizes;
};

template <FieldBackend F>
struct CanonicalBuild {
    Matrix<F> matrix;
    StarPattern pattern;
};

// J_m(lambda): lambda on the diagonal, ones on the superdiagonal.
template <FieldBackend F>
Matrix<F> jordan_block(const F& f, std::size_t m, const typename F::Value& lambda) {
    Matrix<F> j(f, m, m);
    for (std::size_t i = 0; i < m; ++i) {
        j.at(i, i) = lambda;
        if (i + 1 < m) j.at(i, i + 1) = f.one();
    }
    return j;
}

// Companion block of size m whose characteristic polynomial is p^(m/deg p):
// ones on the superdiagonal, negated coefficients along the bottom row.
template <FieldBackend F>
Matrix<F> frobenius_block(const F& f, std::size_t m, const RationalPoly& p) {
    if (p.is_zero() || p.degree() == 0) throw SpecError("Frobenius block needs a polynomial of degree >= 1");
    if (!p.is_monic()) throw SpecError("Frobenius block polynomial must be monic");
    if (m % p.degree() != 0) throw SpecError("block size must be a multiple of the polynomial degree");
    RationalPoly q = poly_pow(p, m / p.degree());
    Matrix<F> b(f, m, m);
    for (std::size_t i = 0; i + 1 < m; ++i) b.at(i, i + 1) = f.one();
    for (std::size_t j = 0; j < m; ++j) b.at(m - 1, j) = f.neg(f.from_rational(q.coeff[j]));
    return b;
}

// C_m(a, b): 2x2 rotation cells on the diagonal, I_2 on the superdiagonal;
// m even, b > 0.  Complex backend restricted to real entries.
inline Matrix<ComplexField> rotation_block(const ComplexField& f, std::size_t m, const RotationPair& rot) {
    Matrix<ComplexField> c(f, m, m);
    for (std::size_t t = 0; 2 * t < m; ++t) {
        c.at(2 * t, 2 * t) = f.from_parts(rot.a, 0);
        c.at(2 * t, 2 * t + 1) = f.from_parts(rot.b, 0);
        c.at(2 * t + 1, 2 * t) = f.from_parts(-rot.b, 0);
        c.at(2 * t + 1, 2 * t + 1) = f.from_parts(rot.a, 0);
        if (2 * t + 3 < m) {
            c.at(2 * t, 2 * t + 2) = f.one();
            c.at(2 * t + 1, 2 * t + 3) = f.one();
        }
    }
    return c;
}

namespace detail {

template <FieldBackend F>
void validate_groups(const F& f, const std::vector<BlockGroup<F>>& groups, CanonicalKind kind) {
    if (groups.empty()) throw SpecError("block specification has no groups");
    for (const auto& g : groups) {
        if (g.sizes.empty()) throw SpecError("block group has no sizes");
        for (std::size_t k = 0; k < g.sizes.size(); ++k) {
            if (g.sizes[k] == 0) throw SpecError("block sizes must be positive");
            if (k > 0 && g.sizes[k] > g.sizes[k - 1])
                throw SpecError("block sizes must be weakly decreasing within a group");
        }
        switch (kind) {
            case CanonicalKind::jordan:
                if (!std::holds_alternative<typename F::Value>(g.label))
                    throw SpecError("jordan groups need eigenvalue labels");
                break;
            case CanonicalKind::frobenius: {
                const auto* p = std::get_if<RationalPoly>(&g.label);
                if (!p) throw SpecError("frobenius groups need polynomial labels");
                if (p->is_zero() || p->degree() == 0) throw SpecError("frobenius polynomial must have degree >= 1");
                if (!p->is_monic()) throw SpecError("frobenius polynomial must be monic");
                for (auto s : g.sizes)
                    if (s % p->degree() != 0)
                        throw SpecError("frobenius block sizes must be multiples of the polynomial degree");
                break;
            }
            case CanonicalKind::real_jordan:
                if (const auto* rot = std::get_if<RotationPair>(&g.label)) {
                    if (!(rot->b > 0)) throw SpecError("rotation labels need b > 0");
                    for (auto s : g.sizes)
                        if (s % 2 != 0) throw SpecError("rotation block sizes must be even");
                } else if (const auto* ev = std::get_if<typename F::Value>(&g.label)) {
                    if constexpr (std::is_same_v<F, ComplexField>) {
                        if (ev->imag() != 0) throw SpecError("real Jordan eigenvalues must be real");
                    }
                } else {
                    throw SpecError("real_jordan groups need eigenvalue or rotation labels");
                }
                break;
        }
    }
    for (std::size_t i = 0; i < groups.size(); ++i)
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            const auto &a = groups[i].label, &b = groups[j].label;
            if (a.index() != b.index()) continue;
            bool same = false;
            if (const auto* ev = std::get_if<typename F::Value>(&a)) same = f.eq(*ev, std::get<typename F::Value>(b));
            if (const auto* rot = std::get_if<RotationPair>(&a)) same = (*rot == std::get<RotationPair>(b));
            if (const auto* poly = std::get_if<RationalPoly>(&a)) same = (*poly == std::get<RationalPoly>(b));
            if (same) throw SpecError("group labels must be pairwise distinct");
        }
}

}  // namespace detail

// Assembles the canonical matrix from the spec along with the block-grid
// pattern: within a group, each cell on or above the grid diagonal carries
// stars along its last row, each cell below carries stars down its first
// column; cross-group cells carry no stars.
template <FieldBackend F>
CanonicalBuild<F> canonical_pattern(const F& f, const std::vector<BlockGroup<F>>& groups, CanonicalKind kind) {
    detail::validate_groups(f, groups, kind);
    std::size_t n = 0;
    for (const auto& g : groups)
        for (auto s : g.sizes) n += s;

    Matrix<F> a(f, n, n);
    StarPattern d(n);
    std::size_t group_off = 0;
    for (const auto& g : groups) {
        std::vector<std::size_t> off(g.sizes.size() + 1, 0);
        for (std::size_t k = 0; k < g.sizes.size(); ++k) off[k + 1] = off[k] + g.sizes[k];
        for (std::size_t k = 0; k < g.sizes.size(); ++k) {
            std::size_t m = g.sizes[k], base = group_off + off[k];
            Matrix<F> block(f, 0, 0);
            if (const auto* ev = std::get_if<typename F::Value>(&g.label)) {
                block = jordan_block(f, m, *ev);
            } else if (const auto* poly = std::get_if<RationalPoly>(&g.label)) {
                block = frobenius_block(f, m, *poly);
            } else {
                if constexpr (std::is_same_v<F, ComplexField>)
                    block = rotation_block(f, m, std::get<RotationPair>(g.label));
                else
                    throw SpecError("rotation blocks require the complex backend");
            }
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) a.at(base + i, base + j) = block.at(i, j);
        }
        for (std::size_t j = 0; j < g.sizes.size(); ++j)
            for (std::size_t l = 0; l < g.sizes.size(); ++l) {
                std::size_t r0 = group_off + off[j], c0 = group_off + off[l];
                if (j <= l) {
                    std::size_t last = r0 + g.sizes[j] - 1;
                    for (std::size_t c = 0; c < g.sizes[l]; ++c) d.add_star(last, c0 + c);
                } else {
                    for (std::size_t r = 0; r < g.sizes[j]; ++r) d.add_star(r0 + r, c0);
                }
            }
        group_off += off.back();
    }
    return {std::move(a), std::move(d)};
}

}  // namespace miniversal
