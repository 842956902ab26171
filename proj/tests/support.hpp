#pragma once

#include <random>
#include <vector>

#include "miniversal/correctors.hpp"
#include "miniversal/laurent.hpp"
#include "miniversal/matrix.hpp"
#include "miniversal/padic.hpp"
#include "miniversal/pattern.hpp"
#include "miniversal/sampling.hpp"

namespace testsupport {

using namespace miniversal;

template <FieldBackend F>
Matrix<F> mat(const F& f, std::vector<std::vector<long long>> rows) {
    Matrix<F> m(f, rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m.at(i, j) = f.from_int(rows[i][j]);
    return m;
}

template <FieldBackend F>
Matrix<F> jordan_pair_5_32(const F& f) {  // J_3(5) + J_2(5)
    Matrix<F> a(f, 5, 5);
    for (std::size_t i = 0; i < 5; ++i) a.at(i, i) = f.from_int(5);
    a.at(0, 1) = f.one();
    a.at(1, 2) = f.one();
    a.at(3, 4) = f.one();
    return a;
}

// Independent oracle: characteristic polynomial coefficients from sums of
// principal minors, det(xI - A) = sum_k (-1)^k e_k x^{n-k}.
template <FieldBackend F>
std::vector<typename F::Value> charpoly_minor_oracle(const Matrix<F>& a) {
    const F& f = a.field();
    std::size_t n = a.rows();
    std::vector<typename F::Value> coeff(n + 1, f.zero());
    coeff[n] = f.one();
    auto next_combination = [n](std::vector<std::size_t>& idx) {
        std::size_t k = idx.size();
        for (std::size_t t = k; t-- > 0;) {
            if (idx[t] < n - k + t) {
                ++idx[t];
                for (std::size_t u = t + 1; u < k; ++u) idx[u] = idx[u - 1] + 1;
                return true;
            }
        }
        return false;
    };
    for (std::size_t k = 1; k <= n; ++k) {
        auto ek = f.zero();
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = i;
        do {
            Matrix<F> sub(f, k, k);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) sub.at(i, j) = a.at(idx[i], idx[j]);
            ek = f.add(ek, determinant(sub));
        } while (next_combination(idx));
        coeff[n - k] = (k % 2 == 1) ? f.neg(ek) : ek;
    }
    return coeff;
}

inline PadicField q5() { return PadicField(5, 64); }
inline PadicField q2() { return PadicField(2, 64); }
inline LaurentRationalField lq(int prec = 16) { return LaurentRationalField(prec); }
inline LaurentPrimeField lf7(int prec = 32) { return LaurentPrimeField(prec, PrimeFieldCoeffs(7)); }

}  // namespace testsupport
