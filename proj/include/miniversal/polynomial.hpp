#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "miniversal/common.hpp"

namespace miniversal {

// Dense univariate polynomial over the rationals, ascending coefficients
// (coeff[k] multiplies x^k).  The zero polynomial has an empty list.
struct RationalPoly {
    std::vector<Rational> coeff;

    RationalPoly() = default;
    explicit RationalPoly(std::vector<Rational> c) : coeff(std::move(c)) { trim(); }

    void trim() {
        while (!coeff.empty() && coeff.back() == 0) coeff.pop_back();
    }

    bool is_zero() const { return coeff.empty(); }
    std::size_t degree() const { return coeff.empty() ? 0 : coeff.size() - 1; }
    bool is_monic() const { return !coeff.empty() && coeff.back() == 1; }

    // Interface order is "constant term last" (descending powers).
    static RationalPoly from_descending(std::vector<Rational> c) {
        std::reverse(c.begin(), c.end());
        return RationalPoly(std::move(c));
    }
    std::vector<Rational> descending() const {
        std::vector<Rational> c(coeff.rbegin(), coeff.rend());
        return c;
    }

    bool operator==(const RationalPoly& other) const = default;
};

inline RationalPoly poly_mul(const RationalPoly& a, const RationalPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> c(a.coeff.size() + b.coeff.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.coeff.size(); ++i)
        for (std::size_t j = 0; j < b.coeff.size(); ++j) c[i + j] += a.coeff[i] * b.coeff[j];
    return RationalPoly(std::move(c));
}

inline RationalPoly poly_pow(const RationalPoly& p, unsigned long long e) {
    RationalPoly result(std::vector<Rational>{Rational(1)});
    RationalPoly base = p;
    while (e > 0) {
        if (e & 1) result = poly_mul(result, base);
        base = poly_mul(base, base);
        e >>= 1;
    }
    return result;
}

inline Rational poly_eval(const RationalPoly& p, const Rational& x) {
    Rational acc(0);
    for (auto it = p.coeff.rbegin(); it != p.coeff.rend(); ++it) acc = acc * x + *it;
    return acc;
}

inline std::string poly_string(const RationalPoly& p) {
    if (p.is_zero()) return "0";
    std::string s;
    for (std::size_t k = p.coeff.size(); k-- > 0;) {
        if (p.coeff[k] == 0) continue;
        if (!s.empty()) s += " + ";
        s += rational_string(p.coeff[k]);
        if (k > 0) s += "*x^" + std::to_string(k);
    }
    return s;
}

}  // namespace miniversal
