#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <string>

#include "miniversal/common.hpp"

namespace miniversal {

// ---------------------------------------------------------------------------
// The contract every field backend satisfies.  A backend is a small value
// object carrying its context (prime, precision, coefficient domain); field
// elements are immutable values and every operation is pure, so shared use
// across threads is safe.
// ---------------------------------------------------------------------------
template <typename F>
concept FieldBackend = requires(const F f, const typename F::Value v, const Rational r, long long k) {
    typename F::Value;
    { F::kExact } -> std::convertible_to<bool>;
    { F::kNonArchimedean } -> std::convertible_to<bool>;
    { f.zero() } -> std::same_as<typename F::Value>;
    { f.one() } -> std::same_as<typename F::Value>;
    { f.add(v, v) } -> std::same_as<typename F::Value>;
    { f.sub(v, v) } -> std::same_as<typename F::Value>;
    { f.mul(v, v) } -> std::same_as<typename F::Value>;
    { f.neg(v) } -> std::same_as<typename F::Value>;
    { f.inv(v) } -> std::same_as<typename F::Value>;
    { f.is_zero(v) } -> std::same_as<bool>;
    { f.eq(v, v) } -> std::same_as<bool>;
    { f.abs(v) } -> std::same_as<double>;
    { f.from_int(k) } -> std::same_as<typename F::Value>;
    { f.from_rational(r) } -> std::same_as<typename F::Value>;
    { f.default_tol() } -> std::same_as<double>;
    { f.describe() } -> std::same_as<std::string>;
};

template <FieldBackend F>
typename F::Value field_div(const F& f, const typename F::Value& a, const typename F::Value& b) {
    return f.mul(a, f.inv(b));
}

// ---------------------------------------------------------------------------
// Complex double-precision backend (the archimedean case).  Exactness claims
// of the non-archimedean backends are relaxed to tolerances here.
// ---------------------------------------------------------------------------
class ComplexField {
  public:
    using Value = std::complex<double>;
    static constexpr bool kExact = false;
    static constexpr bool kNonArchimedean = false;

    Value zero() const { return {0.0, 0.0}; }
    Value one() const { return {1.0, 0.0}; }
    Value add(const Value& a, const Value& b) const { return a + b; }
    Value sub(const Value& a, const Value& b) const { return a - b; }
    Value mul(const Value& a, const Value& b) const { return a * b; }
    Value neg(const Value& a) const { return -a; }
    Value inv(const Value& a) const {
        if (is_zero(a)) throw DivisionByZero();
        return one() / a;
    }
    Value conj(const Value& a) const { return std::conj(a); }
    bool is_zero(const Value& a) const { return a.real() == 0.0 && a.imag() == 0.0; }
    bool eq(const Value& a, const Value& b) const { return a == b; }
    double abs(const Value& a) const { return std::abs(a); }
    Value from_int(long long k) const { return {static_cast<double>(k), 0.0}; }
    Value from_rational(const Rational& r) const { return {r.convert_to<double>(), 0.0}; }
    Value from_parts(double re, double im) const { return {re, im}; }

    // Rank decisions need a discrete cutoff on this backend.
    double default_tol() const { return 1e-9; }
    std::string describe() const { return "C (double precision)"; }
};

}  // namespace miniversal
