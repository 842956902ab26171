#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace miniversal {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Errors.  Every failure mode of the library is one of these kinds; the CLI
// maps a few of them to dedicated exit codes (see tools/miniversal.cpp).
// ---------------------------------------------------------------------------

enum class ErrorKind {
    Generic,
    DivisionByZero,
    PrecisionExhausted,
    SingularMatrix,
    InconsistentSystem,
    UnsupportedMode,
    AmbiguousRank,
    SpecError,
    NotAComplement,
    OutsideRadius,
    NoConvergence,
    MonitorViolation,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

struct DivisionByZero : Error {
    explicit DivisionByZero(const std::string& w = "division by zero") : Error(ErrorKind::DivisionByZero, w) {}
};

struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& w = "fewer than one significant digit remains")
        : Error(ErrorKind::PrecisionExhausted, w) {}
};

struct SingularMatrix : Error {
    explicit SingularMatrix(const std::string& w = "matrix is singular") : Error(ErrorKind::SingularMatrix, w) {}
};

struct InconsistentSystem : Error {
    explicit InconsistentSystem(const std::string& w = "linear system has no solution")
        : Error(ErrorKind::InconsistentSystem, w) {}
};

struct UnsupportedMode : Error {
    explicit UnsupportedMode(const std::string& w = "mode not supported on this field backend")
        : Error(ErrorKind::UnsupportedMode, w) {}
};

struct AmbiguousRank : Error {
    explicit AmbiguousRank(double pivot, const std::string& w = "pivot magnitude falls inside the tolerance band")
        : Error(ErrorKind::AmbiguousRank, w + " (pivot " + std::to_string(pivot) + ")"), pivot_magnitude(pivot) {}
    double pivot_magnitude;
};

struct SpecError : Error {
    explicit SpecError(const std::string& w) : Error(ErrorKind::SpecError, w) {}
};

struct NotAComplement : Error {
    NotAComplement(std::size_t dim_tangent, std::size_t star_count, std::size_t n)
        : Error(ErrorKind::NotAComplement,
                "star pattern does not complement the tangent space (dim T = " + std::to_string(dim_tangent) +
                    ", stars = " + std::to_string(star_count) + ", n^2 = " + std::to_string(n * n) + ")"),
          dim_tangent(dim_tangent),
          star_count(star_count),
          n(n) {}
    std::size_t dim_tangent;
    std::size_t star_count;
    std::size_t n;
};

struct OutsideRadius : Error {
    OutsideRadius(double norm_x, double rho)
        : Error(ErrorKind::OutsideRadius,
                "perturbation norm " + std::to_string(norm_x) + " is not below the radius " + std::to_string(rho)),
          norm_x(norm_x),
          rho(rho) {}
    double norm_x;
    double rho;
};

// One row of the reduction trace; all monitors are plain reals regardless of
// the field backend.
struct TraceRow {
    int k = 0;
    double norm_M = 0;
    double norm_M_D = 0;
    double delta = 0;
    double tau = 0;
    double norm_C = 0;
};

struct NoConvergence : Error {
    NoConvergence(int steps, std::vector<TraceRow> trace)
        : Error(ErrorKind::NoConvergence, "no convergence after " + std::to_string(steps) + " steps"),
          steps(steps),
          trace(std::move(trace)) {}
    int steps;
    std::vector<TraceRow> trace;
};

struct MonitorViolation : Error {
    MonitorViolation(int k, const std::string& which, double value, double bound)
        : Error(ErrorKind::MonitorViolation,
                "monitor " + which + " violated at step " + std::to_string(k) + ": " + std::to_string(value) +
                    " vs bound " + std::to_string(bound)),
          k(k),
          which(which),
          value(value),
          bound(bound) {}
    int k;
    std::string which;
    double value;
    double bound;
};

inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotAComplement: return 2;
        case ErrorKind::OutsideRadius: return 3;
        case ErrorKind::NoConvergence: return 4;
        case ErrorKind::MonitorViolation: return 5;
        default: return 1;
    }
}

inline const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Generic: return "Generic";
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorKind::SingularMatrix: return "SingularMatrix";
        case ErrorKind::InconsistentSystem: return "InconsistentSystem";
        case ErrorKind::UnsupportedMode: return "UnsupportedMode";
        case ErrorKind::AmbiguousRank: return "AmbiguousRank";
        case ErrorKind::SpecError: return "SpecError";
        case ErrorKind::NotAComplement: return "NotAComplement";
        case ErrorKind::OutsideRadius: return "OutsideRadius";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::MonitorViolation: return "MonitorViolation";
    }
    return "Unknown";
}

// ---------------------------------------------------------------------------
// Rational helpers.
// ---------------------------------------------------------------------------

// Parses "a", "-a" or "a/b" with decimal integer parts.
inline Rational parse_rational(const std::string& text) {
    auto is_int = [](const std::string& s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    auto slash = text.find('/');
    if (slash == std::string::npos) {
        if (!is_int(text)) throw SpecError("invalid rational literal '" + text + "'");
        return Rational(BigInt(text));
    }
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) throw SpecError("invalid rational literal '" + text + "'");
    BigInt d(den);
    if (d == 0) throw SpecError("rational literal with zero denominator: '" + text + "'");
    return Rational(BigInt(num), d);
}

inline std::string rational_string(const Rational& r) { return r.str(); }

// Extended-Euclid modular inverse; m > 1.
inline BigInt mod_inverse(const BigInt& a, const BigInt& m) {
    BigInt old_r = ((a % m) + m) % m, r = m;
    BigInt old_s = 1, s = 0;
    while (r != 0) {
        BigInt q = old_r / r;
        BigInt tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) throw DivisionByZero("element not invertible modulo " + m.str());
    return ((old_s % m) + m) % m;
}

// Divides out all factors p from x (x != 0); returns the multiplicity.
inline long long strip_factor(BigInt& x, long long p) {
    long long count = 0;
    BigInt q, r;
    while (true) {
        boost::multiprecision::divide_qr(x, BigInt(p), q, r);
        if (r != 0) break;
        x = q;
        ++count;
    }
    return count;
}

inline bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace miniversal
