#pragma once

#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

#include "miniversal/common.hpp"
#include "miniversal/fields.hpp"
#include "miniversal/laurent.hpp"
#include "miniversal/matrix.hpp"
#include "miniversal/padic.hpp"

namespace miniversal {

inline constexpr std::uint64_t kDefaultSeed = 20170512;

// Seed for the perturbation sampler; MINIVERSAL_SEED overrides the default.
inline std::uint64_t seed_from_env() {
    if (const char* s = std::getenv("MINIVERSAL_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(s, &end, 10);
        if (end && *end == '\0') return v;
    }
    return kDefaultSeed;
}

// A generic element exercising the backend's representation: gaussian parts
// on C, random digit strings on Q_p, short series on F((T)).
template <FieldBackend F>
typename F::Value random_value(const F& f, std::mt19937_64& rng) {
    if constexpr (std::is_same_v<F, ComplexField>) {
        std::normal_distribution<double> g;
        return f.from_parts(g(rng), g(rng));
    } else if constexpr (std::is_same_v<F, PadicField>) {
        std::uniform_int_distribution<long long> zdist(-3, 3), digit(0, f.prime() - 1);
        std::vector<long long> digits(8);
        for (auto& d : digits) d = digit(rng);
        if (digits[0] == 0) digits[0] = 1;
        return f.from_digits(zdist(rng), digits);
    } else {
        std::uniform_int_distribution<long long> zdist(-2, 2), coeff(-4, 4), terms(1, 3);
        long long t = terms(rng);
        std::vector<typename F::Value> parts;
        auto v = f.zero();
        long long z = zdist(rng);
        for (long long i = 0; i < t; ++i) {
            long long c = coeff(rng);
            if (c == 0) c = 1;
            std::vector<typename std::remove_cvref_t<decltype(f.domain())>::Coeff> cs(
                static_cast<std::size_t>(i) + 1, f.domain().czero());
            cs.back() = f.domain().cfrom_rational(Rational(c));
            v = f.add(v, f.from_terms(z, cs));
        }
        return v;
    }
}

// A small embedded rational; cheap even on the series backend, where it is a
// one-term series.
template <FieldBackend F>
typename F::Value random_rational_entry(const F& f, std::mt19937_64& rng) {
    std::uniform_int_distribution<long long> num(-9, 9), den(1, 5);
    return f.from_rational(Rational(num(rng), den(rng)));
}

enum class EntryStyle { rationals, generic };

template <FieldBackend F>
Matrix<F> random_matrix(const F& f, std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                        EntryStyle style = EntryStyle::rationals) {
    Matrix<F> m(f, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m.at(i, j) = style == EntryStyle::rationals ? random_rational_entry(f, rng) : random_value(f, rng);
    return m;
}

// A random perturbation with norm as close to `target` as the backend's
// value group allows: equal to it on C, the largest base-power scaling not
// exceeding it on the non-archimedean backends.
template <FieldBackend F>
Matrix<F> sample_perturbation(const F& f, std::size_t n, std::mt19937_64& rng, double target) {
    if (!(target > 0)) throw SpecError("perturbation target norm must be positive");
    Matrix<F> x(f, n, n);
    while (x.all_zero()) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if constexpr (std::is_same_v<F, ComplexField>) {
                    std::normal_distribution<double> g;
                    x.at(i, j) = f.from_parts(g(rng), g(rng));
                } else {
                    // Small nonnegative valuations; the global scaling fixes the size.
                    std::uniform_int_distribution<long long> num(-9, 9);
                    long long c = num(rng);
                    x.at(i, j) = f.from_rational(Rational(c == 0 ? 1 : c));
                }
            }
    }
    double norm = x.norm();
    if constexpr (std::is_same_v<F, ComplexField>) {
        return x.scaled(f.from_parts(target / norm, 0.0));
    } else {
        // Multiply by base^k: the norm scales by base^(-k) exactly.
        double k = std::ceil(std::log(norm / target) / std::log(f.base()));
        long long kk = static_cast<long long>(k);
        while (norm * std::pow(f.base(), -static_cast<double>(kk)) > target) ++kk;
        Rational scale;
        if constexpr (std::is_same_v<F, PadicField>) {
            BigInt b(f.prime());
            scale = kk >= 0 ? Rational(boost::multiprecision::pow(b, static_cast<unsigned>(kk)))
                            : Rational(1, boost::multiprecision::pow(b, static_cast<unsigned>(-kk)));
            return x.scaled(f.from_rational(scale));
        } else {
            // T^k shift for Laurent backends.
            std::vector<typename std::remove_cvref_t<decltype(f.domain())>::Coeff> one{
                f.domain().cfrom_rational(Rational(1))};
            auto t_pow = f.from_terms(kk, one);
            return x.scaled(t_pow);
        }
    }
}

}  // namespace miniversal
