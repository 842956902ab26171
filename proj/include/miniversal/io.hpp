#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "miniversal/common.hpp"
#include "miniversal/correctors.hpp"
#include "miniversal/fields.hpp"
#include "miniversal/laurent.hpp"
#include "miniversal/matrix.hpp"
#include "miniversal/oracle.hpp"
#include "miniversal/padic.hpp"
#include "miniversal/pattern.hpp"
#include "miniversal/polynomial.hpp"
#include "miniversal/reducer.hpp"

namespace miniversal {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Field configuration.
// ---------------------------------------------------------------------------

struct FieldConfig {
    enum class Kind { complex_kind, padic, laurent };
    Kind kind = Kind::complex_kind;
    long long p = 2;
    int precision = 64;
    bool rational_coeffs = true;
    long long prime_modulus = 2;
};

inline FieldConfig parse_field_config(const Json& j) {
    if (!j.is_object() || !j.contains("kind")) throw SpecError("field config needs a 'kind'");
    FieldConfig cfg;
    std::string kind = j.at("kind").get<std::string>();
    if (j.contains("precision")) cfg.precision = j.at("precision").get<int>();
    if (kind == "complex") {
        cfg.kind = FieldConfig::Kind::complex_kind;
    } else if (kind == "padic") {
        cfg.kind = FieldConfig::Kind::padic;
        if (!j.contains("p")) throw SpecError("padic field config needs 'p'");
        cfg.p = j.at("p").get<long long>();
    } else if (kind == "laurent") {
        cfg.kind = FieldConfig::Kind::laurent;
        if (j.contains("coeffs")) {
            const Json& c = j.at("coeffs");
            if (c.is_string() && c.get<std::string>() == "rational") {
                cfg.rational_coeffs = true;
            } else if (c.is_object() && c.contains("primefield")) {
                cfg.rational_coeffs = false;
                cfg.prime_modulus = c.at("primefield").get<long long>();
            } else {
                throw SpecError("laurent 'coeffs' must be \"rational\" or {\"primefield\": q}");
            }
        }
    } else {
        throw SpecError("unknown field kind '" + kind + "'");
    }
    return cfg;
}

inline Json field_config_json(const FieldConfig& cfg) {
    Json j;
    switch (cfg.kind) {
        case FieldConfig::Kind::complex_kind: j["kind"] = "complex"; break;
        case FieldConfig::Kind::padic:
            j["kind"] = "padic";
            j["p"] = cfg.p;
            j["precision"] = cfg.precision;
            break;
        case FieldConfig::Kind::laurent:
            j["kind"] = "laurent";
            if (cfg.rational_coeffs)
                j["coeffs"] = "rational";
            else
                j["coeffs"] = Json{{"primefield", cfg.prime_modulus}};
            j["precision"] = cfg.precision;
            break;
    }
    return j;
}

template <typename Fn>
decltype(auto) dispatch_field(const FieldConfig& cfg, Fn&& fn) {
    switch (cfg.kind) {
        case FieldConfig::Kind::complex_kind: return fn(ComplexField{});
        case FieldConfig::Kind::padic: return fn(PadicField(cfg.p, cfg.precision));
        case FieldConfig::Kind::laurent:
            if (cfg.rational_coeffs) return fn(LaurentRationalField(cfg.precision));
            return fn(LaurentPrimeField(cfg.precision, PrimeFieldCoeffs(cfg.prime_modulus)));
    }
    throw SpecError("unreachable field kind");
}

// ---------------------------------------------------------------------------
// Scalars.
// ---------------------------------------------------------------------------

inline Rational rational_from_json(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number_float()) {
        double v = j.get<double>();
        if (v == static_cast<long long>(v)) return Rational(static_cast<long long>(v));
        throw SpecError("non-integral number where an exact rational is required; use \"a/b\" strings");
    }
    throw SpecError("expected a rational literal");
}

// Element literals: [re, im] on C; exact rational strings or explicit
// {z, digits}/{z, coeffs} expansions on the truncated backends.
template <FieldBackend F>
typename F::Value value_from_json(const F& f, const Json& j) {
    if constexpr (std::is_same_v<F, ComplexField>) {
        if (j.is_array()) {
            if (j.size() != 2) throw SpecError("complex literals are [re, im]");
            return f.from_parts(j[0].get<double>(), j[1].get<double>());
        }
        if (j.is_number()) return f.from_parts(j.get<double>(), 0.0);
        if (j.is_string()) return f.from_rational(parse_rational(j.get<std::string>()));
        throw SpecError("invalid complex literal");
    } else if constexpr (std::is_same_v<F, PadicField>) {
        if (j.is_object()) {
            if (!j.contains("z") || !j.contains("digits")) throw SpecError("p-adic literals are {z, digits}");
            return f.from_digits(j.at("z").get<long long>(), j.at("digits").get<std::vector<long long>>());
        }
        return f.from_rational(rational_from_json(j));
    } else {
        if (j.is_object()) {
            if (!j.contains("z") || !j.contains("coeffs")) throw SpecError("Laurent literals are {z, coeffs}");
            std::vector<typename std::remove_cvref_t<decltype(f.domain())>::Coeff> cs;
            for (const auto& c : j.at("coeffs")) cs.push_back(f.domain().cfrom_rational(rational_from_json(c)));
            return f.from_terms(j.at("z").get<long long>(), std::move(cs));
        }
        return f.from_rational(rational_from_json(j));
    }
}

template <FieldBackend F>
Json value_to_json(const F& f, const typename F::Value& v) {
    if constexpr (std::is_same_v<F, ComplexField>) {
        return Json::array({v.real(), v.imag()});
    } else if constexpr (std::is_same_v<F, PadicField>) {
        // The stored truncation is an exact rational; emit it as such.
        return f.is_zero(v) ? Json("0") : Json(rational_string(f.to_rational(v)));
    } else {
        if (f.is_zero(v)) return Json("0");
        Json coeffs = Json::array();
        for (const auto& c : v.coeffs) {
            if constexpr (std::is_same_v<std::remove_cvref_t<decltype(f.domain())>, RationalCoeffs>)
                coeffs.push_back(rational_string(c));
            else
                coeffs.push_back(c);
        }
        return Json{{"z", v.z}, {"coeffs", std::move(coeffs)}};
    }
}

// ---------------------------------------------------------------------------
// Matrices, patterns, polynomials.
// ---------------------------------------------------------------------------

template <FieldBackend F>
Matrix<F> matrix_from_json(const F& f, const Json& j) {
    const Json& rows = j.is_object() ? j.at("entries") : j;
    if (!rows.is_array() || rows.empty()) throw SpecError("matrix entries must be a non-empty array of rows");
    std::size_t m = rows.size(), n = rows[0].size();
    Matrix<F> a(f, m, n);
    for (std::size_t i = 0; i < m; ++i) {
        if (rows[i].size() != n) throw SpecError("ragged matrix rows");
        for (std::size_t jj = 0; jj < n; ++jj) a.at(i, jj) = value_from_json(f, rows[i][jj]);
    }
    return a;
}

template <FieldBackend F>
Json matrix_to_json(const Matrix<F>& a) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(value_to_json(a.field(), a.at(i, j)));
        rows.push_back(std::move(row));
    }
    return Json{{"rows", a.rows()}, {"cols", a.cols()}, {"entries", std::move(rows)}};
}

// 1-based star positions on the wire.
inline Json pattern_to_json(const StarPattern& d) {
    Json stars = Json::array();
    for (auto [i, j] : d.stars()) stars.push_back(Json::array({i + 1, j + 1}));
    return Json{{"n", d.n()}, {"stars", std::move(stars)}};
}

inline StarPattern pattern_from_json(const Json& j) {
    StarPattern d(j.at("n").get<std::size_t>());
    for (const auto& s : j.at("stars")) {
        std::size_t i = s[0].get<std::size_t>(), jj = s[1].get<std::size_t>();
        if (i == 0 || jj == 0) throw SpecError("star positions are 1-based");
        d.add_star(i - 1, jj - 1);
    }
    return d;
}

// Coefficient lists with the constant term last.
inline RationalPoly poly_from_json(const Json& j) {
    std::vector<Rational> desc;
    for (const auto& c : j) desc.push_back(rational_from_json(c));
    return RationalPoly::from_descending(std::move(desc));
}

inline Json poly_to_json(const RationalPoly& p) {
    Json out = Json::array();
    for (const auto& c : p.descending()) out.push_back(rational_string(c));
    return out;
}

// ---------------------------------------------------------------------------
// Block specifications.
// ---------------------------------------------------------------------------

template <FieldBackend F>
std::pair<std::vector<BlockGroup<F>>, CanonicalKind> block_spec_from_json(const F& f, const Json& j) {
    std::string kind_s = j.at("kind").get<std::string>();
    CanonicalKind kind;
    if (kind_s == "frobenius")
        kind = CanonicalKind::frobenius;
    else if (kind_s == "jordan")
        kind = CanonicalKind::jordan;
    else if (kind_s == "real_jordan")
        kind = CanonicalKind::real_jordan;
    else
        throw SpecError("unknown block kind '" + kind_s + "'");

    std::vector<BlockGroup<F>> groups;
    for (const auto& g : j.at("groups")) {
        BlockGroup<F> group;
        group.sizes = g.at("sizes").get<std::vector<std::size_t>>();
        if (g.contains("eigenvalue")) {
            group.label = value_from_json(f, g.at("eigenvalue"));
        } else if (g.contains("polynomial")) {
            group.label = poly_from_json(g.at("polynomial"));
        } else if (g.contains("rotation")) {
            const Json& r = g.at("rotation");
            group.label = RotationPair{r[0].get<double>(), r[1].get<double>()};
        } else {
            throw SpecError("block group needs an 'eigenvalue', 'polynomial', or 'rotation' label");
        }
        groups.push_back(std::move(group));
    }
    return {std::move(groups), kind};
}

// ---------------------------------------------------------------------------
// Results.
// ---------------------------------------------------------------------------

inline Json certificate_json(const PatternCertificate& c, std::size_t n) {
    return Json{{"certified", true},
                {"dim_tangent", c.dim_tangent},
                {"star_count", c.star_count},
                {"codimension", n * n - c.dim_tangent}};
}

template <FieldBackend F>
Json corrector_set_json(const CorrectorSet<F>& cs) {
    Json correctors = Json::array();
    std::size_t n = cs.n();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (cs.pattern.is_star(i, j)) continue;  // star correctors are identically zero
            correctors.push_back(Json{{"i", i + 1}, {"j", j + 1}, {"matrix", matrix_to_json(cs.at(i, j))}});
        }
    return Json{{"mode", cs.mode == SolveMode::min_norm ? "min-norm" : "particular"},
                {"a", cs.a},
                {"f", cs.f},
                {"v", cs.v},
                {"rho", cs.rho},
                {"correctors", std::move(correctors)}};
}

inline Json trace_json(const std::vector<TraceRow>& trace) {
    Json rows = Json::array();
    for (const auto& r : trace)
        rows.push_back(Json{{"k", r.k},
                            {"norm_M", r.norm_M},
                            {"norm_M_D", r.norm_M_D},
                            {"delta_k", r.delta},
                            {"tau_k", r.tau},
                            {"norm_C", r.norm_C}});
    return rows;
}

inline void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace) {
    os << "k,norm_M,norm_M_D,delta_k,tau_k,norm_C\n";
    os.precision(17);
    for (const auto& r : trace)
        os << r.k << ',' << r.norm_M << ',' << r.norm_M_D << ',' << r.delta << ',' << r.tau << ',' << r.norm_C
           << '\n';
}

template <FieldBackend F>
Json reduction_result_json(const ReductionResult<F>& res, bool include_trace = true) {
    Json j{{"converged", res.converged},
           {"steps", res.steps},
           {"epsilon", res.epsilon},
           {"tol_stop", res.tol_stop},
           {"S", matrix_to_json(res.S)},
           {"D", matrix_to_json(res.residual)},
           {"bounds",
            Json{{"S_deviation", res.s_deviation},
                 {"S_bound", res.s_bound},
                 {"S_bound_ok", res.s_bound_ok},
                 {"D_norm", res.d_norm},
                 {"D_bound", res.d_bound},
                 {"D_bound_ok", res.d_bound_ok}}}};
    if (include_trace) j["trace"] = trace_json(res.trace);
    return j;
}

inline Json verify_report_json(const VerifyReport& rep) {
    return Json{{"all_ok", rep.all_ok()},
                {"equality_ok", rep.equality_ok},
                {"equality_error", rep.equality_error},
                {"equality_tol", rep.equality_tol},
                {"membership_ok", rep.membership_ok},
                {"offpattern_residual", rep.offpattern_residual},
                {"trace_ok", rep.trace_ok},
                {"det_ok", rep.det_ok},
                {"charpoly_ok", rep.charpoly_ok},
                {"charpoly_max_err", rep.charpoly_max_err}};
}

inline Json lemma_report_json(const Lemma42Report& rep) {
    Json j{{"m", rep.m},          {"n", rep.n},           {"same_polynomial", rep.same_poly},
           {"dim", rep.dim},      {"expected", rep.expected}, {"dim_ok", rep.dim_ok},
           {"all_ok", rep.all_ok()}};
    if (rep.last_row_complement_ok) j["last_row_complement_ok"] = *rep.last_row_complement_ok;
    if (rep.first_column_complement_ok) j["first_column_complement_ok"] = *rep.first_column_complement_ok;
    return j;
}

}  // namespace miniversal
