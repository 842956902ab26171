#pragma once

#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <string>

#include "miniversal/io.hpp"
#include "miniversal/sampling.hpp"

namespace miniversal {

struct RunConfig {
    std::string cmd;
    Json job;
    std::optional<SolveMode> mode;
    std::optional<int> precision;
    std::optional<double> tol_stop;
    std::optional<int> k_max;
    std::optional<double> margin;
    std::optional<std::string> trace_path;
    std::optional<Json> result;  // prior reduce output, for `verify`
    std::uint64_t seed = kDefaultSeed;
};

namespace detail {

template <FieldBackend F>
struct ProblemSetup {
    Matrix<F> matrix;
    StarPattern pattern;
    PatternCertificate certificate;
    bool pattern_overridden = false;
};

// Resolves A and its star pattern from the job: canonical build for block
// specs, greedy complement for explicit matrices, explicit override when the
// job carries one.  The pattern is always certified here.
template <FieldBackend F>
ProblemSetup<F> resolve_problem(const F& f, const Json& job) {
    bool has_entries = job.contains("matrix");
    bool has_blocks = job.contains("blocks");
    if (has_entries == has_blocks) throw SpecError("job needs exactly one of 'matrix' or 'blocks'");

    std::optional<StarPattern> override_pattern;
    if (job.contains("pattern")) override_pattern = pattern_from_json(job.at("pattern"));

    if (has_blocks) {
        auto [groups, kind] = block_spec_from_json(f, job.at("blocks"));
        CanonicalBuild<F> build = canonical_pattern(f, groups, kind);
        StarPattern pat = override_pattern ? *override_pattern : build.pattern;
        PatternCertificate cert = certify_pattern(build.matrix, pat);
        return {std::move(build.matrix), std::move(pat), cert, override_pattern.has_value()};
    }
    Matrix<F> a = matrix_from_json(f, job.at("matrix"));
    if (!a.is_square()) throw SpecError("job matrix must be square");
    StarPattern pat = override_pattern ? *override_pattern : greedy_pattern(a);
    PatternCertificate cert = certify_pattern(a, pat);
    return {std::move(a), std::move(pat), cert, override_pattern.has_value()};
}

inline const Json* job_option(const Json& job, const char* key) {
    if (job.contains("options") && job.at("options").contains(key)) return &job.at("options").at(key);
    return nullptr;
}

template <FieldBackend F>
SolveMode resolve_mode(const RunConfig& cfg) {
    if (cfg.mode) return *cfg.mode;
    if (const Json* m = job_option(cfg.job, "mode")) {
        std::string s = m->get<std::string>();
        if (s == "min-norm" || s == "min_norm") return SolveMode::min_norm;
        if (s == "particular") return SolveMode::particular;
        throw SpecError("unknown mode '" + s + "'");
    }
    return default_corrector_mode<F>();
}

template <FieldBackend F>
Matrix<F> resolve_perturbation(const F& f, const RunConfig& cfg, std::size_t n, const CorrectorSet<F>& cs) {
    if (!cfg.job.contains("perturbation")) throw SpecError("job needs a 'perturbation' for this command");
    const Json& p = cfg.job.at("perturbation");
    if (p.is_object() && p.contains("sample_ratio")) {
        double ratio = p.at("sample_ratio").get<double>();
        if (!(ratio > 0)) throw SpecError("sample_ratio must be positive");
        std::mt19937_64 rng(cfg.seed);
        return sample_perturbation(f, n, rng, ratio * cs.rho);
    }
    Matrix<F> x = matrix_from_json(f, p);
    if (x.rows() != n || x.cols() != n) throw SpecError("perturbation dimensions do not match the matrix");
    return x;
}

inline ReduceOptions resolve_reduce_options(const RunConfig& cfg) {
    ReduceOptions opts;
    if (const Json* t = job_option(cfg.job, "tol_stop")) opts.tol_stop = t->get<double>();
    if (cfg.tol_stop) opts.tol_stop = *cfg.tol_stop;
    if (const Json* k = job_option(cfg.job, "k_max")) opts.k_max = k->get<int>();
    if (cfg.k_max) opts.k_max = *cfg.k_max;
    if (const Json* m = job_option(cfg.job, "margin")) opts.margin = m->get<double>();
    if (cfg.margin) opts.margin = *cfg.margin;
    return opts;
}

template <FieldBackend F>
int run_typed(const F& f, const RunConfig& cfg, Json& out, std::ostream& human) {
    const std::string& cmd = cfg.cmd;
    if (cmd == "lemma-dims") {
        if (!cfg.job.contains("lemma")) throw SpecError("job needs a 'lemma' section for lemma-dims");
        const Json& l = cfg.job.at("lemma");
        LemmaCase c{poly_from_json(l.at("p")), poly_from_json(l.at("q")), l.at("r").get<unsigned>(),
                    l.at("s").get<unsigned>()};
        Lemma42Report rep = lemma42_check(f, c);
        out["lemma"] = lemma_report_json(rep);
        human << "lemma dims: dim T = " << rep.dim << " expected " << rep.expected
              << (rep.all_ok() ? " [ok]" : " [MISMATCH]") << "\n";
        return rep.all_ok() ? 0 : 1;
    }

    ProblemSetup<F> setup = resolve_problem(f, cfg.job);
    std::size_t n = setup.matrix.rows();
    out["field"] = f.describe();
    out["n"] = n;

    if (cmd == "pattern") {
        out["pattern"] = pattern_to_json(setup.pattern);
        out["certificate"] = certificate_json(setup.certificate, n);
        human << "pattern certified: " << setup.pattern.star_count() << " stars, dim T = "
              << setup.certificate.dim_tangent << "\n";
        return 0;
    }

    SolveMode mode = resolve_mode<F>(cfg);
    CorrectorSet<F> cs = solve_correctors(setup.matrix, setup.pattern, mode, f.default_tol());

    if (cmd == "radius") {
        out["radius"] = Json{{"a", cs.a}, {"f", cs.f}, {"v", cs.v}, {"rho", cs.rho},
                             {"mode", mode == SolveMode::min_norm ? "min-norm" : "particular"}};
        human << "radius rho = " << cs.rho << " (a = " << cs.a << ", f = " << cs.f << ")\n";
        return 0;
    }
    if (cmd == "correctors") {
        out["correctors"] = corrector_set_json(cs);
        human << "solved " << (n * n - setup.pattern.star_count()) << " corrector systems, f = " << cs.f << "\n";
        return 0;
    }
    if (cmd == "reduce") {
        Matrix<F> x = resolve_perturbation(f, cfg, n, cs);
        ReduceOptions opts = resolve_reduce_options(cfg);
        ReductionResult<F> res = reduce(setup.matrix, x, cs, opts);
        VerifyReport rep = verify_reduction(setup.matrix, x, res, setup.pattern);
        out["perturbation_norm"] = x.norm();
        out["result"] = reduction_result_json(res);
        out["verify"] = verify_report_json(rep);
        if (cfg.trace_path) {
            std::ofstream tf(*cfg.trace_path);
            if (!tf) throw SpecError("cannot open trace file '" + *cfg.trace_path + "'");
            write_trace_csv(tf, res.trace);
        }
        human << "reduced in " << res.steps << " steps, off-pattern residual "
              << offpattern_norm(res.residual, setup.pattern) << ", verify "
              << (rep.all_ok() ? "ok" : "FAILED") << "\n";
        return 0;
    }
    if (cmd == "verify") {
        Json result_json;
        if (cfg.result)
            result_json = *cfg.result;
        else if (cfg.job.contains("result"))
            result_json = cfg.job.at("result");
        else
            throw SpecError("verify needs --result or a 'result' section in the job");
        if (result_json.contains("result")) result_json = result_json.at("result");  // accept raw reduce output
        Matrix<F> x = resolve_perturbation(f, cfg, n, cs);
        ReductionResult<F> res{matrix_from_json(f, result_json.at("S")),
                               matrix_from_json(f, result_json.at("D")),
                               true,
                               0,
                               0,
                               result_json.contains("tol_stop") ? result_json.at("tol_stop").get<double>()
                                                                : default_tol_stop(f, setup.matrix),
                               {}};
        VerifyReport rep = verify_reduction(setup.matrix, x, res, setup.pattern);
        out["verify"] = verify_report_json(rep);
        human << "verify " << (rep.all_ok() ? "ok" : "FAILED") << "\n";
        return rep.all_ok() ? 0 : 1;
    }
    throw SpecError("unknown command '" + cmd + "'");
}

}  // namespace detail

// Executes one job; machine JSON goes to `out`, the human summary to `human`.
// Returns the process exit code (0 ok, 2 NotAComplement, 3 OutsideRadius,
// 4 NoConvergence, 5 MonitorViolation, 1 anything else).
inline int run_command(const RunConfig& cfg, Json& out, std::ostream& human) {
    try {
        if (!cfg.job.contains("field")) throw SpecError("job needs a 'field' section");
        FieldConfig fcfg = parse_field_config(cfg.job.at("field"));
        if (cfg.precision) fcfg.precision = *cfg.precision;
        if (const Json* p = detail::job_option(cfg.job, "precision")) {
            if (!cfg.precision) fcfg.precision = p->get<int>();
        }
        return dispatch_field(fcfg, [&](auto field) { return detail::run_typed(field, cfg, out, human); });
    } catch (const Error& e) {
        out["error"] = Json{{"kind", error_kind_name(e.kind())}, {"message", e.what()}};
        if (const auto* oc = dynamic_cast<const OutsideRadius*>(&e)) {
            out["error"]["rho"] = oc->rho;
            out["error"]["norm"] = oc->norm_x;
            human << "outside radius: ||X|| = " << oc->norm_x << " but rho = " << oc->rho << "\n";
        } else if (const auto* nc = dynamic_cast<const NoConvergence*>(&e)) {
            out["error"]["trace"] = trace_json(nc->trace);
            human << "error: " << e.what() << "\n";
        } else {
            human << "error: " << e.what() << "\n";
        }
        return exit_code_for(e.kind());
    } catch (const Json::exception& e) {
        out["error"] = Json{{"kind", "json"}, {"message", e.what()}};
        human << "job parse error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace miniversal
