#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "miniversal/runner.hpp"

using namespace miniversal;

int main(int argc, char** argv) {
    CLI::App app{"miniversal deformation patterns, radii, and reducing transformations"};

    std::string job_path, cmd, mode_s, trace_path, result_path;
    int precision = 0, k_max = 0;
    double tol_stop = -1;
    bool compact = false;

    app.add_option("--job", job_path, "job file (JSON)")->required();
    app.add_option("--cmd", cmd, "pattern|correctors|radius|reduce|verify|lemma-dims")->required();
    app.add_option("--mode", mode_s, "min-norm|particular (corrector solve mode)");
    app.add_option("--precision", precision, "working precision for the truncated backends");
    app.add_option("--tol-stop", tol_stop, "stopping tolerance for the reduction");
    app.add_option("--k-max", k_max, "iteration cap for the reduction");
    app.add_option("--trace", trace_path, "write the reduction trace as CSV to this path");
    app.add_option("--result", result_path, "reduce output JSON to verify (verify also reads job['result'])");
    app.add_flag("--compact", compact, "single-line JSON output");

    CLI11_PARSE(app, argc, argv);

    RunConfig cfg;
    cfg.cmd = cmd;
    cfg.seed = seed_from_env();

    std::ifstream jf(job_path);
    if (!jf) {
        std::cerr << "cannot open job file '" << job_path << "'\n";
        return 1;
    }
    try {
        cfg.job = Json::parse(jf);
    } catch (const Json::exception& e) {
        std::cerr << "job parse error: " << e.what() << "\n";
        return 1;
    }

    if (!mode_s.empty()) {
        if (mode_s == "min-norm" || mode_s == "min_norm")
            cfg.mode = SolveMode::min_norm;
        else if (mode_s == "particular")
            cfg.mode = SolveMode::particular;
        else {
            std::cerr << "unknown mode '" << mode_s << "'\n";
            return 1;
        }
    }
    if (precision > 0) cfg.precision = precision;
    if (tol_stop >= 0) cfg.tol_stop = tol_stop;
    if (k_max > 0) cfg.k_max = k_max;
    if (!trace_path.empty()) cfg.trace_path = trace_path;
    if (!result_path.empty()) {
        std::ifstream rf(result_path);
        if (!rf) {
            std::cerr << "cannot open result file '" << result_path << "'\n";
            return 1;
        }
        try {
            cfg.result = Json::parse(rf);
        } catch (const Json::exception& e) {
            std::cerr << "result parse error: " << e.what() << "\n";
            return 1;
        }
    }

    Json out;
    int code = run_command(cfg, out, std::cerr);
    std::cout << (compact ? out.dump() : out.dump(2)) << "\n";
    return code;
}
