// geoclt command-line front end.
#include "geoclt/experiments.hpp"
#include "geoclt/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace geoclt;

namespace {

void print_summary(const CLTReport& r)
{
    std::printf("%-8s %-6s %-14s %-12s %-8s %s\n", "n", "reps", "mean", "variance", "d_Kol", "failures");
    for (const NSummary& s : r.per_n)
        std::printf("%-8d %-6d %-14.8g %-12.5g %-8.4f %d\n", s.n, s.reps, s.mean, s.variance, s.kolmogorov,
                    s.failures);
    if (r.variance_fit)
        std::printf("variance slope %.4f (r2 %.4f, reference %.4f)\n", r.variance_fit->slope, r.variance_fit->r2,
                    -(r.dim + 3.0) / (r.dim - 1.0));
    if (r.rate_fit)
        std::printf("d_Kol exponent %.4f, below envelope: %s\n", r.rate_fit->exponent,
                    r.rate_fit->below_envelope ? "yes" : "no");
}

int run(int argc, char** argv)
{
    CLI::App app{"Normal-limit experiments and diagnostics for hulls of random boundary points"};
    app.set_version_flag("--version", std::string(GEOCLT_VERSION));
    app.require_subcommand(1);

    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "Suppress progress messages");
    auto logger = [&](const std::string& s) {
        if (!quiet)
            std::fprintf(stderr, "[geoclt] %s\n", s.c_str());
    };

    std::string config_path;
    std::string out_dir;
    int threads = 0;

    auto* exp = app.add_subcommand("experiment", "Run a CLT experiment");
    exp->add_option("--config", config_path, "TOML config")->required();
    exp->add_option("--out", out_dir, "Output directory")->required();
    exp->add_option("--threads", threads, "Worker threads (GEOCLT_THREADS caps this)");

    auto* diag = app.add_subcommand("diagnose", "Surface-body, visibility, containment and difference diagnostics");
    diag->add_option("--config", config_path, "TOML config with a [diagnose] table")->required();
    diag->add_option("--out", out_dir, "Output directory")->required();
    diag->add_option("--threads", threads, "Worker threads");

    int sample_n = 1000;
    std::string sample_out;
    std::uint64_t seed_override = 0;
    bool has_seed = false;
    auto* samp = app.add_subcommand("sample", "Draw boundary points from sigma");
    samp->add_option("--config", config_path, "TOML config")->required();
    samp->add_option("--n", sample_n, "Number of points")->check(CLI::PositiveNumber);
    samp->add_option("--out", sample_out, "CSV file")->required();
    auto* seed_opt = samp->add_option("--seed", seed_override, "Override master_seed");

    std::string in_dir;
    auto* rep = app.add_subcommand("report", "Rebuild report.json and plots from records.csv");
    rep->add_option("--in", in_dir, "Directory written by 'experiment'")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    has_seed = seed_opt->count() > 0;

    if (exp->parsed()) {
        const ExperimentConfig cfg = load_config(config_path);
        RunOptions opts;
        opts.threads = threads;
        opts.log = logger;
        const CLTReport r = run_experiment(cfg, opts);
        emit_report(r, out_dir);
        if (!quiet)
            print_summary(r);
        return 0;
    }
    if (diag->parsed()) {
        const ExperimentConfig cfg = load_config(config_path);
        RunOptions opts;
        opts.threads = threads;
        opts.log = logger;
        const auto rows = run_diagnostic(cfg, opts);
        fs::create_directories(out_dir);
        write_text(fs::path(out_dir) / "diagnostics.csv", diagnostics_csv(rows, cfg.hash()));
        nlohmann::json j{{"config", cfg.to_json()}, {"config_hash", cfg.hash()}, {"version", GEOCLT_VERSION}};
        std::map<std::string, std::vector<std::pair<double, double>>> series;
        for (const auto& r : rows)
            series[r.quantity].emplace_back(r.param, r.estimate);
        nlohmann::json fits = nlohmann::json::object();
        for (const auto& [q, pts] : series) {
            std::vector<double> x;
            std::vector<double> y;
            for (const auto& [p, v] : pts)
                if (p > 0.0 && v > 0.0) {
                    x.push_back(std::log(p));
                    y.push_back(std::log(v));
                }
            if (x.size() >= 2) {
                const LinearFit f = least_squares(x, y);
                fits[q] = {{"loglog_slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}};
            }
        }
        j["fits"] = fits;
        write_text(fs::path(out_dir) / "diagnostics.json", j.dump(2) + "\n");
        if (!quiet)
            std::cout << diagnostics_csv(rows, cfg.hash());
        return 0;
    }
    if (samp->parsed()) {
        ExperimentConfig cfg = load_config(config_path);
        if (has_seed)
            cfg.master_seed = seed_override;
        const ExperimentModel model(cfg);
        SeedStream stream(cfg.master_seed, {0xFFFF});
        const auto pts = model.sampler().sample(stream, sample_n);
        const int d = model.dim();
        std::string csv;
        for (int k = 0; k < d; ++k)
            csv += "x" + std::to_string(k) + ",";
        for (int k = 0; k < d; ++k)
            csv += "u" + std::to_string(k) + ",";
        csv += "curvature\n";
        char buf[40];
        for (const BoundaryPoint& p : pts) {
            for (int k = 0; k < d; ++k) {
                std::snprintf(buf, sizeof buf, "%.17g,", p.x(k));
                csv += buf;
            }
            for (int k = 0; k < d; ++k) {
                std::snprintf(buf, sizeof buf, "%.17g,", p.normal(k));
                csv += buf;
            }
            std::snprintf(buf, sizeof buf, "%.17g\n", p.curvature);
            csv += buf;
        }
        const fs::path out(sample_out);
        if (out.has_parent_path())
            fs::create_directories(out.parent_path());
        write_text(out, csv);
        return 0;
    }
    if (rep->parsed()) {
        const CLTReport r = rebuild_report(in_dir);
        if (!quiet)
            print_summary(r);
        return 0;
    }
    return 1;
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "geoclt: configuration error: %s\n", e.what());
        return 2;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "geoclt: numerical failure: %s\n", e.what());
        return 3;
    } catch (const ExperimentAbort& e) {
        std::fprintf(stderr, "geoclt: experiment aborted: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "geoclt: %s\n", e.what());
        return 1;
    }
}
