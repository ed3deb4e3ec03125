// Command-line surface of the F2P eigensolver library: solve / compare /
// sweep / filter-scan / oracle subcommands over Matrix Market or synthetic
// matrices, with JSON reports and CSV histories.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "f2p/f2p.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitParse = 3;
constexpr int kExitNumerical = 4;

struct CliOverrides {
    std::string config_path;
};

/// Registers every RunConfig knob as an optional flag on a subcommand.
void add_common_options(CLI::App* cmd, f2p::RunConfig& cfg, CliOverrides& ov) {
    cmd->add_option("--config", ov.config_path, "flat key = value config file");
    cmd->add_option("--matrix", cfg.matrix,
                    "Matrix Market path, or diag:n | diag:a:step:b | lap1d:n");
    cmd->add_option("-a,--a", cfg.a, "interval lower end");
    cmd->add_option("-b,--b", cfg.b, "interval upper end");
    cmd->add_option("-r,--radius", cfg.radius, "two-circle radius (default (b-a)/2)");
    cmd->add_option("-q,--quadrature", cfg.q, "Gauss-Legendre order (1..64)");
    cmd->add_option("-m,--block-size", cfg.m, "columns of the iteration block");
    cmd->add_option("--num-cmp", cfg.num_cmp, "pairs tracked (default m/2)");
    cmd->add_option("--num-out", cfg.num_out, "pairs returned (default num_cmp)");
    cmd->add_option("--num-eigm", cfg.num_eigm, "shift-window length");
    cmd->add_option("--min-eig", cfg.min_eig, "lower spectrum estimate");
    cmd->add_option("--max-it", cfg.max_it, "outer iterations");
    cmd->add_option("--sub-max-it", cfg.sub_max_it, "inner power iterations");
    cmd->add_option("--sub-tol", cfg.sub_tol, "inner acceptance tolerance");
    cmd->add_option("--tol", cfg.tol, "stopping tolerance (feast/feast2/psi)");
    cmd->add_option("--inner-tol", cfg.inner_tol, "BiCG relative residual target");
    cmd->add_option("--inner-max-iter", cfg.inner_max_iter, "BiCG iteration cap (0 = 5n)");
    cmd->add_option("--seed", cfg.seed, "PRNG seed of the start block");
    cmd->add_option("-o,--output", cfg.output, "JSON report path");
    cmd->add_option("--csv", cfg.csv, "CSV path (history / scan curve)");
    cmd->add_option("--reference", cfg.reference, "reference spectrum CSV for tau_lambda");
    cmd->add_flag("--parallel-inner", cfg.parallel_inner,
                  "solve the shifted systems concurrently (F2P_NUM_THREADS)");
    cmd->add_option("--threads", cfg.threads, "thread count for --parallel-inner");
}

/// Config file first, then every flag the user actually passed on top.
f2p::RunConfig merge_config(const CLI::App* cmd, const f2p::RunConfig& flags,
                            const CliOverrides& ov) {
    f2p::RunConfig cfg;
    if (!ov.config_path.empty()) cfg = f2p::RunConfig::load(ov.config_path);

    auto touched = [cmd](const std::string& name) { return cmd->count(name) > 0; };
    if (touched("--matrix")) cfg.matrix = flags.matrix;
    if (touched("--a")) cfg.a = flags.a;
    if (touched("--b")) cfg.b = flags.b;
    if (touched("--radius")) cfg.radius = flags.radius;
    if (touched("--quadrature")) cfg.q = flags.q;
    if (touched("--block-size")) cfg.m = flags.m;
    if (touched("--num-cmp")) cfg.num_cmp = flags.num_cmp;
    if (touched("--num-out")) cfg.num_out = flags.num_out;
    if (touched("--num-eigm")) cfg.num_eigm = flags.num_eigm;
    if (touched("--min-eig")) cfg.min_eig = flags.min_eig;
    if (touched("--max-it")) cfg.max_it = flags.max_it;
    if (touched("--sub-max-it")) cfg.sub_max_it = flags.sub_max_it;
    if (touched("--sub-tol")) cfg.sub_tol = flags.sub_tol;
    if (touched("--tol")) cfg.tol = flags.tol;
    if (touched("--inner-tol")) cfg.inner_tol = flags.inner_tol;
    if (touched("--inner-max-iter")) cfg.inner_max_iter = flags.inner_max_iter;
    if (touched("--seed")) cfg.seed = flags.seed;
    if (touched("--output")) cfg.output = flags.output;
    if (touched("--csv")) cfg.csv = flags.csv;
    if (touched("--reference")) cfg.reference = flags.reference;
    if (touched("--parallel-inner")) cfg.parallel_inner = flags.parallel_inner;
    if (touched("--threads")) cfg.threads = flags.threads;
    return cfg;
}

void print_summary(const f2p::RunReport& report) {
    for (const f2p::LaneReport& lane : report.lanes) {
        if (lane.name.rfind("window", 0) == 0) continue;
        std::cout << lane.name << ": eig_out = " << lane.metrics.eig_out;
        if (lane.metrics.tau_r != -1.0) std::cout << ", tau_r = " << lane.metrics.tau_r;
        if (lane.metrics.tau_lambda)
            std::cout << ", tau_lambda = " << lane.metrics.tau_lambda->value
                      << (lane.metrics.tau_lambda->absolute ? " (absolute)" : "");
        if (lane.metrics.iter_max_inner > 0)
            std::cout << ", #iter = " << lane.metrics.iter_max_inner;
        std::cout << ", #(A-sigmaI)Y = " << lane.metrics.num_ay_total << "\n";
        for (std::size_t i = 0; i < lane.eigenvalues.size(); ++i)
            std::cout << "  " << lane.eigenvalues[i] << "  (res " << lane.residuals[i]
                      << ")\n";
    }
}

int run_and_report(const f2p::RunConfig& cfg) {
    try {
        const f2p::RunReport report = f2p::run(cfg);
        if (!cfg.output.empty()) f2p::write_report(report, cfg.output);
        print_summary(report);
        return kExitOk;
    } catch (const f2p::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const f2p::ParseError& e) {
        std::cerr << "parse error (line " << e.line << "): " << e.what() << "\n";
        return kExitParse;
    } catch (const f2p::UnsupportedFormat& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const f2p::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitParse;
    } catch (const f2p::Error& e) {
        // numerical failure: flush a partial report so the config and the
        // failure reason are still machine-readable
        std::cerr << "numerical failure: " << e.what() << "\n";
        if (!cfg.output.empty()) {
            try {
                f2p::RunReport partial;
                partial.config = cfg;
                f2p::LaneReport lane;
                lane.name = std::string("error: ") + e.what();
                partial.lanes.push_back(std::move(lane));
                f2p::write_report(partial, cfg.output);
            } catch (const std::exception&) {
            }
        }
        return kExitNumerical;
    }
}

int run_oracle(const std::string& matrix, const std::string& out_path, double lo, double hi,
               bool have_interval) {
    try {
        const f2p::SparseSymMatrix a = f2p::load_matrix(matrix);
        std::vector<double> values = f2p::dense_spectrum(a);
        if (have_interval && lo >= hi)
            throw f2p::ConfigError("oracle: need a < b when filtering");
        if (have_interval)
            std::erase_if(values, [&](double v) { return !(v > lo && v < hi); });
        if (out_path.empty())
            for (double v : values) std::cout << f2p::detail::fmt17(v) << "\n";
        else
            f2p::write_spectrum_csv(values, out_path);
        return kExitOk;
    } catch (const f2p::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const f2p::ParseError& e) {
        std::cerr << "parse error (line " << e.line << "): " << e.what() << "\n";
        return kExitParse;
    } catch (const f2p::UnsupportedFormat& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const f2p::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"F2P: two-circle contour-filtered subspace iteration for the largest "
                 "eigenvalues of a real symmetric matrix inside an interval"};
    app.require_subcommand(1);

    f2p::RunConfig flags;
    CliOverrides ov;

    CLI::App* solve = app.add_subcommand("solve", "run one algorithm on one interval");
    std::string algorithm = "f2p";
    solve->add_option("--algorithm", algorithm, "feast | feast2 | psi | f2p | sweep");
    add_common_options(solve, flags, ov);

    CLI::App* compare = app.add_subcommand(
        "compare", "run feast, feast2 and f2p with one seed and aligned histories");
    add_common_options(compare, flags, ov);

    CLI::App* sweep =
        app.add_subcommand("sweep", "find all eigenvalues in (a, b) by sliding windows");
    add_common_options(sweep, flags, ov);

    CLI::App* scan =
        app.add_subcommand("filter-scan", "sample the scalar rational filter on a grid");
    add_common_options(scan, flags, ov);
    scan->add_option("--center", flags.scan_center, "circle center");
    scan->add_option("--circle-radius", flags.scan_radius, "circle radius");
    scan->add_option("--lambda-min", flags.scan_min, "grid start");
    scan->add_option("--lambda-max", flags.scan_max, "grid end");
    scan->add_option("--points", flags.scan_points, "grid size");

    CLI::App* oracle = app.add_subcommand(
        "oracle", "dense reference spectrum (decreasing CSV), n <= 2000");
    std::string oracle_matrix, oracle_out;
    double oracle_a = 0.0, oracle_b = 0.0;
    oracle->add_option("--matrix", oracle_matrix, "matrix path or synthetic spec")
        ->required();
    oracle->add_option("-o,--output", oracle_out, "output CSV ('' = stdout)");
    oracle->add_option("-a,--a", oracle_a, "keep only eigenvalues > a");
    oracle->add_option("-b,--b", oracle_b, "keep only eigenvalues < b");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            f2p::RunConfig cfg = merge_config(solve, flags, ov);
            if (solve->count("--algorithm") > 0 || cfg.algorithm.empty())
                cfg.algorithm = algorithm;
            return run_and_report(cfg);
        }
        if (compare->parsed()) {
            f2p::RunConfig cfg = merge_config(compare, flags, ov);
            cfg.algorithm = "compare";
            return run_and_report(cfg);
        }
        if (sweep->parsed()) {
            f2p::RunConfig cfg = merge_config(sweep, flags, ov);
            cfg.algorithm = "sweep";
            return run_and_report(cfg);
        }
        if (scan->parsed()) {
            f2p::RunConfig cfg = merge_config(scan, flags, ov);
            cfg.algorithm = "filter-scan";
            if (scan->count("--center")) cfg.scan_center = flags.scan_center;
            if (scan->count("--circle-radius")) cfg.scan_radius = flags.scan_radius;
            if (scan->count("--lambda-min")) cfg.scan_min = flags.scan_min;
            if (scan->count("--lambda-max")) cfg.scan_max = flags.scan_max;
            if (scan->count("--points")) cfg.scan_points = flags.scan_points;
            return run_and_report(cfg);
        }
        if (oracle->parsed())
            return run_oracle(oracle_matrix, oracle_out, oracle_a, oracle_b,
                              oracle->count("--a") > 0 || oracle->count("--b") > 0);
    } catch (const f2p::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
