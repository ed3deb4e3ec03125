#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "f2p/config.hpp"
#include "f2p/errors.hpp"
#include "f2p/metrics.hpp"

namespace f2p {

/// One algorithm's slice of a report (a single run, one lane of a compare,
/// or one sweep window).
struct LaneReport {
    std::string name;
    bool converged = false;
    Metrics metrics;
    std::vector<double> eigenvalues;
    std::vector<double> residuals;
    std::vector<double> err_hist;
    std::vector<int> num_ay_hist;
};

/// Machine-readable outcome of one CLI invocation. Everything except the
/// wall_time block is a pure function of the config.
struct RunReport {
    RunConfig config;
    std::vector<LaneReport> lanes;
    double read_seconds = 0.0;
    double solve_seconds = 0.0;
    double total_seconds = 0.0;
};

namespace detail {

/// 17 significant digits round-trip a double exactly; -1 sentinels print as
/// a bare "-1".
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline nlohmann::ordered_json config_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["matrix"] = c.matrix;
    j["algorithm"] = c.algorithm;
    j["a"] = c.a;
    j["b"] = c.b;
    j["radius"] = c.effective_radius();
    j["q"] = c.q;
    j["m"] = c.m;
    j["num_cmp"] = c.effective_num_cmp();
    j["num_out"] = c.effective_num_out();
    j["num_eigm"] = c.num_eigm;
    j["min_eig"] = c.min_eig;
    j["max_it"] = c.max_it;
    j["sub_max_it"] = c.sub_max_it;
    j["sub_tol"] = c.sub_tol;
    j["tol"] = c.tol;
    j["inner_tol"] = c.inner_tol;
    j["inner_max_iter"] = c.inner_max_iter;
    j["seed"] = c.seed;
    j["parallel_inner"] = c.parallel_inner;
    j["threads"] = c.threads;
    j["reference"] = c.reference;
    return j;
}

inline nlohmann::ordered_json lane_json(const LaneReport& lane) {
    nlohmann::ordered_json j;
    j["name"] = lane.name;
    j["converged"] = lane.converged;
    nlohmann::ordered_json m;
    m["tau_r"] = lane.metrics.tau_r;
    if (lane.metrics.tau_lambda) {
        m["tau_lambda"] = lane.metrics.tau_lambda->value;
        m["tau_lambda_absolute"] = lane.metrics.tau_lambda->absolute;
    } else {
        m["tau_lambda"] = nullptr;
    }
    m["iter_max_inner"] = lane.metrics.iter_max_inner;
    m["num_ay_total"] = lane.metrics.num_ay_total;
    m["eig_out"] = lane.metrics.eig_out;
    j["metrics"] = m;
    j["eigenvalues"] = lane.eigenvalues;
    j["residuals"] = lane.residuals;
    j["err_hist"] = lane.err_hist;
    j["num_ay_hist"] = lane.num_ay_hist;
    return j;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const RunReport& r) {
    nlohmann::ordered_json j;
    j["config"] = detail::config_json(r.config);
    nlohmann::ordered_json lanes = nlohmann::ordered_json::array();
    for (const LaneReport& lane : r.lanes) lanes.push_back(detail::lane_json(lane));
    j["lanes"] = lanes;
    nlohmann::ordered_json t;
    t["read_s"] = r.read_seconds;
    t["solve_s"] = r.solve_seconds;
    t["total_s"] = r.total_seconds;
    j["wall_time"] = t;
    return j;
}

inline void write_report(const RunReport& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write report: " + path);
    out << to_json(r).dump(2) << "\n";
    if (!out) throw IoError("failed while writing report: " + path);
}

/// History CSV: one row per outer iteration, -1 sentinels preserved.
inline void write_history_csv(std::span<const double> err_hist,
                              std::span<const int> num_ay_hist, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write csv: " + path);
    out << "iter,err,num_ay\n";
    for (std::size_t i = 0; i < err_hist.size(); ++i) {
        const int ay = i < num_ay_hist.size() ? num_ay_hist[i] : 0;
        out << (i + 1) << "," << detail::fmt17(err_hist[i]) << "," << ay << "\n";
    }
    if (!out) throw IoError("failed while writing csv: " + path);
}

/// Aligned residual histories of the three compared algorithms.
inline void write_compare_csv(std::span<const double> feast_hist,
                              std::span<const double> feast2_hist,
                              std::span<const double> f2p_hist, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write csv: " + path);
    out << "iter,err_feast,err_feast2,err_f2p\n";
    const std::size_t rows =
        std::max({feast_hist.size(), feast2_hist.size(), f2p_hist.size()});
    auto cell = [](std::span<const double> h, std::size_t i) {
        return i < h.size() ? detail::fmt17(h[i]) : std::string();
    };
    for (std::size_t i = 0; i < rows; ++i)
        out << (i + 1) << "," << cell(feast_hist, i) << "," << cell(feast2_hist, i) << ","
            << cell(f2p_hist, i) << "\n";
    if (!out) throw IoError("failed while writing csv: " + path);
}

inline void write_filter_scan_csv(std::span<const double> lambdas,
                                  std::span<const double> response,
                                  const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write csv: " + path);
    out << "lambda,h\n";
    for (std::size_t i = 0; i < lambdas.size(); ++i)
        out << detail::fmt17(lambdas[i]) << "," << detail::fmt17(response[i]) << "\n";
    if (!out) throw IoError("failed while writing csv: " + path);
}

/// Reference spectra: one eigenvalue per line, sorted decreasing.
inline void write_spectrum_csv(std::span<const double> values, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write spectrum: " + path);
    for (double v : values) out << detail::fmt17(v) << "\n";
    if (!out) throw IoError("failed while writing spectrum: " + path);
}

inline std::vector<double> read_spectrum_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open reference spectrum: " + path);
    std::vector<double> values;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = detail::trim(line);
        if (line.empty() || line[0] == '#') continue;
        try {
            values.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw ParseError("reference spectrum: bad value '" + line + "'", lineno);
        }
    }
    return values;
}

}  // namespace f2p
