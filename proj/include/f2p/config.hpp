#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "f2p/eigensolvers.hpp"
#include "f2p/errors.hpp"
#include "f2p/shifted.hpp"

namespace f2p {

/// One run's worth of knobs: matrix source, interval, algorithm selection,
/// filter and solver settings, and output paths. Loadable from a flat
/// key = value file; the CLI overlays flag values on top.
struct RunConfig {
    std::string matrix;     // Matrix Market path, or diag:n | diag:a:step:b | lap1d:n
    double a = 0.0;
    double b = 0.0;
    double radius = 0.0;    // two-circle radius; 0 -> (b - a)/2
    std::string algorithm;  // feast | feast2 | psi | f2p | sweep | compare | filter-scan
    int q = 8;
    int m = 0;
    int num_cmp = 0;        // 0 -> floor(m/2)
    int num_out = 0;        // 0 -> num_cmp
    int num_eigm = 5;
    double min_eig = -std::numeric_limits<double>::max();
    int max_it = 50;
    int sub_max_it = 100;
    double sub_tol = 0.1;
    double tol = 1e-10;     // stopping tolerance of feast/feast2/psi
    double inner_tol = 1e-10;
    int inner_max_iter = 0;  // 0 -> 5n
    std::uint64_t seed = 1;
    std::string output;     // JSON report path ("" -> stdout only)
    std::string csv;        // optional history/scan CSV path
    std::string reference;  // optional reference spectrum CSV (for tau_lambda)
    bool parallel_inner = false;
    int threads = 0;        // 0 -> F2P_NUM_THREADS env, then hardware

    // filter-scan grid; center/radius fall back to the (a, b) circle
    double scan_center = std::numeric_limits<double>::quiet_NaN();
    double scan_radius = 0.0;
    double scan_min = std::numeric_limits<double>::quiet_NaN();
    double scan_max = std::numeric_limits<double>::quiet_NaN();
    int scan_points = 201;

    void set(const std::string& key, const std::string& value);
    void validate() const;

    bool needs_interval() const {
        return algorithm == "feast" || algorithm == "feast2" || algorithm == "f2p" ||
               algorithm == "sweep" || algorithm == "compare";
    }
    bool needs_matrix() const { return algorithm != "filter-scan"; }

    int effective_num_cmp() const { return num_cmp > 0 ? num_cmp : m / 2; }
    int effective_num_out() const { return num_out > 0 ? num_out : effective_num_cmp(); }
    double effective_radius() const { return radius > 0.0 ? radius : 0.5 * (b - a); }

    F2PConfig f2p_config() const {
        F2PConfig c;
        c.m = m;
        c.num_cmp = effective_num_cmp();
        c.num_out = effective_num_out();
        c.num_eigm = num_eigm;
        c.min_eig = min_eig;
        c.max_it = max_it;
        c.sub_max_it = sub_max_it;
        c.sub_tol = sub_tol;
        c.seed = seed;
        return c;
    }

    SolverOptions solver_options() const {
        SolverOptions s;
        s.tol = inner_tol;
        s.max_iter = inner_max_iter;
        s.parallel = parallel_inner;
        s.threads = threads;
        return s;
    }

    static RunConfig load(const std::string& path);
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for '" + key + "': " + v);
    }
}

inline long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer value for '" + key + "': " + v);
    }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    throw ConfigError("config: bad boolean value for '" + key + "': " + v);
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

inline void RunConfig::set(const std::string& key, const std::string& value) {
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_int;
    if (key == "matrix") matrix = value;
    else if (key == "a") a = parse_double(key, value);
    else if (key == "b") b = parse_double(key, value);
    else if (key == "radius" || key == "r") radius = parse_double(key, value);
    else if (key == "algorithm") algorithm = value;
    else if (key == "q") q = static_cast<int>(parse_int(key, value));
    else if (key == "m") m = static_cast<int>(parse_int(key, value));
    else if (key == "num_cmp") num_cmp = static_cast<int>(parse_int(key, value));
    else if (key == "num_out") num_out = static_cast<int>(parse_int(key, value));
    else if (key == "num_eigm") num_eigm = static_cast<int>(parse_int(key, value));
    else if (key == "min_eig") min_eig = parse_double(key, value);
    else if (key == "max_it") max_it = static_cast<int>(parse_int(key, value));
    else if (key == "sub_max_it") sub_max_it = static_cast<int>(parse_int(key, value));
    else if (key == "sub_tol") sub_tol = parse_double(key, value);
    else if (key == "tol") tol = parse_double(key, value);
    else if (key == "inner_tol") inner_tol = parse_double(key, value);
    else if (key == "inner_max_iter") inner_max_iter = static_cast<int>(parse_int(key, value));
    else if (key == "seed") seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "output") output = value;
    else if (key == "csv") csv = value;
    else if (key == "reference") reference = value;
    else if (key == "parallel_inner") parallel_inner = parse_bool(key, value);
    else if (key == "threads") threads = static_cast<int>(parse_int(key, value));
    else if (key == "scan_center") scan_center = parse_double(key, value);
    else if (key == "scan_radius") scan_radius = parse_double(key, value);
    else if (key == "scan_min") scan_min = parse_double(key, value);
    else if (key == "scan_max") scan_max = parse_double(key, value);
    else if (key == "scan_points") scan_points = static_cast<int>(parse_int(key, value));
    else throw ConfigError("config: unknown key '" + key + "'");
}

inline RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    RunConfig cfg;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not key = value");
        cfg.set(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
    return cfg;
}

inline void RunConfig::validate() const {
    static const char* known[] = {"feast", "feast2", "psi",        "f2p",
                                  "sweep", "compare", "filter-scan"};
    bool ok = false;
    for (const char* k : known) ok = ok || (algorithm == k);
    if (!ok) throw ConfigError("config: unknown algorithm '" + algorithm + "'");

    if (q < 1 || q > 64) throw ConfigError("config: q must be in [1, 64]");
    if (!(inner_tol > 0.0)) throw ConfigError("config: inner_tol must be positive");

    if (algorithm == "filter-scan") {
        const bool has_circle = (scan_radius > 0.0 && !std::isnan(scan_center)) || a < b;
        if (!has_circle)
            throw ConfigError("config: filter-scan needs scan_center/scan_radius or a < b");
        if (scan_points < 2) throw ConfigError("config: scan_points must be >= 2");
        return;
    }
    if (needs_matrix() && matrix.empty()) throw ConfigError("config: matrix is required");
    if (algorithm == "psi") {
        if (m < 1) throw ConfigError("config: m must be >= 1");
        if (max_it < 1) throw ConfigError("config: max_it must be >= 1");
        return;
    }
    if (!(a < b)) throw ConfigError("config: need a < b");
    if (m < 1) throw ConfigError("config: m must be >= 1");
    if (algorithm != "feast" && effective_radius() < 0.5 * (b - a))
        throw ConfigError("config: radius must be >= (b - a)/2");
    f2p_config().validate();  // shared block/iteration invariants
    if (!(tol >= 0.0)) throw ConfigError("config: tol must be >= 0");
}

}  // namespace f2p
