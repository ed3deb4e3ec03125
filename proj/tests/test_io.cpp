#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "f2p/config.hpp"
#include "f2p/matrix_market.hpp"
#include "f2p/report.hpp"
#include "f2p/runner.hpp"

using f2p::RunConfig;
using f2p::RunReport;
using f2p::SparseSymMatrix;

namespace {

class TempDir : public ::testing::Test {
protected:
    std::string path(const std::string& name) {
        return testing::TempDir() + "f2p_io_" + name;
    }
    void write_file(const std::string& p, const std::string& content) {
        std::ofstream out(p);
        out << content;
    }
};

}  // namespace

TEST(MatrixMarket, ReadsLowerTriangleAndMirrors) {
    std::istringstream in(
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "% comment line\n"
        "3 3 3\n"
        "1 1 2.0\n"
        "2 1 1.0\n"
        "3 3 5.0\n");
    const SparseSymMatrix a = f2p::read_matrix_market(in);
    EXPECT_EQ(a.rows(), 3);
    EXPECT_EQ(a.nnz(), 4);  // (1,2) mirror of (2,1) included
    const std::vector<double> y = a.multiply(std::vector<double>{1.0, 1.0, 1.0});
    EXPECT_DOUBLE_EQ(y[0], 3.0);  // 2 + 1
    EXPECT_DOUBLE_EQ(y[1], 1.0);  // mirror entry
    EXPECT_DOUBLE_EQ(y[2], 5.0);
}

TEST(MatrixMarket, IntegerFieldWidensToReal) {
    std::istringstream in(
        "%%MatrixMarket matrix coordinate integer symmetric\n"
        "2 2 2\n"
        "1 1 4\n"
        "2 1 -1\n");
    const SparseSymMatrix a = f2p::read_matrix_market(in);
    const std::vector<double> y = a.multiply(std::vector<double>{1.0, 0.0});
    EXPECT_DOUBLE_EQ(y[0], 4.0);
    EXPECT_DOUBLE_EQ(y[1], -1.0);
}

TEST(MatrixMarket, RejectsUnsupportedHeaders) {
    auto expect_unsupported = [](const std::string& header) {
        std::istringstream in(header + "\n1 1 1\n1 1 1.0\n");
        EXPECT_THROW(f2p::read_matrix_market(in), f2p::UnsupportedFormat) << header;
    };
    expect_unsupported("%%MatrixMarket matrix coordinate complex symmetric");
    expect_unsupported("%%MatrixMarket matrix coordinate real general");
    expect_unsupported("%%MatrixMarket matrix coordinate real skew-symmetric");
    expect_unsupported("%%MatrixMarket matrix coordinate pattern symmetric");
    expect_unsupported("%%MatrixMarket matrix array real symmetric");
}

TEST(MatrixMarket, ParseErrorsCarryLineNumbers) {
    std::istringstream in(
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "2 2 2\n"
        "1 1 1.0\n"
        "2 oops 3.0\n");
    try {
        f2p::read_matrix_market(in);
        FAIL() << "expected ParseError";
    } catch (const f2p::ParseError& e) {
        EXPECT_EQ(e.line, 4);
    }
}

TEST(MatrixMarket, RejectsUpperTriangleEntries) {
    std::istringstream in(
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "2 2 1\n"
        "1 2 1.0\n");
    EXPECT_THROW(f2p::read_matrix_market(in), f2p::ParseError);
}

TEST(MatrixMarket, SumsDuplicateEntries) {
    std::istringstream in(
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "2 2 3\n"
        "1 1 1.0\n"
        "1 1 0.5\n"
        "2 2 1.0\n");
    const SparseSymMatrix a = f2p::read_matrix_market(in);
    EXPECT_EQ(a.nnz(), 2);
    EXPECT_DOUBLE_EQ(a.multiply(std::vector<double>{1.0, 0.0})[0], 1.5);
}

TEST_F(TempDir, ConfigFileRoundTrip) {
    const std::string p = path("cfg.txt");
    write_file(p,
               "# reproduction recipe\n"
               "matrix = diag:100\n"
               "algorithm = f2p\n"
               "a = 89.5\n"
               "b = 100.5\n"
               "radius = 10\n"
               "m = 20\n"
               "num_cmp = 10\n"
               "num_out = 5\n"
               "max_it = 8\n"
               "seed = 7\n");
    const RunConfig cfg = RunConfig::load(p);
    EXPECT_EQ(cfg.matrix, "diag:100");
    EXPECT_EQ(cfg.algorithm, "f2p");
    EXPECT_DOUBLE_EQ(cfg.a, 89.5);
    EXPECT_EQ(cfg.m, 20);
    EXPECT_EQ(cfg.num_out, 5);
    cfg.validate();
}

TEST_F(TempDir, ConfigRejectsUnknownKeysAndBadValues) {
    RunConfig cfg;
    EXPECT_THROW(cfg.set("no_such_key", "1"), f2p::ConfigError);
    EXPECT_THROW(cfg.set("m", "many"), f2p::ConfigError);
    EXPECT_THROW(cfg.set("a", "1.5x"), f2p::ConfigError);
    EXPECT_THROW(cfg.set("parallel_inner", "maybe"), f2p::ConfigError);
}

TEST(ConfigValidation, RejectsEveryInvariantViolation) {
    RunConfig base;
    base.matrix = "diag:10";
    base.algorithm = "f2p";
    base.a = 1.5;
    base.b = 3.5;
    base.m = 4;
    base.validate();

    RunConfig c = base;
    c.algorithm = "newton";
    EXPECT_THROW(c.validate(), f2p::ConfigError);
    c = base;
    c.b = c.a;
    EXPECT_THROW(c.validate(), f2p::ConfigError);
    c = base;
    c.m = 0;
    EXPECT_THROW(c.validate(), f2p::ConfigError);
    c = base;
    c.num_cmp = 3;
    c.num_out = 4;
    EXPECT_THROW(c.validate(), f2p::ConfigError);
    c = base;
    c.num_cmp = 5;  // > m
    EXPECT_THROW(c.validate(), f2p::ConfigError);
    c = base;
    c.max_it = 0;
    EXPECT_THROW(c.validate(), f2p::ConfigError);
    c = base;
    c.sub_max_it = 0;
    EXPECT_THROW(c.validate(), f2p::ConfigError);
    c = base;
    c.q = 65;
    EXPECT_THROW(c.validate(), f2p::ConfigError);
    c = base;
    c.radius = 0.5;  // < (b - a)/2
    EXPECT_THROW(c.validate(), f2p::ConfigError);
    c = base;
    c.matrix = "";
    EXPECT_THROW(c.validate(), f2p::ConfigError);
}

TEST(LoadMatrix, SyntheticSpecs) {
    EXPECT_EQ(f2p::load_matrix("diag:10").rows(), 10);
    EXPECT_EQ(f2p::load_matrix("diag:1:0.01:2").rows(), 101);
    EXPECT_EQ(f2p::load_matrix("lap1d:7").rows(), 7);
    EXPECT_EQ(f2p::load_matrix("lap1d:7").nnz(), 7 + 2 * 6);
    EXPECT_THROW(f2p::load_matrix("diag:abc"), f2p::ConfigError);
    EXPECT_THROW(f2p::load_matrix("lap1d:x"), f2p::ConfigError);
}

TEST_F(TempDir, RunF2pOnBundledDiag100) {
    RunConfig cfg;
    cfg.matrix = "diag:100";
    cfg.algorithm = "f2p";
    cfg.a = 89.5;
    cfg.b = 100.5;
    cfg.radius = 10.0;
    cfg.m = 12;
    cfg.num_cmp = 6;
    cfg.num_out = 5;
    cfg.max_it = 6;
    cfg.seed = 7;
    cfg.csv = path("hist.csv");
    const RunReport report = f2p::run(cfg);
    ASSERT_EQ(report.lanes.size(), 1u);
    EXPECT_EQ(report.lanes[0].metrics.eig_out, 5);
    EXPECT_LE(report.lanes[0].metrics.tau_r, 1e-8);
    EXPECT_EQ(static_cast<int>(report.lanes[0].err_hist.size()), 6);

    // CSV exists with the iter,err,num_ay triplet per iteration
    std::ifstream csv(cfg.csv);
    ASSERT_TRUE(csv.good());
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "iter,err,num_ay");
}

TEST_F(TempDir, EmptyResultRunStillReports) {
    RunConfig cfg;
    cfg.matrix = "diag:10";
    cfg.algorithm = "f2p";
    cfg.a = 20.0;
    cfg.b = 21.0;
    cfg.radius = 0.5;
    cfg.m = 4;
    cfg.num_cmp = 2;
    cfg.num_out = 2;
    cfg.max_it = 2;
    cfg.output = path("empty.json");
    const RunReport report = f2p::run(cfg);
    f2p::write_report(report, cfg.output);
    EXPECT_EQ(report.lanes[0].metrics.eig_out, 0);
    EXPECT_TRUE(report.lanes[0].eigenvalues.empty());

    std::ifstream in(cfg.output);
    nlohmann::json j = nlohmann::json::parse(in);
    EXPECT_EQ(j["lanes"][0]["metrics"]["eig_out"], 0);
    EXPECT_EQ(j["lanes"][0]["eigenvalues"].size(), 0u);
}

TEST_F(TempDir, ReportJsonRoundTripsAndKeepsSentinels) {
    RunReport r;
    r.config.matrix = "diag:4";
    r.config.algorithm = "f2p";
    f2p::LaneReport lane;
    lane.name = "f2p";
    lane.eigenvalues = {3.0, 2.0000000000000004};
    lane.residuals = {1e-12, 2e-11};
    lane.err_hist = {-1.0, 1e-9};
    lane.num_ay_hist = {0, 3};
    lane.metrics.tau_r = 1e-9;
    lane.metrics.eig_out = 2;
    r.lanes.push_back(lane);

    const std::string p = path("report.json");
    f2p::write_report(r, p);
    std::ifstream in(p);
    nlohmann::json j = nlohmann::json::parse(in);
    EXPECT_EQ(j["lanes"][0]["eigenvalues"][1].get<double>(), 2.0000000000000004);
    EXPECT_EQ(j["lanes"][0]["err_hist"][0].get<double>(), -1.0);
    EXPECT_EQ(j["lanes"][0]["metrics"]["eig_out"].get<int>(), 2);

    // CSV preserves the -1 sentinel verbatim
    const std::string csv_path = path("hist2.csv");
    f2p::write_history_csv(lane.err_hist, lane.num_ay_hist, csv_path);
    std::ifstream csv(csv_path);
    std::string header, row1;
    std::getline(csv, header);
    std::getline(csv, row1);
    EXPECT_EQ(row1, "1,-1,0");
}

TEST_F(TempDir, SpectrumCsvRoundTrip) {
    const std::string p = path("spec.csv");
    const std::vector<double> values{5.5, 3.25, 1.0000000000000002};
    f2p::write_spectrum_csv(values, p);
    const std::vector<double> back = f2p::read_spectrum_csv(p);
    ASSERT_EQ(back.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) EXPECT_EQ(back[i], values[i]);
}

TEST_F(TempDir, ReferenceSpectrumYieldsTauLambda) {
    const std::string ref = path("ref.csv");
    // dense oracle of diag:100 restricted to (89.5, 100.5)
    std::vector<double> values;
    for (int v = 100; v >= 90; --v) values.push_back(v);
    f2p::write_spectrum_csv(values, ref);

    RunConfig cfg;
    cfg.matrix = "diag:100";
    cfg.algorithm = "f2p";
    cfg.a = 89.5;
    cfg.b = 100.5;
    cfg.radius = 10.0;
    cfg.m = 12;
    cfg.num_cmp = 6;
    cfg.num_out = 5;
    cfg.max_it = 6;
    cfg.reference = ref;
    const RunReport report = f2p::run(cfg);
    ASSERT_TRUE(report.lanes[0].metrics.tau_lambda.has_value());
    EXPECT_LE(report.lanes[0].metrics.tau_lambda->value, 1e-10);
    EXPECT_FALSE(report.lanes[0].metrics.tau_lambda->absolute);
}

TEST(DenseSpectrum, OracleMatchesConstruction) {
    const std::vector<double> values = f2p::dense_spectrum(f2p::load_matrix("diag:20"));
    ASSERT_EQ(static_cast<int>(values.size()), 20);
    for (int i = 0; i < 20; ++i) EXPECT_NEAR(values[i], 20.0 - i, 1e-12);
}

TEST_F(TempDir, DeterminismAcrossRunsAndParallelism) {
    RunConfig cfg;
    cfg.matrix = "lap1d:60";
    cfg.algorithm = "f2p";
    cfg.a = 3.2;
    cfg.b = 3.9;
    cfg.radius = 0.7;
    cfg.m = 8;
    cfg.num_cmp = 4;
    cfg.num_out = 3;
    cfg.max_it = 4;
    cfg.seed = 99;
    const RunReport r1 = f2p::run(cfg);
    const RunReport r2 = f2p::run(cfg);
    cfg.parallel_inner = true;
    cfg.threads = 3;
    const RunReport r3 = f2p::run(cfg);

    ASSERT_EQ(r1.lanes[0].eigenvalues.size(), r2.lanes[0].eigenvalues.size());
    ASSERT_EQ(r1.lanes[0].eigenvalues.size(), r3.lanes[0].eigenvalues.size());
    for (std::size_t i = 0; i < r1.lanes[0].eigenvalues.size(); ++i) {
        EXPECT_EQ(r1.lanes[0].eigenvalues[i], r2.lanes[0].eigenvalues[i]);
        EXPECT_EQ(r1.lanes[0].eigenvalues[i], r3.lanes[0].eigenvalues[i]);
        EXPECT_EQ(r1.lanes[0].residuals[i], r3.lanes[0].residuals[i]);
    }
    ASSERT_EQ(r1.lanes[0].err_hist.size(), r3.lanes[0].err_hist.size());
    for (std::size_t i = 0; i < r1.lanes[0].err_hist.size(); ++i)
        EXPECT_EQ(r1.lanes[0].err_hist[i], r3.lanes[0].err_hist[i]);
}

TEST_F(TempDir, FilterScanRun) {
    RunConfig cfg;
    cfg.algorithm = "filter-scan";
    cfg.scan_center = 0.0;
    cfg.scan_radius = 1.0;
    cfg.scan_min = -5.0;
    cfg.scan_max = 5.0;
    cfg.scan_points = 201;
    cfg.csv = path("scan.csv");
    const RunReport report = f2p::run(cfg);
    const auto& grid = report.lanes[0].eigenvalues;
    const auto& h = report.lanes[0].residuals;
    ASSERT_EQ(grid.size(), 201u);
    EXPECT_NEAR(h[100], 1.0, 2e-3);              // h(0)
    EXPECT_LE(std::abs(h.front()), 0.05);        // h(-5)
    EXPECT_LE(std::abs(h.back()), 0.05);         // h(+5)
    std::ifstream csv(cfg.csv);
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "lambda,h");
}

TEST_F(TempDir, CompareRunsThreeLanesFromOneSeed) {
    RunConfig cfg;
    cfg.matrix = "diag:12";
    cfg.algorithm = "compare";
    cfg.a = 7.5;
    cfg.b = 11.5;
    cfg.radius = 2.5;
    cfg.m = 6;
    cfg.num_cmp = 3;
    cfg.num_out = 3;
    cfg.max_it = 3;
    cfg.sub_max_it = 1;
    cfg.seed = 42;
    cfg.csv = path("cmp.csv");
    const RunReport report = f2p::run(cfg);
    ASSERT_EQ(report.lanes.size(), 3u);
    EXPECT_EQ(report.lanes[0].name, "feast");
    EXPECT_EQ(report.lanes[1].name, "feast2");
    EXPECT_EQ(report.lanes[2].name, "f2p");
    // with sub_max_it = 1, feast2 and f2p walk identical trajectories
    ASSERT_EQ(report.lanes[1].err_hist.size(), report.lanes[2].err_hist.size());

    std::ifstream csv(cfg.csv);
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "iter,err_feast,err_feast2,err_f2p");
    int rows = 0;
    std::string row;
    while (std::getline(csv, row)) ++rows;
    EXPECT_EQ(rows, 3);
}
