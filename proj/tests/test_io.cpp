#include "driftcal/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "doctest.h"
#include "driftcal/csv.hpp"
#include "driftcal/errors.hpp"
#include "test_util.hpp"

using namespace driftcal;

namespace {

struct TempDir {
    std::filesystem::path path;

    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("driftcal_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }

    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("doubles round-trip through the formatter") {
    auto g = dctest::rng(91);
    for (int i = 0; i < 1000; ++i) {
        const double v = std::ldexp(dctest::uniform(g, -1.0, 1.0),
                                    int(dctest::uniform(g, -40, 40)));
        CHECK(csv::parse_double(csv::format_double(v)) == v);
    }
    CHECK(csv::format_double(0.5) == "0.5");
    CHECK_THROWS_AS(csv::parse_double("12,5"), ParseError);
    CHECK_THROWS_AS(csv::parse_double("abc"), ParseError);
}

TEST_CASE("calibration CSV round-trips losslessly") {
    TempDir dir;
    auto g = dctest::rng(92);
    std::vector<Calibration> cals;
    for (int i = 0; i < 20; ++i) {
        Calibration c;
        c.t_hours = dctest::uniform(g, 0.0, 400.0);
        c.beta0 = dctest::gauss(g) * 10.0;
        c.beta1 = dctest::gauss(g) * 2.0;
        c.se0 = std::abs(dctest::gauss(g));
        c.se1 = std::abs(dctest::gauss(g));
        c.n_samples = 3 + i % 9;
        cals.push_back(c);
    }
    const auto path = dir.file("cals.csv");
    write_calibrations_csv(path, cals);
    const auto back = read_calibrations_csv(path);
    REQUIRE(back.size() == cals.size());
    for (std::size_t i = 0; i < cals.size(); ++i) {
        CHECK(back[i].t_hours == cals[i].t_hours);
        CHECK(back[i].beta0 == cals[i].beta0);
        CHECK(back[i].beta1 == cals[i].beta1);
        CHECK(back[i].se0 == cals[i].se0);
        CHECK(back[i].se1 == cals[i].se1);
        CHECK(back[i].n_samples == cals[i].n_samples);
    }
}

TEST_CASE("records and corrections round-trip") {
    TempDir dir;
    std::vector<SensorRecord> records(3);
    records[0] = {0.0, 12.5, std::nullopt, true};
    records[1] = {0.5, -3.25, std::nullopt, false};
    records[2] = {1.0, 510.0, std::nullopt, true};
    const auto rec_path = dir.file("records.csv");
    write_records_csv(rec_path, records);
    const auto rec_back = read_records_csv(rec_path);
    REQUIRE(rec_back.size() == 3);
    CHECK(rec_back[1].valid == false);
    CHECK(rec_back[2].signal_mv == 510.0);

    std::vector<CorrectionResult> results(2);
    results[0] = {0.0, 55.5, 1.25, CorrectionMode::kOffline, true};
    results[1] = {0.5, 0.0, 0.0, CorrectionMode::kOnline, false};
    const auto cor_path = dir.file("corrected.csv");
    write_corrections_csv(cor_path, results);
    const auto cor_back = read_corrections_csv(cor_path);
    REQUIRE(cor_back.size() == 2);
    CHECK(cor_back[0].y_hat == 55.5);
    CHECK(cor_back[0].mode == CorrectionMode::kOffline);
    CHECK(cor_back[1].mode == CorrectionMode::kOnline);
    CHECK_FALSE(cor_back[1].valid);
}

TEST_CASE("series reader picks the first value column") {
    TempDir dir;
    const auto path = dir.file("series.csv");
    {
        std::ofstream out(path);
        out << "t_hours,oxygen_pct\n0,100\n0.5,0\n";
    }
    const auto s = read_series_csv(path);
    REQUIRE(s.size() == 2);
    CHECK(s.values[0] == 100.0);

    const auto missing = dir.file("missing.csv");
    {
        std::ofstream out(missing);
        out << "t_hours\n0\n";
    }
    CHECK_THROWS_AS(read_series_csv(missing), ParseError);
}

TEST_CASE("csv reader validates structure") {
    TempDir dir;
    const auto path = dir.file("ragged.csv");
    {
        std::ofstream out(path);
        out << "a,b\n1,2\n3\n";
    }
    CHECK_THROWS_WITH_AS(csv::read_file(path), doctest::Contains(":3"), ParseError);
    CHECK_THROWS_AS(csv::read_file(dir.file("nope.csv")), ParseError);
}

TEST_CASE("band CSV has the documented columns") {
    TempDir dir;
    GpTrainingSet train{{0.0, 100.0}, {10.0, 12.0}, {0.04, 0.04}};
    KernelSpec kernel;
    kernel.length_hours = 100.0;
    const auto model = fit_gp(train, kernel);
    const std::vector<double> ts{0.0, 50.0, 100.0};
    const auto path = dir.file("band.csv");
    write_band_csv(path, model, ts);

    const auto table = csv::read_file(path);
    CHECK(table.header ==
          std::vector<std::string>{"t_hours", "mean", "lo95", "hi95"});
    REQUIRE(table.rows.size() == 3);
    for (const auto& row : table.rows) {
        const double lo = csv::parse_double(row[2]);
        const double mid = csv::parse_double(row[1]);
        const double hi = csv::parse_double(row[3]);
        CHECK(lo <= mid);
        CHECK(mid <= hi);
    }
}

TEST_CASE("sweep norm table pivots by sensor and method") {
    SweepResult result;
    result.summary.push_back({0, "stepwise", 10.0, 1.0, 4.0});
    result.summary.push_back({0, "matern-200", 10.0, 0.5, 2.0});
    result.summary.push_back({0, "stepwise", 20.0, 1.0, 5.0});
    result.summary.push_back({0, "matern-200", 20.0, 0.4, 2.0});

    TempDir dir;
    const auto path = dir.file("norm.csv");
    const std::vector<std::string> names{"sensor1"};
    write_sweep_norm_csv(path, result, names);
    const auto table = csv::read_file(path);
    REQUIRE(table.header.size() == 3);
    CHECK(table.header[0] == "interval_hours");
    CHECK(table.rows.size() == 2);
}
