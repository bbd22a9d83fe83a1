#include "driftcal/scheduler.hpp"

#include <cmath>
#include <numeric>

#include "doctest.h"
#include "driftcal/errors.hpp"
#include "test_util.hpp"

using namespace driftcal;

namespace {

ScheduleConfig config(double alpha, double init, double max) {
    ScheduleConfig cfg;
    cfg.alpha = alpha;
    cfg.initial_interval_hours = init;
    cfg.max_interval_hours = max;
    return cfg;
}

ScheduleState calibrated_state(const ScheduleConfig& cfg, std::size_t n) {
    std::vector<double> firsts(n, 0.0);
    auto state = init_schedule(cfg, firsts);
    for (auto& s : state.sensors) {
        s.calibration_count = 1;
        s.last_calibration_time = 0.0;
    }
    return state;
}

double budget(const ScheduleState& state) {
    double f = 0.0;
    for (const auto& s : state.sensors) f += 1.0 / s.interval_hours;
    return f;
}

}  // namespace

TEST_CASE("uncertainty spot values") {
    const std::vector<double> ratios{0.3, 0.4};
    CHECK(uncertainty_from_ratios(ratios, 1) ==
          doctest::Approx(std::sqrt(0.125)).epsilon(1e-12));
    CHECK(uncertainty_from_ratios(ratios, 2) ==
          doctest::Approx(std::sqrt(0.125) / 4.0).epsilon(1e-12));
    CHECK(uncertainty_from_ratios(std::vector<double>{0.0, 0.0}, 3) == 0.0);
    CHECK_THROWS_AS(uncertainty_from_ratios(ratios, 0), ValidationError);
    CHECK_THROWS_AS(uncertainty_from_ratios({}, 1), ValidationError);
}

TEST_CASE("uncertainty caps exploding ratios") {
    const std::vector<double> ratios{1e9};
    CHECK(uncertainty_from_ratios(ratios, 1) == doctest::Approx(1e3));
}

TEST_CASE("sensor uncertainty from models") {
    // Zero-SE calibrations leave only the noise-floor variance at the
    // calibration time, so the uncertainty is very near zero there and
    // grows with extrapolation distance.
    Calibration c;
    c.t_hours = 0.0;
    c.beta0 = 10.0;
    c.beta1 = 5.0;
    c.n_samples = 10;
    KernelSpec kernel;
    kernel.length_hours = 100.0;
    const auto models = train_models(std::vector<Calibration>{c}, kernel);
    const double near = sensor_uncertainty(models, 1, 0.0);
    CHECK(near < 1e-4);
    CHECK(sensor_uncertainty(models, 1, 1000.0) > near);
}

TEST_CASE("symmetric uncertainties keep symmetric intervals") {
    const auto cfg = config(1.0, 50.0, 100.0);
    auto state = calibrated_state(cfg, 2);
    update_intervals(state, std::vector<double>{0.7, 0.7}, cfg);
    CHECK(state.sensors[0].interval_hours == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(state.sensors[1].interval_hours == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("one-hot uncertainty pushes the certain sensor to the ceiling") {
    const auto cfg = config(1.0, 50.0, 100.0);
    auto state = calibrated_state(cfg, 2);
    update_intervals(state, std::vector<double>{1.0, 0.0}, cfg);
    CHECK(state.sensors[0].interval_hours ==
          doctest::Approx(100.0 / 3.0).epsilon(1e-12));
    CHECK(state.sensors[1].interval_hours == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("alpha zero freezes intervals") {
    const auto cfg = config(0.0, 50.0, 100.0);
    auto state = calibrated_state(cfg, 3);
    auto g = dctest::rng(61);
    for (int step = 0; step < 50; ++step) {
        std::vector<double> u{dctest::uniform(g, 0.0, 5.0),
                              dctest::uniform(g, 0.0, 5.0),
                              dctest::uniform(g, 0.0, 5.0)};
        update_intervals(state, u, cfg);
        for (const auto& s : state.sensors) {
            CHECK(s.interval_hours == 50.0);
        }
    }
}

TEST_CASE("alpha one tracks the instantaneous frequency exactly") {
    const auto cfg = config(1.0, 40.0, 120.0);
    auto state = calibrated_state(cfg, 3);
    const std::vector<double> u{2.0, 1.0, 1.0};
    update_intervals(state, u, cfg);
    const double f_min = 1.0 / 120.0;
    const double f_avail = 3.0 * (1.0 / 40.0 - f_min);
    CHECK(1.0 / state.sensors[0].interval_hours ==
          doctest::Approx(f_min + f_avail * 0.5).epsilon(1e-12));
}

TEST_CASE("budget conservation and interval ceiling over random updates") {
    auto g = dctest::rng(62);
    const auto cfg = config(0.35, 50.0, 100.0);
    auto state = calibrated_state(cfg, 5);
    const double target = 5.0 / 50.0;
    for (int step = 0; step < 1000; ++step) {
        std::vector<double> u(5);
        for (auto& v : u) v = dctest::uniform(g, 0.0, 3.0);
        update_intervals(state, u, cfg);
        CHECK(budget(state) == doctest::Approx(target).epsilon(1e-9));
        for (const auto& s : state.sensors) {
            CHECK(s.interval_hours <= cfg.max_interval_hours + 1e-9);
        }
    }
}

TEST_CASE("zero total uncertainty allocates uniformly") {
    const auto cfg = config(1.0, 50.0, 100.0);
    auto state = calibrated_state(cfg, 4);
    update_intervals(state, std::vector<double>{0.0, 0.0, 0.0, 0.0}, cfg);
    for (const auto& s : state.sensors) {
        CHECK(s.interval_hours == doctest::Approx(50.0).epsilon(1e-12));
    }
}

TEST_CASE("monotone allocation in one sensor's uncertainty") {
    const auto cfg = config(1.0, 50.0, 200.0);
    double prev_freq = 0.0;
    for (double u0 : {0.1, 0.5, 1.0, 2.0, 4.0}) {
        auto state = calibrated_state(cfg, 3);
        update_intervals(state, std::vector<double>{u0, 1.0, 1.0}, cfg);
        const double f0 = 1.0 / state.sensors[0].interval_hours;
        CHECK(f0 >= prev_freq);
        prev_freq = f0;
    }
}

TEST_CASE("permutation equivariance") {
    const auto cfg = config(0.4, 50.0, 150.0);
    auto a = calibrated_state(cfg, 3);
    auto b = calibrated_state(cfg, 3);
    update_intervals(a, std::vector<double>{0.5, 1.5, 2.5}, cfg);
    update_intervals(b, std::vector<double>{2.5, 0.5, 1.5}, cfg);
    CHECK(a.sensors[0].interval_hours == doctest::Approx(b.sensors[1].interval_hours));
    CHECK(a.sensors[1].interval_hours == doctest::Approx(b.sensors[2].interval_hours));
    CHECK(a.sensors[2].interval_hours == doctest::Approx(b.sensors[0].interval_hours));
}

TEST_CASE("never-calibrated sensors get bootstrap priority") {
    const auto cfg = config(1.0, 50.0, 100.0);
    auto state = calibrated_state(cfg, 3);
    state.sensors[2].calibration_count = 0;
    state.sensors[2].last_calibration_time.reset();
    update_intervals(state, std::vector<double>{1.0, 1.0, 0.0}, cfg);
    // The uncalibrated sensor was treated as u = 10 and gets the shortest interval.
    CHECK(state.sensors[2].interval_hours < state.sensors[0].interval_hours);
    CHECK(budget(state) == doctest::Approx(3.0 / 50.0).epsilon(1e-9));
}

TEST_CASE("a fully uncalibrated fleet keeps its initial intervals") {
    const auto cfg = config(1.0, 50.0, 100.0);
    auto state = init_schedule(cfg, std::vector<double>{5.0, 10.0});
    update_intervals(state, std::vector<double>{0.0, 0.0}, cfg);
    for (const auto& s : state.sensors) {
        CHECK(s.interval_hours == 50.0);
    }
}

TEST_CASE("calibration due uses a strict elapsed-time trigger") {
    SensorSchedule s;
    s.interval_hours = 50.0;
    s.last_calibration_time = 0.0;
    CHECK_FALSE(is_calibration_due(s, 50.0));
    CHECK(is_calibration_due(s, 50.001));

    SensorSchedule fresh;
    fresh.interval_hours = 50.0;
    fresh.first_calibration_time = 12.0;
    CHECK_FALSE(is_calibration_due(fresh, 11.0));
    CHECK(is_calibration_due(fresh, 12.0));
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(validate(config(-0.1, 50.0, 100.0)), ValidationError);
    CHECK_THROWS_AS(validate(config(0.5, 0.0, 100.0)), ValidationError);
    CHECK_THROWS_AS(validate(config(0.5, 50.0, 40.0)), ValidationError);
}
