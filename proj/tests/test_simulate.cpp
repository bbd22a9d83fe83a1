#include "driftcal/simulate.hpp"

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "driftcal/errors.hpp"
#include "test_util.hpp"

using namespace driftcal;

namespace {

ScenarioSpec tiny_fleet(double noise = 0.0) {
    ScenarioSpec scn;
    scn.horizon_hours = 100.0;
    scn.seed = 7;
    SensorSpec s;
    s.name = "s1";
    s.beta0 = Trajectory::constant(10.0);
    s.beta1 = Trajectory::constant(5.0);
    s.noise_sd_mv = noise;
    scn.sensors = {s};
    return scn;
}

}  // namespace

TEST_CASE("trajectory evaluation") {
    CHECK(Trajectory::constant(4.0).value(123.0) == 4.0);
    CHECK(Trajectory::linear(2.0, 0.5).value(10.0) == doctest::Approx(7.0));
    CHECK(Trajectory::exp_decay(5.0, 2.0, 200.0).value(200.0) ==
          doctest::Approx(2.0 + 3.0 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(Trajectory::sinusoid(3.0, 1.0, 40.0).value(10.0) ==
          doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("noise-free generation is exact") {
    const auto scn = tiny_fleet();
    const auto fleet = generate(scn);
    for (std::size_t i = 0; i < fleet.t_hours.size(); ++i) {
        const double expected = 10.0 + 5.0 * fleet.reference[i];
        CHECK(fleet.sensors[0][i].signal_mv == expected);
        CHECK(*fleet.sensors[0][i].reference == fleet.reference[i]);
    }
}

TEST_CASE("default grid has the documented sample count") {
    ScenarioSpec scn = default_scenario();
    const auto fleet = generate(scn);
    CHECK(fleet.t_hours.size() == 12181);  // 406 h at 2 minute spacing
    CHECK(fleet.sensors.size() == 4);
}

TEST_CASE("reference takes only the two plateau levels") {
    const auto fleet = generate(tiny_fleet());
    for (double y : fleet.reference) {
        CHECK((y == 100.0 || y == 0.0));
    }
    // Three hours high, two hours low.
    CHECK(fleet.reference[0] == 100.0);
    CHECK(fleet.reference[3 * 30] == 0.0);
    CHECK(fleet.reference[5 * 30] == 100.0);
}

TEST_CASE("generation is deterministic") {
    auto scn = tiny_fleet(2.0);
    const auto a = generate(scn);
    const auto b = generate(scn);
    for (std::size_t i = 0; i < a.sensors[0].size(); ++i) {
        CHECK(a.sensors[0][i].signal_mv == b.sensors[0][i].signal_mv);
    }
    scn.seed = 8;
    const auto c = generate(scn);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.sensors[0].size(); ++i) {
        if (a.sensors[0][i].signal_mv != c.sensors[0][i].signal_mv) any_diff = true;
    }
    CHECK(any_diff);
}

TEST_CASE("dropout windows invalidate records") {
    auto scn = tiny_fleet();
    scn.sensors[0].dropout_windows.push_back({10.0, 20.0});
    const auto fleet = generate(scn);
    for (const auto& r : fleet.sensors[0]) {
        CHECK(r.valid == !(r.t_hours >= 10.0 && r.t_hours <= 20.0));
    }
}

TEST_CASE("lagged reference stays within the plateau range") {
    auto scn = tiny_fleet();
    scn.cycle.lag_tau_hours = 0.2;
    const auto fleet = generate(scn);
    bool any_intermediate = false;
    for (double y : fleet.reference) {
        CHECK(y >= 0.0);
        CHECK(y <= 100.0);
        if (y > 1.0 && y < 99.0) any_intermediate = true;
    }
    CHECK(any_intermediate);
}

TEST_CASE("fixed-cadence calibrations snap to usable cycles") {
    const auto scn = tiny_fleet();
    const auto fleet = generate(scn);
    CycleSelection counts;
    int deferred = 0;
    const auto cals = schedule_calibrations(fleet.sensors[0], scn.cycle,
                                            scn.horizon_hours, 3.0, 20.0, counts,
                                            &deferred);
    CHECK(cals.size() == 5);
    CHECK(deferred == 0);
    for (const auto& c : cals) {
        CHECK(c.beta0 == doctest::Approx(10.0).epsilon(1e-9));
        CHECK(c.beta1 == doctest::Approx(5.0).epsilon(1e-9));
    }

    // An interval longer than the horizon yields exactly one calibration.
    const auto one = schedule_calibrations(fleet.sensors[0], scn.cycle,
                                           scn.horizon_hours, 3.0, 1000.0, counts);
    CHECK(one.size() == 1);
}

TEST_CASE("zero drift and zero noise makes every method exact") {
    auto scn = tiny_fleet();
    scn.horizon_hours = 200.0;
    SweepOptions opts;
    KernelSpec kernel;
    kernel.length_hours = 100.0;
    opts.kernels = {kernel};
    opts.intervals_hours = {50.0};
    opts.reps = 1;

    const auto result = run_correction_sweep(scn, opts);
    // The stepwise baseline is exact here, so relative MSE is degenerate and
    // cells are only emitted when the baseline MSE is positive.
    CHECK(result.cells.empty());

    // Direct check: offline GP correction on the noise-free fleet is exact.
    const auto fleet = generate(scn);
    CycleSelection counts;
    const auto cals = schedule_calibrations(fleet.sensors[0], scn.cycle,
                                            scn.horizon_hours, 10.0, 50.0, counts);
    const auto corrected = correct_offline(cals, kernel, fleet.sensors[0]);
    double worst = 0.0;
    for (std::size_t i = 0; i < corrected.size(); ++i) {
        worst = std::max(worst,
                         (corrected[i].y_hat - fleet.reference[i]) *
                             (corrected[i].y_hat - fleet.reference[i]));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("sweep tables are reproducible") {
    ScenarioSpec scn = default_scenario();
    scn.horizon_hours = 120.0;
    SweepOptions opts;
    KernelSpec kernel;
    kernel.length_hours = 200.0;
    opts.kernels = {kernel};
    opts.intervals_hours = {30.0};
    opts.reps = 1;

    const auto a = run_correction_sweep(scn, opts);
    const auto b = run_correction_sweep(scn, opts);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].mse == b.cells[i].mse);
        CHECK(a.cells[i].rel_mse == b.cells[i].rel_mse);
        CHECK(a.cells[i].method == b.cells[i].method);
    }
    CHECK(!a.summary.empty());
}

TEST_CASE("sweep rejects bad options") {
    const auto scn = tiny_fleet();
    SweepOptions opts;
    opts.intervals_hours = {};
    CHECK_THROWS_AS(run_correction_sweep(scn, opts), ValidationError);
    opts.intervals_hours = {50.0};
    opts.reps = 0;
    CHECK_THROWS_AS(run_correction_sweep(scn, opts), ValidationError);
    opts.reps = 1;
    opts.mode = CorrectionMode::kStepwise;
    CHECK_THROWS_AS(run_correction_sweep(scn, opts), ValidationError);
}

TEST_CASE("fixed schedule calibrates at the closed-form cadence") {
    // Dropout-free fleet: every nominal calibration lands on a usable cycle.
    ScenarioSpec scn = default_scenario();
    scn.horizon_hours = 200.0;
    for (auto& s : scn.sensors) s.dropout_windows.clear();
    ScheduleSimOptions opts;
    opts.schedule.alpha = 0.0;
    opts.schedule.initial_interval_hours = 40.0;
    opts.schedule.max_interval_hours = 100.0;
    opts.kernel.length_hours = 200.0;

    const auto run = run_one_schedule(scn, opts, 0);
    for (std::size_t s = 0; s < scn.sensors.size(); ++s) {
        const double first = draw_first_calibration_time(scn.seed, s, 40.0, 0);
        const int expected =
            static_cast<int>(std::floor((scn.horizon_hours - first) / 40.0)) + 1;
        CHECK(run.sensors[s].calibrations == expected);
    }
}

TEST_CASE("schedule trace preserves the fleet budget at every step") {
    ScenarioSpec scn = default_scenario();
    scn.horizon_hours = 150.0;
    ScheduleSimOptions opts;
    opts.schedule.alpha = 0.2;
    opts.schedule.initial_interval_hours = 30.0;
    opts.schedule.max_interval_hours = 90.0;
    opts.kernel.length_hours = 200.0;

    const auto run = run_one_schedule(scn, opts, 1);
    const double target = double(scn.sensors.size()) / 30.0;
    for (const auto& row : run.trace) {
        CHECK(row.budget_frequency == doctest::Approx(target).epsilon(1e-9));
        CHECK(row.interval_hours <= 90.0 + 1e-9);
    }
}

TEST_CASE("schedule summary compares adaptive and fixed runs") {
    ScenarioSpec scn = default_scenario();
    scn.horizon_hours = 150.0;
    ScheduleSimOptions opts;
    opts.schedule.alpha = 0.1;
    opts.schedule.initial_interval_hours = 40.0;
    opts.schedule.max_interval_hours = 120.0;
    opts.kernel.length_hours = 200.0;
    opts.reps = 2;

    const auto summary = run_schedule_sim(scn, opts);
    CHECK(summary.adaptive_runs.size() == 2);
    CHECK(summary.fixed_runs.size() == 2);
    CHECK(summary.fleet_relative_mse > 0.0);
    CHECK(!summary.adaptive_runs[0].trace.empty());
    CHECK(summary.adaptive_runs[1].trace.empty());  // only the first rep keeps it
    for (std::size_t s = 0; s < scn.sensors.size(); ++s) {
        CHECK(summary.adaptive_mean[s].calibrations >= 1);
    }
}

TEST_CASE("scenario files parse and validate") {
    std::istringstream in(R"(# example fleet
horizon_hours = 100
sample_period_hours = 0.1
seed = 9
cycle_high_hours = 3
cycle_low_hours = 2

sensor alpha {
  beta0 = constant 10
  beta1 = expdecay 5 2 150
  noise_sd = 1.5
  dropout = 10:20, 30:40
}

sensor beta {
  beta0 = linear 8 0.01
  beta1 = sinusoid 4 0.1 100
}
)");
    const auto scn = parse_scenario(in);
    CHECK(scn.horizon_hours == 100.0);
    CHECK(scn.seed == 9);
    REQUIRE(scn.sensors.size() == 2);
    CHECK(scn.sensors[0].name == "alpha");
    CHECK(scn.sensors[0].beta1.value(0.0) == doctest::Approx(5.0));
    CHECK(scn.sensors[0].dropout_windows.size() == 2);
    CHECK(scn.sensors[1].beta0.value(100.0) == doctest::Approx(9.0));
}

TEST_CASE("scenario parse errors carry line numbers") {
    std::istringstream bad("horizon_hours = 100\nbogus_key = 3\n");
    CHECK_THROWS_WITH_AS(parse_scenario(bad), doctest::Contains("line 2"),
                         ParseError);

    std::istringstream bad_num("horizon_hours = ten\n");
    CHECK_THROWS_WITH_AS(parse_scenario(bad_num), doctest::Contains("line 1"),
                         ParseError);

    std::istringstream unclosed("sensor x {\nbeta0 = constant 1\n");
    CHECK_THROWS_AS(parse_scenario(unclosed), ParseError);
}

TEST_CASE("the shipped example scenario loads") {
    const auto path = std::string(DRIFTCAL_SOURCE_DIR) + "/scenarios/example_fleet.scn";
    const auto scn = load_scenario(path);
    CHECK(scn.horizon_hours == 406.0);
    CHECK(scn.seed == 42);
    REQUIRE(scn.sensors.size() == 4);
    CHECK(scn.sensors[0].name == "drifty");
    CHECK(scn.sensors[1].dropout_windows.size() == 1);
    validate(scn);
}

TEST_CASE("default scenario matches its description") {
    const auto scn = default_scenario();
    REQUIRE(scn.sensors.size() == 4);
    // One strongly decaying sensitivity.
    CHECK(scn.sensors[0].beta1.kind == Trajectory::Kind::kExpDecay);
    CHECK(scn.sensors[0].beta1.value(0.0) >
          2.0 * scn.sensors[0].beta1.value(scn.horizon_hours));
    // One clearly noisier sensor.
    CHECK(scn.sensors[1].noise_sd_mv >= 4.0 * scn.sensors[0].noise_sd_mv);
    validate(scn);
}
