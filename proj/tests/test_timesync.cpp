#include "driftcal/timesync.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "doctest.h"
#include "driftcal/calibration.hpp"
#include "driftcal/errors.hpp"
#include "test_util.hpp"

using namespace driftcal;

namespace {

double wave(double t) {
    // Smooth-ish cyclical signal with a 5 hour period.
    return 50.0 + 50.0 * std::sin(2.0 * std::numbers::pi * t / 5.0) +
           10.0 * std::sin(2.0 * std::numbers::pi * t / 1.7);
}

/// Sensor on its own clock plus a reference whose clock is offset so that
/// adding `offset_s` to reference timestamps aligns the two.
std::pair<Series, Series> shifted_pair(double offset_s, double hours = 30.0) {
    Series sensor;
    for (double t = 0.0; t <= hours; t += 1.0 / 30.0) {
        sensor.t_hours.push_back(t);
        sensor.values.push_back(wave(t));
    }
    Series reference;
    for (double t = -0.5; t <= hours + 0.5; t += 1.0 / 30.0) {
        reference.t_hours.push_back(t - offset_s / 3600.0);
        reference.values.push_back(wave(t));
    }
    return {sensor, reference};
}

}  // namespace

TEST_CASE("estimate recovers injected offsets within one grid step") {
    for (double true_offset : {-150.0, -30.0, 0.0, 30.0, 150.0}) {
        const auto [sensor, reference] = shifted_pair(true_offset);
        const auto estimates = estimate_offsets(sensor, reference);
        REQUIRE(!estimates.empty());
        for (const auto& e : estimates) {
            CHECK(std::abs(e.offset_seconds - true_offset) <= 2.0);
            CHECK(e.correlation > 0.99);
        }
    }
}

TEST_CASE("offset estimation is shift equivariant") {
    const auto [sensor, base_ref] = shifted_pair(20.0);
    const auto base = estimate_offsets(sensor, base_ref);

    const double delta = 30.0;
    Series moved = base_ref;
    for (auto& t : moved.t_hours) t -= delta / 3600.0;
    const auto shifted = estimate_offsets(sensor, moved);

    REQUIRE(!base.empty());
    REQUIRE(shifted.size() == base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(std::abs(shifted[i].offset_seconds - (base[i].offset_seconds + delta)) <=
              2.0);
    }
}

TEST_CASE("affine rescaling of either signal changes nothing") {
    const auto [sensor, reference] = shifted_pair(42.0);
    const auto base = estimate_offsets(sensor, reference);

    Series scaled_sensor = sensor;
    for (auto& v : scaled_sensor.values) v = 3.5 * v - 120.0;
    Series scaled_ref = reference;
    for (auto& v : scaled_ref.values) v = 0.01 * v + 7.0;
    const auto scaled = estimate_offsets(scaled_sensor, scaled_ref);

    REQUIRE(scaled.size() == base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(scaled[i].offset_seconds == base[i].offset_seconds);
    }
}

TEST_CASE("constant windows are skipped") {
    Series sensor;
    Series reference;
    for (double t = 0.0; t <= 12.0; t += 1.0 / 30.0) {
        sensor.t_hours.push_back(t);
        sensor.values.push_back(1.0);  // flat everywhere
        reference.t_hours.push_back(t);
        reference.values.push_back(wave(t));
    }
    CHECK(estimate_offsets(sensor, reference).empty());
}

TEST_CASE("offset model recovers planted two-segment coefficients") {
    std::vector<OffsetEstimate> estimates;
    for (double t = 5.0; t <= 400.0; t += 5.0) {
        OffsetEstimate e;
        e.window_center_hours = t;
        e.offset_seconds = t <= 100.0 ? 0.129 * t + 24.5 : 0.129 * t - 123.9;
        e.correlation = 1.0;
        estimates.push_back(e);
    }
    const std::vector<double> breakpoints{100.0};
    const auto model = fit_offset_model(estimates, breakpoints);
    REQUIRE(model.segments.size() == 2);
    CHECK(model.segments[0].slope_s_per_hour == doctest::Approx(0.129).epsilon(1e-9));
    CHECK(model.segments[0].intercept_s == doctest::Approx(24.5).epsilon(1e-9));
    CHECK(model.segments[1].slope_s_per_hour == doctest::Approx(0.129).epsilon(1e-9));
    CHECK(model.segments[1].intercept_s == doctest::Approx(-123.9).epsilon(1e-9));
}

TEST_CASE("constant estimates give zero slope") {
    std::vector<OffsetEstimate> estimates;
    for (double t = 0.0; t <= 50.0; t += 5.0) {
        estimates.push_back({t, 17.0, 1.0});
    }
    const auto model = fit_offset_model(estimates, {});
    REQUIRE(model.segments.size() == 1);
    CHECK(model.segments[0].slope_s_per_hour == doctest::Approx(0.0));
    CHECK(model.segments[0].intercept_s == doctest::Approx(17.0));
}

TEST_CASE("a segment with too few estimates is an error") {
    std::vector<OffsetEstimate> estimates{{10.0, 1.0, 1.0}, {20.0, 2.0, 1.0}};
    const std::vector<double> breakpoints{100.0};  // second segment empty
    CHECK_THROWS_WITH_AS(fit_offset_model(estimates, breakpoints),
                         doctest::Contains("segment 1"), ValidationError);
}

TEST_CASE("segmented fit agrees with the calibration OLS") {
    auto g = dctest::rng(81);
    std::vector<OffsetEstimate> estimates;
    std::vector<CalibrationSample> as_samples;
    for (double t = 2.5; t <= 60.0; t += 5.0) {
        const double offset = 0.2 * t - 5.0 + dctest::gauss(g);
        estimates.push_back({t, offset, 1.0});
        as_samples.push_back({t, offset});
    }
    const auto model = fit_offset_model(estimates, {});
    const auto ols = fit_affine(as_samples, 0.0);
    CHECK(model.segments[0].slope_s_per_hour ==
          doctest::Approx(ols.beta1).epsilon(1e-9));
    CHECK(model.segments[0].intercept_s == doctest::Approx(ols.beta0).epsilon(1e-9));
}

TEST_CASE("apply_offset shifts timestamps only") {
    Series s;
    for (double t = 0.0; t <= 10.0; t += 0.5) {
        s.t_hours.push_back(t);
        s.values.push_back(wave(t));
    }

    OffsetModel zero;
    zero.segments.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    const auto same = apply_offset(s, zero);
    CHECK(same.t_hours == s.t_hours);
    CHECK(same.values == s.values);

    OffsetModel hour;
    hour.segments.push_back({std::numeric_limits<double>::infinity(), 0.0, 3600.0});
    const auto moved = apply_offset(s, hour);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(moved.t_hours[i] == doctest::Approx(s.t_hours[i] + 1.0).epsilon(1e-12));
    }

    OffsetModel minus;
    minus.segments.push_back({std::numeric_limits<double>::infinity(), 0.0, -3600.0});
    const auto back = apply_offset(moved, minus);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(back.t_hours[i] == doctest::Approx(s.t_hours[i]).epsilon(1e-12));
    }
}
