#include "driftcal/scheduler.hpp"

#include <algorithm>
#include <cmath>

#include "driftcal/errors.hpp"

namespace driftcal {

namespace {

constexpr double kRatioCap = 1e3;

}  // namespace

void validate(const ScheduleConfig& cfg) {
    if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) {
        throw ValidationError("schedule alpha must be in [0, 1]");
    }
    if (!(cfg.initial_interval_hours > 0.0)) {
        throw ValidationError("initial calibration interval must be positive");
    }
    if (!(cfg.max_interval_hours >= cfg.initial_interval_hours)) {
        throw ValidationError("max interval must be >= initial interval");
    }
    if (!(cfg.update_period_hours > 0.0)) {
        throw ValidationError("update period must be positive");
    }
}

ScheduleState init_schedule(const ScheduleConfig& cfg,
                            std::span<const double> first_calibration_times) {
    validate(cfg);
    if (first_calibration_times.empty()) {
        throw ValidationError("schedule needs at least one sensor");
    }
    ScheduleState state;
    state.sensors.reserve(first_calibration_times.size());
    for (double first : first_calibration_times) {
        SensorSchedule s;
        s.interval_hours = cfg.initial_interval_hours;
        s.first_calibration_time = first;
        state.sensors.push_back(s);
    }
    return state;
}

double uncertainty_from_ratios(std::span<const double> ratios, int calibration_count) {
    if (ratios.empty()) throw ValidationError("uncertainty needs at least one ratio");
    if (calibration_count < 1) {
        throw ValidationError("uncertainty is undefined before the first calibration");
    }
    double sum_sq = 0.0;
    for (double r : ratios) {
        const double capped = std::min(std::abs(r), kRatioCap);
        sum_sq += capped * capped;
    }
    const double c = static_cast<double>(calibration_count);
    return std::sqrt(sum_sq / double(ratios.size())) / (c * c);
}

double sensor_uncertainty(std::span<const CoefficientModel> models,
                          int calibration_count, double t) {
    if (models.empty()) throw ValidationError("sensor_uncertainty needs models");
    std::vector<double> ratios;
    ratios.reserve(models.size());
    for (const auto& m : models) {
        const GpPrediction p = predict_at(m.posterior, t);
        const double sd = std::sqrt(p.variance);
        if (sd == 0.0) {
            ratios.push_back(0.0);
        } else if (std::abs(p.mean) * kRatioCap <= sd) {
            ratios.push_back(kRatioCap);
        } else {
            ratios.push_back(sd / std::abs(p.mean));
        }
    }
    return uncertainty_from_ratios(ratios, calibration_count);
}

void update_intervals(ScheduleState& state, std::span<const double> uncertainties,
                      const ScheduleConfig& cfg) {
    validate(cfg);
    const std::size_t n = state.sensors.size();
    if (uncertainties.size() != n) {
        throw ValidationError("one uncertainty value per sensor required");
    }
    if (n == 0) return;

    // Bootstrap priority for never-calibrated sensors.
    std::vector<double> u(uncertainties.begin(), uncertainties.end());
    double max_calibrated = 0.0;
    bool any_calibrated = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (state.sensors[i].calibration_count >= 1) {
            any_calibrated = true;
            max_calibrated = std::max(max_calibrated, u[i]);
        }
    }
    if (!any_calibrated) return;  // everything stays at the initial interval
    for (std::size_t i = 0; i < n; ++i) {
        if (state.sensors[i].calibration_count < 1) {
            u[i] = 10.0 * max_calibrated;
        }
    }

    const double f_min = 1.0 / cfg.max_interval_hours;
    const double f_available =
        double(n) * (1.0 / cfg.initial_interval_hours - f_min);

    double u_total = 0.0;
    for (double v : u) u_total += v;

    for (std::size_t i = 0; i < n; ++i) {
        const double f_old = 1.0 / state.sensors[i].interval_hours;
        const double u_norm = u_total > 0.0 ? u[i] / u_total : 1.0 / double(n);
        const double f_inst = f_min + f_available * u_norm;
        const double f_new = cfg.alpha * f_inst + (1.0 - cfg.alpha) * f_old;
        state.sensors[i].interval_hours = 1.0 / f_new;
    }
}

bool is_calibration_due(const SensorSchedule& sensor, double t) {
    if (!sensor.last_calibration_time.has_value()) {
        return t >= sensor.first_calibration_time;
    }
    return (t - *sensor.last_calibration_time) > sensor.interval_hours;
}

}  // namespace driftcal
