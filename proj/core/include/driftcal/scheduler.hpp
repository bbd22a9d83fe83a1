#ifndef DRIFTCAL_SCHEDULER_HPP
#define DRIFTCAL_SCHEDULER_HPP

#include <optional>
#include <span>
#include <vector>

#include "driftcal/drift.hpp"

namespace driftcal {

struct ScheduleConfig {
    double alpha = 0.1;                   // learning rate in [0, 1]
    double initial_interval_hours = 50.0; // defines the fleet budget
    double max_interval_hours = 100.0;    // per-sensor ceiling
    double update_period_hours = 1.0;
};

void validate(const ScheduleConfig& cfg);

struct SensorSchedule {
    double interval_hours = 0.0;
    std::optional<double> last_calibration_time;
    int calibration_count = 0;
    double first_calibration_time = 0.0;  // assigned at initialization
};

struct ScheduleState {
    std::vector<SensorSchedule> sensors;
};

/// All sensors start at the initial interval with zero calibrations.
ScheduleState init_schedule(const ScheduleConfig& cfg,
                            std::span<const double> first_calibration_times);

/// Quadratic mean of coefficient relative errors, damped by the squared
/// calibration count. Ratios are capped at 1e3 so a vanishing coefficient
/// cannot dominate the fleet allocation.
double uncertainty_from_ratios(std::span<const double> ratios, int calibration_count);

/// Evaluate the relative-error ratios of the coefficient posteriors at time
/// t and reduce them with uncertainty_from_ratios.
double sensor_uncertainty(std::span<const CoefficientModel> models,
                          int calibration_count, double t);

/// One fleet-wide interval update: normalize uncertainties, allocate the
/// disposable frequency proportionally, and blend with the previous
/// frequency through an exponentially weighted moving average.
///
/// Sensors that have never been calibrated get bootstrap priority: their
/// uncertainty is replaced by ten times the largest uncertainty among
/// calibrated sensors. If no sensor has been calibrated yet, intervals are
/// left untouched.
void update_intervals(ScheduleState& state, std::span<const double> uncertainties,
                      const ScheduleConfig& cfg);

/// Strictly-greater elapsed-time trigger; uncalibrated sensors become due at
/// their assigned first-calibration time.
bool is_calibration_due(const SensorSchedule& sensor, double t);

}  // namespace driftcal

#endif  // DRIFTCAL_SCHEDULER_HPP
