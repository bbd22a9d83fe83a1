#ifndef DRIFTCAL_SIMULATE_HPP
#define DRIFTCAL_SIMULATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "driftcal/calibration.hpp"
#include "driftcal/drift.hpp"
#include "driftcal/metrics.hpp"
#include "driftcal/scenario.hpp"
#include "driftcal/scheduler.hpp"
#include "driftcal/types.hpp"

namespace driftcal {

struct GeneratedFleet {
    std::vector<double> t_hours;                     // shared sampling grid
    std::vector<double> reference;                   // ground truth %O2
    std::vector<std::vector<SensorRecord>> sensors;  // one record list per sensor
};

/// Synthesize the fleet: square-wave (optionally lagged) reference, per
/// sensor x(t) = beta0(t) + beta1(t) y(t) + noise from a counter-based
/// stream. Identical (scenario, seed) gives bitwise-identical output.
GeneratedFleet generate(const ScenarioSpec& scenario);

/// Ground-truth reference value at an arbitrary time.
double reference_value(const CycleSpec& cycle, double t_hours);

/// Fixed-cadence calibration times: first_time + k * interval, each snapped
/// to the nearest cycle with enough usable samples. Unplaceable calibrations
/// are counted in `deferred`.
std::vector<Calibration> schedule_calibrations(std::span<const SensorRecord> records,
                                               const CycleSpec& cycle,
                                               double horizon_hours,
                                               double first_time_hours,
                                               double interval_hours,
                                               const CycleSelection& selection,
                                               int* deferred = nullptr);

/// Draw the first calibration time uniformly from [0, min(50, interval)).
double draw_first_calibration_time(std::uint64_t seed, std::size_t sensor_index,
                                   double interval_hours, std::uint64_t counter);

struct SweepOptions {
    std::vector<KernelSpec> kernels;
    std::vector<double> intervals_hours;
    int reps = 50;
    CorrectionMode mode = CorrectionMode::kOffline;
    int low_count = 5;
    int high_count = 5;
    DriftOptions drift;
    int threads = 1;  // repetitions fan out; results merge in rep order
};

struct SweepCell {
    std::size_t sensor = 0;
    std::string method;
    double interval_hours = 0.0;
    int rep = 0;
    double mse = 0.0;
    double rel_mse = 0.0;  // vs. the stepwise baseline of the same cell
};

struct SweepSummaryRow {
    std::size_t sensor = 0;
    std::string method;
    double interval_hours = 0.0;
    double median_rel_mse = 0.0;
    double median_mse = 0.0;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    std::vector<SweepSummaryRow> summary;  // medians across reps
    int deferred_calibrations = 0;
};

/// Calibration-interval sweep over the fleet: fixed-cadence calibrations,
/// GP correction per kernel plus stepwise (and, offline, linear) baselines,
/// MSE against ground truth, medians across repetitions.
SweepResult run_correction_sweep(const ScenarioSpec& scenario,
                                 const SweepOptions& options);

struct ScheduleSimOptions {
    ScheduleConfig schedule;
    KernelSpec kernel;
    int reps = 1;
    int low_count = 5;
    int high_count = 5;
    DriftOptions drift;
    int keep_traces_for_reps = 1;  // traces of reps >= this are dropped
    int threads = 1;
};

struct ScheduleTraceRow {
    double t_hours = 0.0;
    std::size_t sensor = 0;
    double interval_hours = 0.0;
    double uncertainty = 0.0;
    bool calibrated = false;
    double budget_frequency = 0.0;  // sum over sensors of 1/interval at this step
};

struct ScheduleSensorOutcome {
    double rmse = 0.0;
    int calibrations = 0;
};

struct ScheduleRunResult {
    std::vector<ScheduleSensorOutcome> sensors;
    double fleet_mse = 0.0;
    std::vector<ScheduleTraceRow> trace;
};

struct ScheduleSimSummary {
    std::vector<ScheduleSensorOutcome> adaptive_mean;  // averaged over reps
    std::vector<ScheduleSensorOutcome> fixed_mean;
    double mean_fleet_mse_adaptive = 0.0;
    double mean_fleet_mse_fixed = 0.0;
    double fleet_relative_mse = 0.0;  // adaptive vs. fixed, mean of per-rep ratios
    std::vector<ScheduleRunResult> adaptive_runs;
    std::vector<ScheduleRunResult> fixed_runs;
};

/// Single event-loop pass at the configured update period: trigger
/// calibrations when due, retrain coefficient models, update intervals.
/// Correction is online (past calibrations only).
ScheduleRunResult run_one_schedule(const ScenarioSpec& scenario,
                                   const ScheduleSimOptions& options, int rep);

/// Adaptive run vs. the alpha = 0 fixed schedule on identical seeds.
ScheduleSimSummary run_schedule_sim(const ScenarioSpec& scenario,
                                    const ScheduleSimOptions& options);

/// Scenario seed mixed with the repetition index; keeps repetitions
/// independent while preserving determinism.
std::uint64_t rep_seed(std::uint64_t seed, int rep);

}  // namespace driftcal

#endif  // DRIFTCAL_SIMULATE_HPP
