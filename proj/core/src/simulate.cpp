#include "driftcal/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "driftcal/errors.hpp"
#include "driftcal/rng.hpp"
#include "parallel.hpp"

namespace driftcal {

namespace {

double median(std::vector<double> xs) {
    if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    if (n % 2 == 1) return xs[n / 2];
    return 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

bool in_any_window(const std::vector<std::pair<double, double>>& windows, double t) {
    for (const auto& [lo, hi] : windows) {
        if (t >= lo && t <= hi) return true;
    }
    return false;
}

/// Calibrate on the cycle nearest to the nominal time that has enough
/// usable samples at both plateaus.
std::optional<Calibration> try_calibration_near(std::span<const SensorRecord> records,
                                                const CycleSpec& cycle,
                                                double horizon_hours, double t_nominal,
                                                const CycleSelection& counts) {
    const double period = cycle.period();
    const long max_idx = static_cast<long>(std::floor(horizon_hours / period));
    const long base = static_cast<long>(std::floor(t_nominal / period));
    constexpr long kOffsets[] = {0, 1, -1, 2, -2, 3, -3};
    for (long off : kOffsets) {
        const long idx = base + off;
        if (idx < 0 || idx > max_idx) continue;
        CycleSelection sel = counts;
        sel.window_lo_hours = double(idx) * period;
        sel.window_hi_hours = std::min(double(idx) * period + period - 1e-9, horizon_hours);
        try {
            return make_calibration_from_cycle(records, sel);
        } catch (const CalibrationUnavailableError&) {
            continue;
        }
    }
    return std::nullopt;
}

struct ResidualPool {
    double sum_sq = 0.0;
    std::size_t count = 0;

    void add(std::span<const CorrectionResult> results, std::span<const double> truth,
             double min_t = -std::numeric_limits<double>::infinity()) {
        for (std::size_t i = 0; i < results.size(); ++i) {
            if (!results[i].valid || results[i].t_hours < min_t) continue;
            const double r = results[i].y_hat - truth[i];
            sum_sq += r * r;
            ++count;
        }
    }

    double mse() const {
        return count > 0 ? sum_sq / double(count)
                         : std::numeric_limits<double>::quiet_NaN();
    }
};

}  // namespace

std::uint64_t rep_seed(std::uint64_t seed, int rep) {
    return CounterRng::mix(seed + 0x9e3779b97f4a7c15ULL *
                                      (static_cast<std::uint64_t>(rep) + 1));
}

double reference_value(const CycleSpec& cycle, double t_hours) {
    const double phase = std::fmod(t_hours, cycle.period());
    return phase < cycle.high_hours ? cycle.high_level : cycle.low_level;
}

GeneratedFleet generate(const ScenarioSpec& scenario) {
    validate(scenario);

    GeneratedFleet fleet;
    const std::size_t count =
        static_cast<std::size_t>(
            std::floor(scenario.horizon_hours / scenario.sample_period_hours + 1e-9)) +
        1;
    fleet.t_hours.resize(count);
    fleet.reference.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        fleet.t_hours[i] = double(i) * scenario.sample_period_hours;
        fleet.reference[i] = reference_value(scenario.cycle, fleet.t_hours[i]);
    }
    if (scenario.cycle.lag_tau_hours > 0.0) {
        const double gain =
            1.0 - std::exp(-scenario.sample_period_hours / scenario.cycle.lag_tau_hours);
        for (std::size_t i = 1; i < count; ++i) {
            fleet.reference[i] =
                fleet.reference[i - 1] + gain * (fleet.reference[i] - fleet.reference[i - 1]);
        }
    }

    fleet.sensors.resize(scenario.sensors.size());
    for (std::size_t s = 0; s < scenario.sensors.size(); ++s) {
        const auto& spec = scenario.sensors[s];
        const CounterRng rng(scenario.seed, s, "signal_noise");
        auto& records = fleet.sensors[s];
        records.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double t = fleet.t_hours[i];
            const double y = fleet.reference[i];
            double x = spec.beta0.value(t) + spec.beta1.value(t) * y;
            if (spec.noise_sd_mv > 0.0) {
                x += spec.noise_sd_mv * rng.normal(i);
            }
            records[i].t_hours = t;
            records[i].signal_mv = x;
            records[i].reference = y;
            records[i].valid = !in_any_window(spec.dropout_windows, t);
        }
    }
    return fleet;
}

std::vector<Calibration> schedule_calibrations(std::span<const SensorRecord> records,
                                               const CycleSpec& cycle,
                                               double horizon_hours,
                                               double first_time_hours,
                                               double interval_hours,
                                               const CycleSelection& selection,
                                               int* deferred) {
    if (!(interval_hours > 0.0)) {
        throw ValidationError("calibration interval must be positive");
    }
    std::vector<Calibration> cals;
    for (double t = first_time_hours; t <= horizon_hours + 1e-9; t += interval_hours) {
        auto cal = try_calibration_near(records, cycle, horizon_hours, t, selection);
        if (cal.has_value()) {
            cals.push_back(*cal);
        } else if (deferred != nullptr) {
            ++(*deferred);
        }
    }
    return cals;
}

double draw_first_calibration_time(std::uint64_t seed, std::size_t sensor_index,
                                   double interval_hours, std::uint64_t counter) {
    const CounterRng rng(seed, sensor_index, "first_cal");
    return rng.uniform(counter) * std::min(50.0, interval_hours);
}

SweepResult run_correction_sweep(const ScenarioSpec& scenario,
                                 const SweepOptions& options) {
    validate(scenario);
    if (options.reps < 1) throw ValidationError("sweep needs reps >= 1");
    if (options.intervals_hours.empty()) {
        throw ValidationError("sweep needs at least one calibration interval");
    }
    for (const auto& k : options.kernels) validate(k);
    if (options.mode != CorrectionMode::kOffline &&
        options.mode != CorrectionMode::kOnline) {
        throw ValidationError("sweep mode must be offline or online");
    }

    CycleSelection counts;
    counts.low_count = options.low_count;
    counts.high_count = options.high_count;

    struct RepOutput {
        std::vector<SweepCell> cells;
        int deferred = 0;
    };
    std::vector<RepOutput> by_rep(static_cast<std::size_t>(options.reps));

    detail::parallel_index_for(options.reps, options.threads, [&](int rep) {
        RepOutput& out = by_rep[static_cast<std::size_t>(rep)];
        ScenarioSpec scn_rep = scenario;
        scn_rep.seed = rep_seed(scenario.seed, rep);
        const GeneratedFleet fleet = generate(scn_rep);

        for (std::size_t ii = 0; ii < options.intervals_hours.size(); ++ii) {
            const double interval = options.intervals_hours[ii];
            for (std::size_t s = 0; s < fleet.sensors.size(); ++s) {
                const auto& records = fleet.sensors[s];
                const double first = draw_first_calibration_time(
                    scenario.seed, s, interval,
                    (static_cast<std::uint64_t>(ii) << 32) |
                        static_cast<std::uint64_t>(rep));
                int deferred = 0;
                const auto cals = schedule_calibrations(records, scenario.cycle,
                                                        scenario.horizon_hours, first,
                                                        interval, counts, &deferred);
                out.deferred += deferred;
                if (cals.empty()) continue;

                // Online comparisons only count times every method can see.
                double min_t = -std::numeric_limits<double>::infinity();
                if (options.mode == CorrectionMode::kOnline) {
                    min_t = cals.front().t_hours;
                    for (const auto& c : cals) min_t = std::min(min_t, c.t_hours);
                }

                const auto cell_mse = [&](std::span<const CorrectionResult> res) {
                    ResidualPool pool;
                    pool.add(res, fleet.reference, min_t);
                    return pool.mse();
                };

                const double mse_stepwise =
                    cell_mse(baseline_stepwise(cals, records, options.drift));
                if (!(mse_stepwise > 0.0)) continue;  // degenerate noise-free cell

                const auto push = [&](const std::string& method, double mse_value) {
                    out.cells.push_back({s, method, interval, rep, mse_value,
                                         mse_value / mse_stepwise});
                };
                push("stepwise", mse_stepwise);
                if (options.mode == CorrectionMode::kOffline) {
                    push("linear", cell_mse(baseline_linear(cals, records, options.drift)));
                }
                for (const auto& kernel : options.kernels) {
                    const auto corrected =
                        options.mode == CorrectionMode::kOffline
                            ? correct_offline(cals, kernel, records, options.drift)
                            : correct_online(cals, kernel, records, options.drift);
                    push(kernel_label(kernel), cell_mse(corrected));
                }
            }
        }
    });

    SweepResult result;
    for (auto& rep_out : by_rep) {
        result.deferred_calibrations += rep_out.deferred;
        result.cells.insert(result.cells.end(), rep_out.cells.begin(),
                            rep_out.cells.end());
    }

    // Median across repetitions for every (sensor, method, interval).
    std::vector<std::string> methods;
    for (const auto& c : result.cells) {
        if (std::find(methods.begin(), methods.end(), c.method) == methods.end()) {
            methods.push_back(c.method);
        }
    }
    for (std::size_t s = 0; s < scenario.sensors.size(); ++s) {
        for (const double interval : options.intervals_hours) {
            for (const auto& method : methods) {
                std::vector<double> rel;
                std::vector<double> abs;
                for (const auto& c : result.cells) {
                    if (c.sensor == s && c.interval_hours == interval &&
                        c.method == method && std::isfinite(c.rel_mse)) {
                        rel.push_back(c.rel_mse);
                        abs.push_back(c.mse);
                    }
                }
                if (rel.empty()) continue;
                result.summary.push_back(
                    {s, method, interval, median(rel), median(abs)});
            }
        }
    }
    return result;
}

ScheduleRunResult run_one_schedule(const ScenarioSpec& scenario,
                                   const ScheduleSimOptions& options, int rep) {
    validate(scenario);
    validate(options.schedule);
    validate(options.kernel);

    ScenarioSpec scn_rep = scenario;
    scn_rep.seed = rep_seed(scenario.seed, rep);
    const GeneratedFleet fleet = generate(scn_rep);
    const std::size_t n = fleet.sensors.size();

    CycleSelection counts;
    counts.low_count = options.low_count;
    counts.high_count = options.high_count;

    std::vector<double> firsts(n);
    for (std::size_t s = 0; s < n; ++s) {
        firsts[s] = draw_first_calibration_time(
            scenario.seed, s, options.schedule.initial_interval_hours,
            static_cast<std::uint64_t>(rep));
    }
    ScheduleState state = init_schedule(options.schedule, firsts);

    std::vector<std::vector<Calibration>> cals(n);
    std::vector<std::vector<CoefficientModel>> models(n);

    ScheduleRunResult result;
    result.sensors.resize(n);

    for (double t = 0.0; t <= scenario.horizon_hours + 1e-9;
         t += options.schedule.update_period_hours) {
        std::vector<bool> calibrated(n, false);

        for (std::size_t s = 0; s < n; ++s) {
            int guard = 0;
            while (is_calibration_due(state.sensors[s], t) && guard++ < 64) {
                // Nominal due moment; the grid step merely detects it.
                const double due =
                    state.sensors[s].last_calibration_time.has_value()
                        ? *state.sensors[s].last_calibration_time +
                              state.sensors[s].interval_hours
                        : state.sensors[s].first_calibration_time;
                auto cal = try_calibration_near(fleet.sensors[s], scenario.cycle,
                                                scenario.horizon_hours, due, counts);
                double stamp = due;
                if (!cal.has_value() && t != due) {
                    // The due cycle is unusable (dropout); calibrate late.
                    cal = try_calibration_near(fleet.sensors[s], scenario.cycle,
                                               scenario.horizon_hours, t, counts);
                    stamp = t;
                }
                if (!cal.has_value()) break;  // retry at the next step
                state.sensors[s].last_calibration_time = stamp;
                state.sensors[s].calibration_count += 1;
                cals[s].push_back(*cal);
                models[s] = train_models(cals[s], options.kernel, options.drift);
                calibrated[s] = true;
            }
        }

        std::vector<double> u(n, 0.0);
        for (std::size_t s = 0; s < n; ++s) {
            if (state.sensors[s].calibration_count >= 1 && !models[s].empty()) {
                u[s] = sensor_uncertainty(models[s], state.sensors[s].calibration_count, t);
            }
        }
        update_intervals(state, u, options.schedule);

        double budget = 0.0;
        for (const auto& sensor : state.sensors) budget += 1.0 / sensor.interval_hours;
        for (std::size_t s = 0; s < n; ++s) {
            result.trace.push_back({t, s, state.sensors[s].interval_hours, u[s],
                                    static_cast<bool>(calibrated[s]), budget});
        }
    }

    ResidualPool fleet_pool;
    for (std::size_t s = 0; s < n; ++s) {
        result.sensors[s].calibrations = state.sensors[s].calibration_count;
        if (cals[s].empty()) {
            result.sensors[s].rmse = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        const auto corrected =
            correct_online(cals[s], options.kernel, fleet.sensors[s], options.drift);
        ResidualPool pool;
        pool.add(corrected, fleet.reference);
        result.sensors[s].rmse = std::sqrt(pool.mse());
        fleet_pool.sum_sq += pool.sum_sq;
        fleet_pool.count += pool.count;
    }
    result.fleet_mse = fleet_pool.mse();
    return result;
}

ScheduleSimSummary run_schedule_sim(const ScenarioSpec& scenario,
                                    const ScheduleSimOptions& options) {
    if (options.reps < 1) throw ValidationError("schedule sim needs reps >= 1");

    ScheduleSimSummary summary;
    const std::size_t n = scenario.sensors.size();
    summary.adaptive_mean.resize(n);
    summary.fixed_mean.resize(n);

    ScheduleSimOptions fixed_options = options;
    fixed_options.schedule.alpha = 0.0;

    summary.adaptive_runs.resize(static_cast<std::size_t>(options.reps));
    summary.fixed_runs.resize(static_cast<std::size_t>(options.reps));
    detail::parallel_index_for(options.reps, options.threads, [&](int rep) {
        ScheduleRunResult adaptive = run_one_schedule(scenario, options, rep);
        ScheduleRunResult fixed = run_one_schedule(scenario, fixed_options, rep);
        if (rep >= options.keep_traces_for_reps) {
            adaptive.trace.clear();
            fixed.trace.clear();
        }
        summary.adaptive_runs[static_cast<std::size_t>(rep)] = std::move(adaptive);
        summary.fixed_runs[static_cast<std::size_t>(rep)] = std::move(fixed);
    });

    double sum_adaptive = 0.0;
    double sum_fixed = 0.0;
    for (int rep = 0; rep < options.reps; ++rep) {
        const auto& adaptive = summary.adaptive_runs[static_cast<std::size_t>(rep)];
        const auto& fixed = summary.fixed_runs[static_cast<std::size_t>(rep)];
        sum_adaptive += adaptive.fleet_mse;
        sum_fixed += fixed.fleet_mse;
        for (std::size_t s = 0; s < n; ++s) {
            summary.adaptive_mean[s].rmse += adaptive.sensors[s].rmse;
            summary.adaptive_mean[s].calibrations += adaptive.sensors[s].calibrations;
            summary.fixed_mean[s].rmse += fixed.sensors[s].rmse;
            summary.fixed_mean[s].calibrations += fixed.sensors[s].calibrations;
        }
    }

    const double reps = double(options.reps);
    for (std::size_t s = 0; s < n; ++s) {
        summary.adaptive_mean[s].rmse /= reps;
        summary.fixed_mean[s].rmse /= reps;
        summary.adaptive_mean[s].calibrations = static_cast<int>(
            std::lround(double(summary.adaptive_mean[s].calibrations) / reps));
        summary.fixed_mean[s].calibrations = static_cast<int>(
            std::lround(double(summary.fixed_mean[s].calibrations) / reps));
    }
    summary.mean_fleet_mse_adaptive = sum_adaptive / reps;
    summary.mean_fleet_mse_fixed = sum_fixed / reps;
    summary.fleet_relative_mse =
        sum_fixed > 0.0 ? sum_adaptive / sum_fixed
                        : std::numeric_limits<double>::quiet_NaN();
    return summary;
}

}  // namespace driftcal
