#ifndef DRIFTCAL_SCENARIO_HPP
#define DRIFTCAL_SCENARIO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace driftcal {

/// Time course of one response coefficient.
struct Trajectory {
    enum class Kind { kConstant, kLinear, kExpDecay, kSinusoid };

    Kind kind = Kind::kConstant;
    double v0 = 0.0;  // constant value / start value / mean level
    double a = 0.0;   // slope per hour / asymptote / amplitude
    double b = 0.0;   // time constant (hours) / period (hours)

    double value(double t_hours) const;

    static Trajectory constant(double v);
    static Trajectory linear(double v0, double slope_per_hour);
    static Trajectory exp_decay(double v0, double v_inf, double tau_hours);
    static Trajectory sinusoid(double level, double amplitude, double period_hours);
};

struct SensorSpec {
    std::string name;
    Trajectory beta0 = Trajectory::constant(10.0);
    Trajectory beta1 = Trajectory::constant(5.0);
    double noise_sd_mv = 0.0;
    std::vector<std::pair<double, double>> dropout_windows;
};

/// Alternating saturation / anoxic ground truth.
struct CycleSpec {
    double high_hours = 3.0;
    double low_hours = 2.0;
    double high_level = 100.0;  // %O2
    double low_level = 0.0;
    /// First-order lag applied to the square wave; 0 keeps ideal edges.
    double lag_tau_hours = 0.0;

    double period() const { return high_hours + low_hours; }
};

struct ScenarioSpec {
    double horizon_hours = 406.0;
    double sample_period_hours = 1.0 / 30.0;  // two minutes
    CycleSpec cycle;
    std::vector<SensorSpec> sensors;
    std::uint64_t seed = 0;
};

void validate(const ScenarioSpec& scenario);

/// The stock four-sensor fleet: one strongly decaying-sensitivity sensor,
/// one noisy sensor with a dropout window, two near-stable sensors.
ScenarioSpec default_scenario();

/// Parse the key/value scenario format with nested `sensor <name> { ... }`
/// blocks. Throws ParseError with a line number on malformed input.
ScenarioSpec parse_scenario(std::istream& in);
ScenarioSpec load_scenario(const std::string& path);

}  // namespace driftcal

#endif  // DRIFTCAL_SCENARIO_HPP
