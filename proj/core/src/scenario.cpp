#include "driftcal/scenario.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>

#include "driftcal/errors.hpp"

namespace driftcal {

double Trajectory::value(double t) const {
    switch (kind) {
        case Kind::kConstant: return v0;
        case Kind::kLinear: return v0 + a * t;
        case Kind::kExpDecay: return a + (v0 - a) * std::exp(-t / b);
        case Kind::kSinusoid:
            return v0 + a * std::sin(2.0 * std::numbers::pi * t / b);
    }
    return v0;
}

Trajectory Trajectory::constant(double v) { return {Kind::kConstant, v, 0.0, 0.0}; }

Trajectory Trajectory::linear(double v0, double slope) {
    return {Kind::kLinear, v0, slope, 0.0};
}

Trajectory Trajectory::exp_decay(double v0, double v_inf, double tau) {
    return {Kind::kExpDecay, v0, v_inf, tau};
}

Trajectory Trajectory::sinusoid(double level, double amplitude, double period) {
    return {Kind::kSinusoid, level, amplitude, period};
}

void validate(const ScenarioSpec& scenario) {
    if (!(scenario.horizon_hours > 0.0)) {
        throw ValidationError("scenario horizon must be positive");
    }
    if (!(scenario.sample_period_hours > 0.0)) {
        throw ValidationError("scenario sample period must be positive");
    }
    if (!(scenario.cycle.high_hours > 0.0) || !(scenario.cycle.low_hours > 0.0)) {
        throw ValidationError("cycle durations must be positive");
    }
    if (scenario.sensors.empty()) {
        throw ValidationError("scenario needs at least one sensor");
    }
    for (const auto& s : scenario.sensors) {
        if (s.noise_sd_mv < 0.0) {
            throw ValidationError("sensor " + s.name + ": noise_sd must be >= 0");
        }
        for (const Trajectory* traj : {&s.beta0, &s.beta1}) {
            if (traj->kind == Trajectory::Kind::kExpDecay && !(traj->b > 0.0)) {
                throw ValidationError("sensor " + s.name + ": expdecay tau must be > 0");
            }
            if (traj->kind == Trajectory::Kind::kSinusoid && !(traj->b > 0.0)) {
                throw ValidationError("sensor " + s.name + ": sinusoid period must be > 0");
            }
        }
        for (const auto& [lo, hi] : s.dropout_windows) {
            if (!(hi >= lo)) {
                throw ValidationError("sensor " + s.name + ": dropout window reversed");
            }
        }
    }
}

ScenarioSpec default_scenario() {
    ScenarioSpec scn;
    scn.seed = 42;

    SensorSpec drifting;
    drifting.name = "sensor1";
    drifting.beta0 = Trajectory::linear(12.0, 0.01);
    drifting.beta1 = Trajectory::exp_decay(5.0, 1.5, 150.0);
    drifting.noise_sd_mv = 1.0;

    SensorSpec noisy;
    noisy.name = "sensor2";
    noisy.beta0 = Trajectory::constant(25.0);
    noisy.beta1 = Trajectory::linear(4.5, -0.002);
    noisy.noise_sd_mv = 8.0;
    noisy.dropout_windows.push_back({150.0, 190.0});

    SensorSpec stable_a;
    stable_a.name = "sensor3";
    stable_a.beta0 = Trajectory::constant(8.0);
    stable_a.beta1 = Trajectory::constant(3.2);
    stable_a.noise_sd_mv = 0.8;

    SensorSpec stable_b;
    stable_b.name = "sensor4";
    stable_b.beta0 = Trajectory::constant(15.0);
    stable_b.beta1 = Trajectory::sinusoid(4.0, 0.05, 400.0);
    stable_b.noise_sd_mv = 1.0;

    scn.sensors = {drifting, noisy, stable_a, stable_b};
    return scn;
}

namespace {

[[noreturn]] void fail(int line, const std::string& message) {
    throw ParseError("scenario line " + std::to_string(line) + ": " + message);
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& token, int line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(token, &pos);
        if (pos != token.size()) fail(line, "trailing characters in number '" + token + "'");
        return v;
    } catch (const std::invalid_argument&) {
        fail(line, "expected a number, got '" + token + "'");
    } catch (const std::out_of_range&) {
        fail(line, "number out of range: '" + token + "'");
    }
}

Trajectory parse_trajectory(const std::string& text, int line) {
    std::istringstream in(text);
    std::string kind;
    in >> kind;
    std::vector<double> args;
    std::string tok;
    while (in >> tok) args.push_back(parse_number(tok, line));

    const auto need = [&](std::size_t n) {
        if (args.size() != n) {
            fail(line, "trajectory '" + kind + "' takes " + std::to_string(n) +
                           " numbers, got " + std::to_string(args.size()));
        }
    };
    if (kind == "constant") {
        need(1);
        return Trajectory::constant(args[0]);
    }
    if (kind == "linear") {
        need(2);
        return Trajectory::linear(args[0], args[1]);
    }
    if (kind == "expdecay") {
        need(3);
        return Trajectory::exp_decay(args[0], args[1], args[2]);
    }
    if (kind == "sinusoid") {
        need(3);
        return Trajectory::sinusoid(args[0], args[1], args[2]);
    }
    fail(line, "unknown trajectory kind '" + kind + "'");
}

std::vector<std::pair<double, double>> parse_windows(const std::string& text, int line) {
    std::vector<std::pair<double, double>> windows;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            fail(line, "window must be lo:hi, got '" + item + "'");
        }
        windows.emplace_back(parse_number(item.substr(0, colon), line),
                             parse_number(item.substr(colon + 1), line));
    }
    return windows;
}

}  // namespace

ScenarioSpec parse_scenario(std::istream& in) {
    ScenarioSpec scn;
    scn.sensors.clear();

    SensorSpec* current = nullptr;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line == "}") {
            if (current == nullptr) fail(line_no, "unmatched '}'");
            current = nullptr;
            continue;
        }
        if (line.rfind("sensor", 0) == 0 && line.back() == '{') {
            if (current != nullptr) fail(line_no, "nested sensor block");
            std::string name = trim(line.substr(6, line.size() - 7));
            if (name.empty()) name = "sensor" + std::to_string(scn.sensors.size() + 1);
            scn.sensors.emplace_back();
            scn.sensors.back().name = name;
            current = &scn.sensors.back();
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) fail(line_no, "empty key or value");

        if (current != nullptr) {
            if (key == "beta0") current->beta0 = parse_trajectory(value, line_no);
            else if (key == "beta1") current->beta1 = parse_trajectory(value, line_no);
            else if (key == "noise_sd") current->noise_sd_mv = parse_number(value, line_no);
            else if (key == "dropout") current->dropout_windows = parse_windows(value, line_no);
            else fail(line_no, "unknown sensor key '" + key + "'");
        } else {
            if (key == "horizon_hours") scn.horizon_hours = parse_number(value, line_no);
            else if (key == "sample_period_hours") scn.sample_period_hours = parse_number(value, line_no);
            else if (key == "seed") scn.seed = static_cast<std::uint64_t>(parse_number(value, line_no));
            else if (key == "cycle_high_hours") scn.cycle.high_hours = parse_number(value, line_no);
            else if (key == "cycle_low_hours") scn.cycle.low_hours = parse_number(value, line_no);
            else if (key == "cycle_high_level") scn.cycle.high_level = parse_number(value, line_no);
            else if (key == "cycle_low_level") scn.cycle.low_level = parse_number(value, line_no);
            else if (key == "cycle_lag_tau_hours") scn.cycle.lag_tau_hours = parse_number(value, line_no);
            else fail(line_no, "unknown key '" + key + "'");
        }
    }
    if (current != nullptr) {
        throw ParseError("scenario: sensor block never closed (missing '}')");
    }
    validate(scn);
    return scn;
}

ScenarioSpec load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    return parse_scenario(in);
}

}  // namespace driftcal
