#include "driftcal/kernels.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "driftcal/errors.hpp"

namespace driftcal {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kSqrt5 = 2.23606797749979;

double eval_at_distance(const KernelSpec& spec, double r) {
    const double l = spec.length_hours;
    switch (spec.family) {
        case KernelFamily::kRbf:
            return spec.variance * std::exp(-0.5 * (r / l) * (r / l));
        case KernelFamily::kRationalQuadratic: {
            const double num = spec.rq_squared_distance ? r * r : r;
            const double base = 1.0 + num / (2.0 * spec.alpha * l * l);
            return spec.variance * std::pow(base, -spec.alpha);
        }
        case KernelFamily::kMatern:
            switch (spec.nu) {
                case MaternNu::kHalf:
                    return spec.variance * std::exp(-r / l);
                case MaternNu::kThreeHalves: {
                    const double s = kSqrt3 * r / l;
                    return spec.variance * (1.0 + s) * std::exp(-s);
                }
                case MaternNu::kFiveHalves: {
                    const double s = kSqrt5 * r / l;
                    return spec.variance * (1.0 + s + 5.0 * r * r / (3.0 * l * l)) *
                           std::exp(-s);
                }
            }
            break;
    }
    throw ValidationError("unknown kernel family");
}

}  // namespace

void validate(const KernelSpec& spec) {
    if (!(spec.variance > 0.0) || !std::isfinite(spec.variance)) {
        throw ValidationError("kernel variance must be positive and finite");
    }
    if (!(spec.length_hours > 0.0) || !std::isfinite(spec.length_hours)) {
        throw ValidationError("kernel length must be positive and finite");
    }
    if (spec.family == KernelFamily::kRationalQuadratic &&
        (!(spec.alpha > 0.0) || !std::isfinite(spec.alpha))) {
        throw ValidationError("rational quadratic alpha must be positive and finite");
    }
}

double kernel_eval(const KernelSpec& spec, double t, double t_prime) {
    validate(spec);
    return eval_at_distance(spec, std::abs(t - t_prime));
}

Eigen::MatrixXd gram(const KernelSpec& spec, std::span<const double> ts,
                     std::span<const double> ts_prime) {
    validate(spec);
    if (ts.empty() || ts_prime.empty()) {
        throw ValidationError("gram requires non-empty input lists");
    }
    Eigen::MatrixXd k(static_cast<Eigen::Index>(ts.size()),
                      static_cast<Eigen::Index>(ts_prime.size()));
    for (std::size_t j = 0; j < ts_prime.size(); ++j) {
        for (std::size_t i = 0; i < ts.size(); ++i) {
            k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                eval_at_distance(spec, std::abs(ts[i] - ts_prime[j]));
        }
    }
    return k;
}

std::string family_name(KernelFamily family) {
    switch (family) {
        case KernelFamily::kRbf: return "rbf";
        case KernelFamily::kRationalQuadratic: return "rq";
        case KernelFamily::kMatern: return "matern";
    }
    return "unknown";
}

KernelFamily parse_family(const std::string& name) {
    if (name == "rbf") return KernelFamily::kRbf;
    if (name == "rq") return KernelFamily::kRationalQuadratic;
    if (name == "matern") return KernelFamily::kMatern;
    throw ValidationError("unknown kernel family: " + name);
}

double nu_value(MaternNu nu) {
    switch (nu) {
        case MaternNu::kHalf: return 0.5;
        case MaternNu::kThreeHalves: return 1.5;
        case MaternNu::kFiveHalves: return 2.5;
    }
    return 0.0;
}

MaternNu parse_nu(const std::string& text) {
    if (text == "0.5") return MaternNu::kHalf;
    if (text == "1.5") return MaternNu::kThreeHalves;
    if (text == "2.5") return MaternNu::kFiveHalves;
    throw ValidationError("matern nu must be one of 0.5, 1.5, 2.5; got: " + text);
}

std::string kernel_label(const KernelSpec& spec) {
    const double l = spec.length_hours;
    std::string len;
    if (l == static_cast<double>(static_cast<long long>(l))) {
        len = std::to_string(static_cast<long long>(l));
    } else {
        len = std::to_string(l);
    }
    return family_name(spec.family) + "-" + len;
}

KernelSpec parse_kernel_config(std::istream& in) {
    KernelSpec spec;
    std::string raw;
    int line_no = 0;
    const auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("kernel config line " + std::to_string(line_no) +
                             ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "family") spec.family = parse_family(value);
            else if (key == "variance") spec.variance = std::stod(value);
            else if (key == "length_hours") spec.length_hours = std::stod(value);
            else if (key == "alpha") spec.alpha = std::stod(value);
            else if (key == "nu") spec.nu = parse_nu(value);
            else if (key == "rq_squared_distance") {
                if (value == "true") spec.rq_squared_distance = true;
                else if (value == "false") spec.rq_squared_distance = false;
                else throw ValidationError("expected true or false");
            } else {
                throw ValidationError("unknown key '" + key + "'");
            }
        } catch (const std::exception& e) {
            throw ParseError("kernel config line " + std::to_string(line_no) + ": " +
                             e.what());
        }
    }
    validate(spec);
    return spec;
}

KernelSpec load_kernel_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open kernel config: " + path);
    return parse_kernel_config(in);
}

std::string kernel_config_string(const KernelSpec& spec) {
    std::ostringstream out;
    out << "family = " << family_name(spec.family) << "\n";
    out << "variance = " << spec.variance << "\n";
    out << "length_hours = " << spec.length_hours << "\n";
    if (spec.family == KernelFamily::kRationalQuadratic) {
        out << "alpha = " << spec.alpha << "\n";
        out << "rq_squared_distance = "
            << (spec.rq_squared_distance ? "true" : "false") << "\n";
    }
    if (spec.family == KernelFamily::kMatern) {
        out << "nu = " << nu_value(spec.nu) << "\n";
    }
    return out.str();
}

}  // namespace driftcal
