#ifndef DRIFTCAL_KERNELS_HPP
#define DRIFTCAL_KERNELS_HPP

#include <Eigen/Dense>

#include <iosfwd>
#include <span>
#include <string>

namespace driftcal {

enum class KernelFamily { kRbf, kRationalQuadratic, kMatern };

/// Matern smoothness; only the half-integer closed forms are supported.
enum class MaternNu { kHalf, kThreeHalves, kFiveHalves };

/// A stationary covariance function over scalar time inputs (hours).
///
/// `rq_squared_distance` selects the conventional rational quadratic form
/// (1 + r^2 / (2 a l^2))^-a. Switching it off uses the variant with an
/// unsquared distance in the numerator, (1 + r / (2 a l^2))^-a.
struct KernelSpec {
    KernelFamily family = KernelFamily::kMatern;
    double variance = 1.0;       // sigma_k^2, squared output units
    double length_hours = 100.0; // characteristic length l
    double alpha = 1.0;          // rational quadratic shape, > 0
    MaternNu nu = MaternNu::kThreeHalves;
    bool rq_squared_distance = true;
};

/// Throws ValidationError on non-positive hyperparameters.
void validate(const KernelSpec& spec);

/// k(t, t') with r = |t - t'|.
double kernel_eval(const KernelSpec& spec, double t, double t_prime);

/// Covariance matrix with element (i, j) = k(ts[i], ts_prime[j]).
/// Throws ValidationError on empty inputs.
Eigen::MatrixXd gram(const KernelSpec& spec, std::span<const double> ts,
                     std::span<const double> ts_prime);

/// "rbf" | "rq" | "matern", as used in config files and CLI flags.
std::string family_name(KernelFamily family);
KernelFamily parse_family(const std::string& name);

double nu_value(MaternNu nu);
MaternNu parse_nu(const std::string& text);

/// Short label like "matern-200" or "rbf-50" used in result tables.
std::string kernel_label(const KernelSpec& spec);

/// Kernel spec from "key = value" lines: family ("rbf"|"rq"|"matern"),
/// variance, length_hours, optional alpha, nu ("0.5"|"1.5"|"2.5") and
/// rq_squared_distance (true|false). '#' starts a comment.
KernelSpec parse_kernel_config(std::istream& in);
KernelSpec load_kernel_config(const std::string& path);
std::string kernel_config_string(const KernelSpec& spec);

}  // namespace driftcal

#endif  // DRIFTCAL_KERNELS_HPP
