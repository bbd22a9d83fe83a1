#ifndef DRIFTCAL_GPR_HPP
#define DRIFTCAL_GPR_HPP

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

#include "driftcal/kernels.hpp"

namespace driftcal {

/// Observations for one GP: times (hours), targets and a per-observation
/// noise variance. Heteroscedastic by construction; calibration standard
/// errors enter squared.
struct GpTrainingSet {
    std::vector<double> times;
    std::vector<double> targets;
    std::vector<double> noise_vars;
};

/// Lower clamp applied to per-observation noise variances before
/// factorization. Calibration SEs can be exactly zero on perfect fits.
double gp_noise_floor(double kernel_variance, double target_variance);

struct GpFitOptions {
    /// Constant mean subtracted before solving and added back at prediction.
    /// Defaults to the empirical mean of the training targets.
    std::optional<double> mean_offset;
};

/// Fitted posterior. Immutable once built; safe to share across threads.
struct GpModel {
    KernelSpec kernel;
    GpTrainingSet training;   // sorted, duplicates merged, noise floored
    double mean_offset = 0.0;
    double jitter = 0.0;      // absolute value added to the diagonal
    Eigen::MatrixXd chol_lower;   // L with L L^T = K + diag(noise) + jitter I
    Eigen::VectorXd alpha_weights;  // (K + diag(noise) + jitter I)^-1 (y - m)
};

struct GpPrediction {
    double mean = 0.0;
    double variance = 0.0;
};

/// Factorize the noisy Gram matrix and precompute the weight vector.
/// Throws ValidationError on malformed inputs and NumericalError if the
/// Cholesky fails after jitter escalation.
GpModel fit_gp(const GpTrainingSet& training, const KernelSpec& kernel,
               const GpFitOptions& options = {});

/// Posterior mean and variance (diagonal only) at the given test times.
/// Variances are clamped to [0, inf).
std::vector<GpPrediction> predict(const GpModel& model,
                                  std::span<const double> ts_star);

GpPrediction predict_at(const GpModel& model, double t_star);

/// Gaussian evidence of the training data under the kernel, computed via
/// the Cholesky factor.
double log_marginal_likelihood(const GpTrainingSet& training,
                               const KernelSpec& kernel,
                               const GpFitOptions& options = {});

struct VarianceFitResult {
    KernelSpec kernel;
    bool degenerate = false;  // all targets identical; variance set to the floor
};

/// Replace the kernel variance with the marginal-likelihood maximizer found
/// by a coarse log-space grid plus golden-section refinement. Length and
/// family are left untouched. Requires n >= 2.
VarianceFitResult fit_variance(const GpTrainingSet& training,
                               const KernelSpec& kernel_template,
                               const GpFitOptions& options = {});

}  // namespace driftcal

#endif  // DRIFTCAL_GPR_HPP
