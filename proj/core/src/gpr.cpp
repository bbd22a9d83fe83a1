#include "driftcal/gpr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "driftcal/errors.hpp"

namespace driftcal {

namespace {

constexpr double kJitterRel = 1e-9;      // initial jitter, relative to sigma_k^2
constexpr double kJitterRelMax = 1e-3;   // escalation ceiling
constexpr double kNoiseFloorRel = 1e-8;
constexpr double kTargetVarFloor = 1e-12;

double sample_variance(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / double(n);
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return ss / double(n - 1);
}

void validate_training(const GpTrainingSet& training) {
    const std::size_t n = training.times.size();
    if (n == 0) throw ValidationError("training set must contain at least one observation");
    if (training.targets.size() != n || training.noise_vars.size() != n) {
        throw ValidationError("training times, targets and noise variances must have equal length");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(training.times[i]) || !std::isfinite(training.targets[i])) {
            throw ValidationError("training data must be finite");
        }
        if (!(training.noise_vars[i] >= 0.0) || !std::isfinite(training.noise_vars[i])) {
            throw ValidationError("noise variances must be finite and non-negative");
        }
    }
}

/// Sort by time, clamp noise variances to the floor, then merge exact
/// duplicate times by precision-weighted averaging (weights 1/noise_var).
GpTrainingSet preprocess(const GpTrainingSet& training, double kernel_variance) {
    const std::size_t n = training.times.size();
    const double floor = gp_noise_floor(kernel_variance, sample_variance(training.targets));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return training.times[a] < training.times[b];
    });

    GpTrainingSet out;
    out.times.reserve(n);
    out.targets.reserve(n);
    out.noise_vars.reserve(n);

    std::size_t i = 0;
    while (i < n) {
        const double t = training.times[order[i]];
        double weight_sum = 0.0;
        double weighted_target = 0.0;
        std::size_t j = i;
        for (; j < n && training.times[order[j]] == t; ++j) {
            const double var = std::max(training.noise_vars[order[j]], floor);
            weight_sum += 1.0 / var;
            weighted_target += training.targets[order[j]] / var;
        }
        out.times.push_back(t);
        out.targets.push_back(weighted_target / weight_sum);
        out.noise_vars.push_back(1.0 / weight_sum);
        i = j;
    }
    return out;
}

struct Factorization {
    GpTrainingSet training;
    double mean_offset = 0.0;
    double jitter = 0.0;
    Eigen::MatrixXd chol_lower;
    Eigen::VectorXd centered;  // y - m
};

Factorization factorize(const GpTrainingSet& raw, const KernelSpec& kernel,
                        const GpFitOptions& options) {
    validate(kernel);
    validate_training(raw);

    Factorization f;
    f.training = preprocess(raw, kernel.variance);
    const auto n = static_cast<Eigen::Index>(f.training.times.size());

    f.mean_offset = options.mean_offset.value_or(
        std::accumulate(f.training.targets.begin(), f.training.targets.end(), 0.0) /
        double(f.training.times.size()));

    f.centered.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        f.centered(i) = f.training.targets[i] - f.mean_offset;
    }

    Eigen::MatrixXd noisy = gram(kernel, f.training.times, f.training.times);
    for (Eigen::Index i = 0; i < n; ++i) {
        noisy(i, i) += f.training.noise_vars[i];
    }

    double jitter = kJitterRel * kernel.variance;
    const double jitter_max = kJitterRelMax * kernel.variance;
    while (true) {
        Eigen::MatrixXd attempt = noisy;
        attempt.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(attempt);
        if (llt.info() == Eigen::Success) {
            f.jitter = jitter;
            f.chol_lower = llt.matrixL();
            return f;
        }
        if (jitter >= jitter_max) break;
        jitter = std::min(jitter * 10.0, jitter_max);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(noisy, Eigen::EigenvaluesOnly);
    std::ostringstream msg;
    msg << "Cholesky factorization failed after jitter escalation to " << jitter_max
        << "; eigenvalue range [" << es.eigenvalues().minCoeff() << ", "
        << es.eigenvalues().maxCoeff() << "]";
    throw NumericalError(msg.str());
}

}  // namespace

double gp_noise_floor(double kernel_variance, double target_variance) {
    return kNoiseFloorRel *
           std::max({kernel_variance, target_variance, kTargetVarFloor});
}

GpModel fit_gp(const GpTrainingSet& training, const KernelSpec& kernel,
               const GpFitOptions& options) {
    Factorization f = factorize(training, kernel, options);
    GpModel model;
    model.kernel = kernel;
    model.mean_offset = f.mean_offset;
    model.jitter = f.jitter;
    model.alpha_weights = f.chol_lower.triangularView<Eigen::Lower>().solve(f.centered);
    f.chol_lower.transpose().triangularView<Eigen::Upper>().solveInPlace(
        model.alpha_weights);
    model.chol_lower = std::move(f.chol_lower);
    model.training = std::move(f.training);
    return model;
}

std::vector<GpPrediction> predict(const GpModel& model,
                                  std::span<const double> ts_star) {
    if (ts_star.empty()) return {};
    const Eigen::MatrixXd k_star = gram(model.kernel, model.training.times, ts_star);

    // Column-at-a-time so each test point's result is bit-identical no
    // matter how predictions are batched.
    std::vector<GpPrediction> out(ts_star.size());
    Eigen::VectorXd col(k_star.rows());
    for (std::size_t j = 0; j < ts_star.size(); ++j) {
        const auto cj = static_cast<Eigen::Index>(j);
        col = k_star.col(cj);
        out[j].mean = col.dot(model.alpha_weights) + model.mean_offset;
        model.chol_lower.triangularView<Eigen::Lower>().solveInPlace(col);
        const double prior = kernel_eval(model.kernel, ts_star[j], ts_star[j]);
        out[j].variance = std::max(0.0, prior - col.squaredNorm());
    }
    return out;
}

GpPrediction predict_at(const GpModel& model, double t_star) {
    return predict(model, std::span<const double>(&t_star, 1)).front();
}

double log_marginal_likelihood(const GpTrainingSet& training,
                               const KernelSpec& kernel,
                               const GpFitOptions& options) {
    const Factorization f = factorize(training, kernel, options);
    Eigen::VectorXd alpha = f.chol_lower.triangularView<Eigen::Lower>().solve(f.centered);
    f.chol_lower.transpose().triangularView<Eigen::Upper>().solveInPlace(alpha);

    const double quad = f.centered.dot(alpha);
    const double log_det = f.chol_lower.diagonal().array().log().sum();
    const auto n = static_cast<double>(f.training.times.size());
    return -0.5 * quad - log_det - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

VarianceFitResult fit_variance(const GpTrainingSet& training,
                               const KernelSpec& kernel_template,
                               const GpFitOptions& options) {
    validate(kernel_template);
    validate_training(training);
    if (training.times.size() < 2) {
        throw ValidationError("fit_variance requires at least two observations");
    }

    const double target_var =
        std::max(sample_variance(training.targets), kTargetVarFloor);

    VarianceFitResult result;
    result.kernel = kernel_template;

    const auto [min_it, max_it] =
        std::minmax_element(training.targets.begin(), training.targets.end());
    if (*min_it == *max_it) {
        result.kernel.variance = gp_noise_floor(kernel_template.variance, target_var);
        result.degenerate = true;
        return result;
    }

    const auto lml_at = [&](double log_var) {
        KernelSpec k = kernel_template;
        k.variance = std::exp(log_var);
        return log_marginal_likelihood(training, k, options);
    };

    const double lo = std::log(1e-4 * target_var);
    const double hi = std::log(1e4 * target_var);
    constexpr int kGridPoints = 33;

    int best = 0;
    double best_lml = -std::numeric_limits<double>::infinity();
    std::vector<double> grid(kGridPoints);
    for (int i = 0; i < kGridPoints; ++i) {
        grid[i] = lo + (hi - lo) * double(i) / double(kGridPoints - 1);
        const double lml = lml_at(grid[i]);
        if (lml > best_lml) {
            best_lml = lml;
            best = i;
        }
    }

    // Golden-section refinement between the neighbors of the best grid point.
    double a = grid[std::max(0, best - 1)];
    double b = grid[std::min(kGridPoints - 1, best + 1)];
    constexpr double kInvPhi = 0.6180339887498949;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = lml_at(c);
    double fd = lml_at(d);
    for (int iter = 0; iter < 40 && (b - a) > 1e-6; ++iter) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = lml_at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = lml_at(d);
        }
    }
    const double refined = 0.5 * (a + b);
    const double refined_lml = lml_at(refined);

    result.kernel.variance =
        refined_lml >= best_lml ? std::exp(refined) : std::exp(grid[best]);
    return result;
}

}  // namespace driftcal
