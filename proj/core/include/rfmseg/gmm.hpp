#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rfmseg/clustering_result.hpp"
#include "rfmseg/matrix.hpp"

namespace rfmseg {

struct GmmParams {
    std::size_t k = 3;
    std::uint64_t seed = 0;
    std::size_t max_iter = 200;
    /// Stop when the mean log-likelihood improves by less than this.
    double tol = 1e-6;
    /// Added to every covariance diagonal after each M-step.
    double reg = 1e-6;
};

struct GmmModel {
    std::vector<double> weights;
    Matrix means;
    std::vector<Matrix> covariances;
    /// Mean per-point log-likelihood at the final parameters.
    double log_likelihood = 0.0;
    /// n x k posterior component probabilities.
    Matrix responsibilities;
    bool converged = false;
};

struct GmmFit {
    GmmModel model;
    /// Labels are the argmax responsibility, renumbered densely if a
    /// component wins no point.
    ClusteringResult result;
    /// Mean log-likelihood after every E-step; non-decreasing up to rounding.
    std::vector<double> log_likelihood_history;
};

/// EM for a full-covariance Gaussian mixture, initialised from a seeded
/// k-means++ run. Throws std::invalid_argument when k < 1 or k >= n, and
/// AlgorithmError naming the component when a covariance collapses.
GmmFit gmm_fit(const Matrix& x, const GmmParams& params);

/// log N(x | mean, cov). Throws AlgorithmError if cov is not positive definite.
double gaussian_log_density(std::span<const double> x, std::span<const double> mean, const Matrix& cov);

}  // namespace rfmseg
