#pragma once

#include <cstddef>
#include <vector>

#include "rfmseg/matrix.hpp"

namespace rfmseg {

/// Maps each column onto [0, 1] via (x - min) / (max - min). Constant
/// columns map to 0. Throws std::invalid_argument on non-finite input.
FeatureMatrix minmax_scale(const FeatureMatrix& x);

/// Centers each column and divides by the sample (n - 1) standard
/// deviation. Constant columns (and n == 1) map to 0.
FeatureMatrix standard_scale(const FeatureMatrix& x);

/// Undoes a recorded scaling; raw matrices are returned unchanged.
FeatureMatrix inverse_transform(const FeatureMatrix& x);

/// Sample covariance with (n - 1) denominator. Throws std::invalid_argument for n < 2.
Matrix covariance_matrix(const Matrix& x);
inline Matrix covariance_matrix(const FeatureMatrix& x) { return covariance_matrix(x.data); }

struct SymmetricEigen {
    /// Descending.
    std::vector<double> values;
    /// Row i is the unit eigenvector of values[i]; its largest-magnitude
    /// entry is positive.
    Matrix vectors;
    int sweeps = 0;
};

struct JacobiOptions {
    double symmetry_tolerance = 1e-10;
    /// Converged when the off-diagonal Frobenius norm drops below
    /// relative_tolerance * ||C||_F.
    double relative_tolerance = 1e-12;
    int max_sweeps = 100;
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Throws
/// std::invalid_argument when the input is not square or not symmetric
/// within tolerance, AlgorithmError when it fails to converge.
SymmetricEigen eigen_symmetric(const Matrix& c, const JacobiOptions& opts = {});

struct PcaModel {
    /// k x d, orthonormal rows.
    Matrix components;
    /// k values, descending.
    std::vector<double> eigenvalues;
    std::vector<double> column_means;
    std::vector<double> explained_variance_ratio;
    /// Sum of all d eigenvalues (trace of the covariance).
    double total_variance = 0.0;

    /// Projects rows of x (n x d) onto the components (n x k).
    Matrix transform(const Matrix& x) const;
    /// Maps scores (n x k) back to the input space.
    Matrix inverse_transform(const Matrix& scores) const;
};

struct PcaResult {
    PcaModel model;
    /// n x k scores, columns named P1..Pk.
    FeatureMatrix scores;
};

/// Throws std::invalid_argument unless 1 <= k <= min(n, d) and n >= 2.
PcaResult pca_fit_transform(const FeatureMatrix& x, std::size_t k);

}  // namespace rfmseg
