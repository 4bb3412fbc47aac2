#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rfmseg/clustering_result.hpp"
#include "rfmseg/matrix.hpp"

namespace rfmseg {

enum class KMeansInit { KMeansPlusPlus, Random };

struct KMeansParams {
    std::size_t k = 3;
    KMeansInit init = KMeansInit::KMeansPlusPlus;
    std::uint64_t seed = 0;
    std::size_t max_iter = 300;
    /// Stop once no centroid moves farther than this (Euclidean).
    double tol = 1e-8;
};

struct KMeansModel {
    Matrix centroids;
    /// Within-cluster sum of squared distances for the final labels.
    double inertia = 0.0;
    std::size_t k = 0;
    std::size_t n = 0;
};

struct KMeansFit {
    KMeansModel model;
    ClusteringResult result;
    /// Inertia after every assignment step; non-increasing.
    std::vector<double> inertia_history;
};

/// Lloyd's algorithm. Points go to the nearest centroid by squared
/// Euclidean distance, ties to the lowest centroid index. A centroid that
/// loses all its points is moved onto the point farthest from its own
/// centroid. Throws std::invalid_argument unless 1 <= k <= distinct rows.
KMeansFit kmeans_fit(const Matrix& x, const KMeansParams& params);

std::size_t count_distinct_rows(const Matrix& x);

/// Sum over points of squared distance to the centroid of their label.
double within_cluster_sum_of_squares(const Matrix& x, std::span<const int> labels, const Matrix& centroids);

std::string to_string(KMeansInit init);

}  // namespace rfmseg
