#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rfmseg/kmeans.hpp"
#include "rfmseg/matrix.hpp"

namespace rfmseg {

/// How kNoise labels enter the silhouette.
enum class NoisePolicy {
    Exclude,    ///< noise points are dropped before scoring
    AsCluster,  ///< noise points form one extra cluster
};

struct SilhouetteReport {
    double mean_score = 0.0;
    /// Row indices of the scored points; per-point vectors align with it.
    std::vector<std::size_t> point_index;
    std::vector<double> per_point;
    std::vector<double> per_point_a;
    std::vector<double> per_point_b;
    std::size_t excluded_noise = 0;
    std::size_t n_clusters = 0;
};

/// Exact silhouette with Euclidean distance: s = (b - a) / max(a, b) where a
/// is the mean distance to the rest of the point's cluster and b the lowest
/// mean distance to another cluster. Points in singleton clusters score 0.
/// Throws std::invalid_argument when fewer than two clusters remain.
SilhouetteReport silhouette(const Matrix& x, std::span<const int> labels, NoisePolicy noise = NoisePolicy::Exclude);

struct InertiaCurve {
    std::vector<std::size_t> k_values;
    /// Best inertia over the seeded runs at each k.
    std::vector<double> inertias;
    /// Seed that produced each best inertia.
    std::vector<std::uint64_t> best_seeds;
    /// Knee of the curve; 0 when the curve has fewer than three points.
    std::size_t chosen_k = 0;
};

/// Runs k-means with seeds seed0 .. seed0 + seeds - 1 for every k and keeps
/// the lowest inertia. Errors from kmeans_fit propagate.
InertiaCurve inertia_curve(const Matrix& x, std::span<const std::size_t> k_range, std::size_t seeds, std::uint64_t seed0,
                           KMeansInit init = KMeansInit::KMeansPlusPlus);

/// The k maximising inertia(k-1) - 2 inertia(k) + inertia(k+1) over interior
/// points; ties go to the smallest k. Throws std::invalid_argument for
/// fewer than three points.
std::size_t knee_point(std::span<const std::size_t> k_values, std::span<const double> inertias);
inline std::size_t knee_point(const InertiaCurve& c) { return knee_point(c.k_values, c.inertias); }

/// Distance from every point to its k-th nearest other point, ascending.
/// Throws std::invalid_argument unless 1 <= k < n.
std::vector<double> k_distance(const Matrix& x, std::size_t k);

}  // namespace rfmseg
