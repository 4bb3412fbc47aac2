#pragma once

// Deliberately naive reference implementations used to check the library.
// They share no code with it beyond the Matrix container.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rfmseg/agglomerative.hpp"
#include "rfmseg/matrix.hpp"
#include "rfmseg/random.hpp"

namespace oracle {

double dist(const rfmseg::Matrix& x, std::size_t i, std::size_t j);

/// Silhouette straight from the definition, one point at a time. Noise
/// (label -1) is skipped when `skip_noise` is set.
double silhouette(const rfmseg::Matrix& x, const std::vector<int>& labels, bool skip_noise = true);

/// Distance to the k-th nearest other point for every point, ascending.
std::vector<double> k_distance(const rfmseg::Matrix& x, std::size_t k);

/// Lowest within-cluster sum of squares over every assignment of the n
/// points to exactly k non-empty clusters (k^n enumeration).
double best_wcss(const rfmseg::Matrix& x, std::size_t k);

struct Merge {
    double height;
    std::vector<std::size_t> members;  // points of the merged cluster
};

/// Textbook greedy agglomeration: at every step recompute the linkage of
/// every pair of current clusters from the raw points and merge the closest.
std::vector<Merge> greedy_linkage(const rfmseg::Matrix& x, rfmseg::Linkage linkage);

/// Flat labels after merging down to n_clusters with greedy_linkage.
std::vector<int> greedy_cut(const rfmseg::Matrix& x, rfmseg::Linkage linkage, std::size_t n_clusters);

/// Uniform random matrix in [lo, hi).
rfmseg::Matrix random_matrix(rfmseg::Rng& rng, std::size_t n, std::size_t d, double lo = -1.0, double hi = 1.0);

/// Gaussian blobs around the given centres.
rfmseg::Matrix blobs(rfmseg::Rng& rng, const std::vector<std::vector<double>>& centres, std::size_t per_blob,
                     double sigma);

}  // namespace oracle
