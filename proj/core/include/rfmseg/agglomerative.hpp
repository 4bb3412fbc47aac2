#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rfmseg/clustering_result.hpp"
#include "rfmseg/matrix.hpp"

namespace rfmseg {

enum class Linkage {
    Single,    ///< min pairwise distance
    Complete,  ///< max pairwise distance
    Average,   ///< mean pairwise distance, sum / (|A| |B|)
    Ward,      ///< sqrt(2 |A||B| / (|A|+|B|)) * |centroid(A) - centroid(B)|
};

std::string to_string(Linkage l);
std::optional<Linkage> parse_linkage(std::string_view name);

/// One merge. Ids 0..n-1 are the input points; the cluster created by merge
/// number s gets id n + s.
struct MergeStep {
    std::size_t a = 0;
    std::size_t b = 0;
    double distance = 0.0;
    std::size_t size = 0;
};

struct AgglomerativeFit {
    ClusteringResult result;
    /// The n - n_clusters merges performed, in order; distances non-decreasing.
    std::vector<MergeStep> merges;
};

/// Bottom-up clustering from singletons until n_clusters remain. Cluster
/// labels are numbered by each cluster's smallest point index.
///
/// Single linkage runs on a minimum spanning tree and Ward on centroids,
/// both in O(n) memory; complete and average keep an n(n-1)/2 distance
/// table and throw AlgorithmError when it would exceed `max_table_bytes`.
/// Throws std::invalid_argument unless 1 <= n_clusters <= n.
AgglomerativeFit agglomerative_fit(const Matrix& x, std::size_t n_clusters, Linkage linkage,
                                   std::size_t max_table_bytes = std::size_t{1} << 31);

/// Full n-1 step dendrogram in scipy-style merge order.
std::vector<MergeStep> linkage_tree(const Matrix& x, Linkage linkage, std::size_t max_table_bytes = std::size_t{1} << 31);

/// Linkage between two explicit groups of rows, evaluated directly from the
/// definition. O(|a| |b|).
double linkage_distance(const Matrix& x, std::span<const std::size_t> a, std::span<const std::size_t> b, Linkage linkage);

/// Flat labels after applying the first n - n_clusters merges of a tree.
std::vector<int> cut_tree(std::size_t n, const std::vector<MergeStep>& tree, std::size_t n_clusters);

}  // namespace rfmseg
