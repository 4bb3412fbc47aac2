#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "rfmseg/agglomerative.hpp"
#include "rfmseg/clustering_result.hpp"
#include "rfmseg/matrix.hpp"

namespace rfmseg {

/// Clustering feature (N, LS, SS): member count, linear sum of members and
/// sum of their squared norms.
struct ClusterFeature {
    std::size_t n = 0;
    std::vector<double> ls;
    double ss = 0.0;

    static ClusterFeature of_point(std::span<const double> x);

    void merge(const ClusterFeature& other);
    friend ClusterFeature merged(ClusterFeature a, const ClusterFeature& b) {
        a.merge(b);
        return a;
    }

    std::vector<double> centroid() const;
    /// SS/N - |LS/N|^2: mean squared distance of members to the centroid.
    double radius_squared() const;
    double radius() const;

    friend bool operator==(const ClusterFeature&, const ClusterFeature&) = default;
};

/// Euclidean distance between the centroids of two clustering features.
double centroid_distance(const ClusterFeature& a, const ClusterFeature& b);

/// Height-balanced CF tree. Each inserted point is absorbed by the nearest
/// leaf entry when the merged radius stays within the threshold; otherwise
/// it opens a new entry. Nodes holding more than `branching` entries split
/// around their two farthest entries.
class CFTree {
public:
    CFTree(double threshold, std::size_t branching);
    ~CFTree();
    CFTree(CFTree&&) noexcept;
    CFTree& operator=(CFTree&&) noexcept;

    /// Returns the id of the leaf entry that now holds the point.
    std::size_t insert(std::span<const double> point);

    /// Leaf entries indexed by entry id.
    std::vector<ClusterFeature> leaf_entries() const;
    std::size_t leaf_entry_count() const { return entry_count_; }
    std::size_t height() const;
    std::size_t node_count() const;

private:
    struct Node;
    struct Entry;
    struct Split;

    std::unique_ptr<Split> insert_into(Node& node, const ClusterFeature& point, std::size_t& entry_id);
    std::unique_ptr<Split> split(Node& node);

    double threshold_;
    std::size_t branching_;
    std::unique_ptr<Node> root_;
    std::size_t entry_count_ = 0;
};

struct BirchParams {
    double threshold = 0.01;
    std::size_t branching = 50;
    std::size_t n_clusters = 3;

    void validate() const;
};

struct BirchFit {
    ClusteringResult result;
    std::vector<ClusterFeature> leaf_entries;
    /// Global cluster of each leaf entry.
    std::vector<int> entry_labels;
    std::vector<MergeStep> global_merges;
};

/// Builds the CF tree in one pass, then groups leaf-entry centroids with
/// average-linkage agglomerative clustering. Each point takes its leaf
/// entry's group. When there are fewer leaf entries than n_clusters, every
/// entry is its own group.
BirchFit birch_fit(const Matrix& x, const BirchParams& params);

}  // namespace rfmseg
