#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace rfmseg {

inline constexpr int kNoise = -1;

struct ClusteringResult {
    /// One label per input row; kNoise marks DBSCAN noise.
    std::vector<int> labels;
    std::size_t n_clusters = 0;
    std::uint64_t seed = 0;
    std::size_t iterations = 0;
    /// Algorithm-specific scalars (inertia, log_likelihood, leaf_entries, ...).
    std::map<std::string, double> diagnostics;

    std::size_t noise_count() const;
    std::vector<std::size_t> cluster_sizes() const;
};

/// Throws std::logic_error unless every non-noise label lies in
/// [0, n_clusters), every cluster id is used, and noise appears only when
/// `allow_noise` is set.
void check_label_invariants(const ClusteringResult& r, bool allow_noise = false);

/// Renumbers non-noise labels to 0..m-1 preserving the order of the
/// original ids; returns m.
std::size_t compact_labels(std::span<int> labels);

/// True when two labelings induce the same partition (noise compared as a set).
bool same_partition(std::span<const int> a, std::span<const int> b);

}  // namespace rfmseg
