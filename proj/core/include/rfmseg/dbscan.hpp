#pragma once

#include <cstddef>

#include "rfmseg/clustering_result.hpp"
#include "rfmseg/matrix.hpp"

namespace rfmseg {

struct DbscanParams {
    /// Neighbourhood radius; neighbourhoods are closed balls.
    double eps = 0.3;
    /// Points needed in a neighbourhood (the point itself included) for a core point.
    std::size_t min_samples = 5;

    void validate() const;
};

/// Density clustering. Clusters are the connected components of core points
/// under eps-reachability, numbered in order of their lowest-index core
/// point. A border point joins the first cluster whose expansion reaches it;
/// everything else is kNoise. n_clusters excludes noise.
ClusteringResult dbscan_fit(const Matrix& x, const DbscanParams& params);

/// Distance from point p to its min_samples-th nearest point, counting p
/// itself as the first (so min_samples == 1 gives 0).
double core_distance(const Matrix& x, std::size_t p, std::size_t min_samples);

/// max(core_distance(p), |p - q|).
double reachability_distance(const Matrix& x, std::size_t p, std::size_t q, std::size_t min_samples);

}  // namespace rfmseg
