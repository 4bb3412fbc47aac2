#pragma once

// Randomised property suites shared by the unit tests and the acceptance
// runner. Every suite is seeded, so a given build always checks the same
// instances.

#include <string>

namespace props {

struct Outcome {
    bool ok = true;
    std::string detail;  // first failure, or a short summary on success
};

Outcome kmeans_inertia_monotone(int instances = 50);
Outcome kmeans_exhaustive_optimum(int instances = 50);
Outcome gmm_likelihood_monotone(int instances = 30);
Outcome dbscan_permutation_invariance(int permutations = 20);
Outcome cf_additivity(int merges = 1000);
Outcome agglomerative_monotone(int instances = 100);
Outcome silhouette_invariances(int instances = 100);
Outcome eigen_residual_and_trace(int instances = 100);

Outcome silhouette_hand_example();
Outcome covariance_hand_example();
Outcome k_distance_brute_force(int instances = 50);

}  // namespace props
