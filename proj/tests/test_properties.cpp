#include <gtest/gtest.h>

#include "properties.hpp"

// The randomised suites live in the support library so the acceptance
// runner executes exactly the same checks.

#define EXPECT_PROPERTY(call)                    \
    do {                                         \
        const props::Outcome o = (call);         \
        EXPECT_TRUE(o.ok) << o.detail;           \
    } while (false)

TEST(Properties, KMeansInertiaMonotone) { EXPECT_PROPERTY(props::kmeans_inertia_monotone()); }
TEST(Properties, KMeansExhaustiveOptimum) { EXPECT_PROPERTY(props::kmeans_exhaustive_optimum()); }
TEST(Properties, GmmLikelihoodMonotone) { EXPECT_PROPERTY(props::gmm_likelihood_monotone()); }
TEST(Properties, DbscanPermutationInvariance) { EXPECT_PROPERTY(props::dbscan_permutation_invariance()); }
TEST(Properties, ClusterFeatureAdditivity) { EXPECT_PROPERTY(props::cf_additivity()); }
TEST(Properties, AgglomerativeMonotone) { EXPECT_PROPERTY(props::agglomerative_monotone()); }
TEST(Properties, SilhouetteInvariances) { EXPECT_PROPERTY(props::silhouette_invariances()); }
TEST(Properties, EigenResidualAndTrace) { EXPECT_PROPERTY(props::eigen_residual_and_trace()); }
TEST(Properties, SilhouetteHandExample) { EXPECT_PROPERTY(props::silhouette_hand_example()); }
TEST(Properties, CovarianceHandExample) { EXPECT_PROPERTY(props::covariance_hand_example()); }
TEST(Properties, KDistanceBruteForce) { EXPECT_PROPERTY(props::k_distance_brute_force()); }
