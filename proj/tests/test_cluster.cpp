#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "rfmseg/agglomerative.hpp"
#include "rfmseg/birch.hpp"
#include "rfmseg/clustering_result.hpp"
#include "rfmseg/dbscan.hpp"
#include "rfmseg/error.hpp"
#include "rfmseg/gmm.hpp"
#include "rfmseg/kmeans.hpp"

using namespace rfmseg;

namespace {

const Matrix kSixPoints = Matrix::from_rows({{0, 0}, {0, 1}, {1, 0}, {10, 10}, {10, 11}, {11, 10}});

}  // namespace

TEST(KMeans, TwoBlobs) {
    for (auto init : {KMeansInit::KMeansPlusPlus, KMeansInit::Random}) {
        KMeansParams p;
        p.k = 2;
        p.init = init;
        p.seed = 3;
        const auto fit = kmeans_fit(kSixPoints, p);
        EXPECT_TRUE(same_partition(fit.result.labels, std::vector<int>{0, 0, 0, 1, 1, 1}));
        EXPECT_NEAR(fit.model.inertia, 8.0 / 3.0, 1e-12);
        EXPECT_NEAR(oracle::best_wcss(kSixPoints, 2), 8.0 / 3.0, 1e-12);
    }
}

TEST(KMeans, KEqualsNGivesZeroInertia) {
    KMeansParams p;
    p.k = 6;
    const auto fit = kmeans_fit(kSixPoints, p);
    EXPECT_EQ(fit.model.inertia, 0.0);
    std::set<int> labels(fit.result.labels.begin(), fit.result.labels.end());
    EXPECT_EQ(labels.size(), 6u);
}

TEST(KMeans, DeterministicForSeed) {
    Rng rng(1);
    const Matrix x = oracle::random_matrix(rng, 200, 3);
    KMeansParams p;
    p.k = 4;
    p.seed = 99;
    const auto a = kmeans_fit(x, p), b = kmeans_fit(x, p);
    EXPECT_EQ(a.result.labels, b.result.labels);
    EXPECT_EQ(a.model.centroids, b.model.centroids);
}

TEST(KMeans, RejectsKAboveDistinctRows) {
    KMeansParams p;
    p.k = 3;
    EXPECT_THROW(kmeans_fit(Matrix::from_rows({{1, 1}, {1, 1}, {2, 2}}), p), std::invalid_argument);
    EXPECT_EQ(count_distinct_rows(Matrix::from_rows({{1, 1}, {1, 1}, {2, 2}})), 2u);
    p.k = 0;
    EXPECT_THROW(kmeans_fit(kSixPoints, p), std::invalid_argument);
}

TEST(KMeans, LabelsFollowNearestCentroid) {
    Rng rng(8);
    const Matrix x = oracle::blobs(rng, {{0, 0}, {5, 5}, {0, 5}}, 30, 1.0);
    KMeansParams p;
    p.k = 3;
    const auto fit = kmeans_fit(x, p);
    check_label_invariants(fit.result);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double best = 1e300;
        for (std::size_t c = 0; c < 3; ++c) best = std::min(best, squared_distance(x.row(i), fit.model.centroids.row(c)));
        EXPECT_DOUBLE_EQ(squared_distance(x.row(i), fit.model.centroids.row(static_cast<std::size_t>(fit.result.labels[i]))),
                         best);
    }
}

TEST(Gmm, SingleComponentIsTheSampleMean) {
    Rng rng(2);
    const Matrix x = oracle::random_matrix(rng, 50, 2, 0.0, 4.0);
    GmmParams p;
    p.k = 1;
    const auto fit = gmm_fit(x, p);
    for (std::size_t j = 0; j < 2; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < 50; ++i) mean += x(i, j);
        EXPECT_NEAR(fit.model.means(0, j), mean / 50.0, 1e-12);
    }
    EXPECT_EQ(fit.model.weights, std::vector<double>{1.0});
    for (double r : fit.model.responsibilities.data()) EXPECT_EQ(r, 1.0);
}

TEST(Gmm, RecoversSeparatedGaussians) {
    Rng rng(12);
    // sigma 0.5, centres 10 apart: twenty standard deviations
    const Matrix x = oracle::blobs(rng, {{0, 0}, {10, 0}}, 200, 0.5);
    GmmParams p;
    p.k = 2;
    p.seed = 4;
    const auto fit = gmm_fit(x, p);
    std::vector<double> xs = {fit.model.means(0, 0), fit.model.means(1, 0)};
    std::sort(xs.begin(), xs.end());
    EXPECT_NEAR(xs[0], 0.0, 0.1);
    EXPECT_NEAR(xs[1], 10.0, 0.1);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto row = fit.model.responsibilities.row(i);
        EXPECT_GT(*std::max_element(row.begin(), row.end()), 0.99);
    }
    std::vector<int> truth(400);
    for (std::size_t i = 200; i < 400; ++i) truth[i] = 1;
    EXPECT_TRUE(same_partition(fit.result.labels, truth));
}

TEST(Gmm, RejectsKAtLeastN) {
    GmmParams p;
    p.k = 3;
    EXPECT_THROW(gmm_fit(Matrix::from_rows({{0}, {1}, {2}}), p), std::invalid_argument);
}

TEST(Gmm, LogDensityOfStandardNormal) {
    const double v = gaussian_log_density(std::vector<double>{0.0}, std::vector<double>{0.0}, Matrix::identity(1));
    EXPECT_NEAR(v, -0.5 * std::log(2.0 * M_PI), 1e-14);
}

TEST(Dbscan, OneDimensionalExample) {
    const auto r = dbscan_fit(Matrix::from_rows({{0}, {0.1}, {0.2}, {5}}), {0.3, 2});
    EXPECT_EQ(r.labels, (std::vector<int>{0, 0, 0, kNoise}));
    EXPECT_EQ(r.n_clusters, 1u);
}

TEST(Dbscan, IdenticalPointsFormOneCluster) {
    const Matrix x(10, 2, 3.5);
    const auto r = dbscan_fit(x, {0.1, 10});
    EXPECT_EQ(r.n_clusters, 1u);
    for (int l : r.labels) EXPECT_EQ(l, 0);
}

TEST(Dbscan, BallIsClosedAndCountsThePointItself) {
    // 0 and 1 are exactly eps apart; with min_samples 2 each is core
    EXPECT_EQ(dbscan_fit(Matrix::from_rows({{0}, {1}}), {1.0, 2}).n_clusters, 1u);
    EXPECT_EQ(dbscan_fit(Matrix::from_rows({{0}, {1}}), {1.0, 3}).n_clusters, 0u);
    EXPECT_EQ(dbscan_fit(Matrix::from_rows({{0}}), {1.0, 1}).labels, std::vector<int>{0});
}

TEST(Dbscan, BorderPointJoinsButDoesNotExpand) {
    // eps 0.22, min_samples 4: 0.15 is core, 0.35 has three points in reach
    // (a border point), and 0.55 is only reachable through 0.35
    const auto r = dbscan_fit(Matrix::from_rows({{0}, {0.05}, {0.1}, {0.15}, {0.35}, {0.55}}), {0.22, 4});
    EXPECT_EQ(r.labels, (std::vector<int>{0, 0, 0, 0, 0, kNoise}));
}

TEST(Dbscan, MatchesBruteForceCorePoints) {
    Rng rng(77);
    const Matrix x = oracle::random_matrix(rng, 150, 2, 0.0, 3.0);
    const DbscanParams p{0.3, 4};
    const auto r = dbscan_fit(x, p);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        std::size_t within = 0;
        for (std::size_t j = 0; j < x.rows(); ++j) within += oracle::dist(x, i, j) <= p.eps;
        if (within >= p.min_samples) {
            EXPECT_NE(r.labels[i], kNoise) << i;
            // core neighbours share the cluster
            for (std::size_t j = 0; j < x.rows(); ++j)
                if (oracle::dist(x, i, j) <= p.eps && r.labels[j] != kNoise) {
                    std::size_t wj = 0;
                    for (std::size_t l = 0; l < x.rows(); ++l) wj += oracle::dist(x, j, l) <= p.eps;
                    if (wj >= p.min_samples) {
                        EXPECT_EQ(r.labels[i], r.labels[j]);
                    }
                }
        }
    }
}

TEST(Dbscan, ReachabilityDistance) {
    const Matrix x = Matrix::from_rows({{0}, {1}, {3}});
    EXPECT_DOUBLE_EQ(core_distance(x, 0, 2), 1.0);
    EXPECT_DOUBLE_EQ(reachability_distance(x, 0, 1, 2), 1.0);
    EXPECT_DOUBLE_EQ(core_distance(x, 1, 3), 2.0);
    // core distance of 1 is 2, which beats the pairwise distance 1
    EXPECT_DOUBLE_EQ(reachability_distance(x, 1, 0, 3), 2.0);
    EXPECT_DOUBLE_EQ(reachability_distance(x, 0, 2, 3), 3.0);
}

TEST(Dbscan, RejectsBadParameters) {
    EXPECT_THROW(dbscan_fit(Matrix(3, 1), {0.0, 2}), std::invalid_argument);
    EXPECT_THROW(dbscan_fit(Matrix(3, 1), {0.5, 0}), std::invalid_argument);
}

TEST(Birch, SinglePointEntry) {
    CFTree tree(0.5, 4);
    tree.insert(std::vector<double>{3.0, 4.0});
    const auto entries = tree.leaf_entries();
    ASSERT_EQ(entries.size(), 1u);
    EXPECT_EQ(entries[0].n, 1u);
    EXPECT_EQ(entries[0].ls, (std::vector<double>{3.0, 4.0}));
    EXPECT_EQ(entries[0].ss, 25.0);
}

TEST(Birch, ClusterFeatureMerge) {
    const ClusterFeature a{2, {2, 2}, 4}, b{1, {3, 4}, 25};
    const ClusterFeature m = merged(a, b);
    EXPECT_EQ(m, (ClusterFeature{3, {5, 6}, 29}));
    EXPECT_EQ(m.centroid(), (std::vector<double>{5.0 / 3.0, 2.0}));
    EXPECT_NEAR(centroid_distance(a, b), std::sqrt(4.0 + 9.0), 1e-15);
}

TEST(Birch, TreeStaysBalancedAndKeepsEveryPoint) {
    Rng rng(5);
    const Matrix x = oracle::random_matrix(rng, 2000, 2);
    CFTree tree(0.02, 5);
    for (std::size_t i = 0; i < x.rows(); ++i) tree.insert(x.row(i));
    const auto entries = tree.leaf_entries();
    std::size_t total = 0;
    for (const auto& e : entries) {
        total += e.n;
        EXPECT_LE(e.radius(), 0.02 + 1e-12);
    }
    EXPECT_EQ(total, 2000u);
    EXPECT_GT(tree.height(), 2u);
}

TEST(Birch, ThreeBlobs) {
    Rng rng(6);
    const Matrix x = oracle::blobs(rng, {{0, 0}, {4, 4}, {0, 4}}, 60, 0.3);
    BirchParams p;
    p.threshold = 0.3;
    p.n_clusters = 3;
    const auto fit = birch_fit(x, p);
    std::vector<int> truth(180);
    for (std::size_t i = 0; i < 180; ++i) truth[i] = static_cast<int>(i / 60);
    EXPECT_TRUE(same_partition(fit.result.labels, truth));
    EXPECT_EQ(fit.result.n_clusters, 3u);
}

TEST(Agglomerative, TwoPointsMergeAtTheirDistance) {
    const Matrix x = Matrix::from_rows({{0, 0}, {3, 4}});
    for (Linkage l : {Linkage::Single, Linkage::Complete, Linkage::Average, Linkage::Ward}) {
        const auto tree = linkage_tree(x, l);
        ASSERT_EQ(tree.size(), 1u);
        EXPECT_DOUBLE_EQ(tree[0].distance, 5.0) << to_string(l);
    }
}

TEST(Agglomerative, LinkageValuesByHand) {
    // A = {0, 1}, B = {3, 7}; cross distances 3, 7, 2, 6
    const Matrix x = Matrix::from_rows({{0}, {1}, {3}, {7}});
    const std::vector<std::size_t> A = {0, 1}, B = {2, 3};
    EXPECT_EQ(linkage_distance(x, A, B, Linkage::Single), 2.0);
    EXPECT_EQ(linkage_distance(x, A, B, Linkage::Complete), 7.0);
    EXPECT_EQ(linkage_distance(x, A, B, Linkage::Average), 4.5);
    // centroids 0.5 and 5: sqrt(2 * 2 * 2 / 4) * 4.5
    EXPECT_NEAR(linkage_distance(x, A, B, Linkage::Ward), std::sqrt(2.0) * 4.5, 1e-12);
}

TEST(Agglomerative, PrescribedClustersGiveLinkageValues) {
    // Points spread so the first two merges are {0,1} and {3,7} for every
    // linkage: inside distances 1 and 1.5 are the smallest gaps.
    const Matrix x = Matrix::from_rows({{0}, {1}, {6}, {7.5}});
    const double single = 5.0, complete = 7.5, average = (6 + 7.5 + 5 + 6.5) / 4.0;
    EXPECT_DOUBLE_EQ(linkage_tree(x, Linkage::Single).back().distance, single);
    EXPECT_DOUBLE_EQ(linkage_tree(x, Linkage::Complete).back().distance, complete);
    EXPECT_DOUBLE_EQ(linkage_tree(x, Linkage::Average).back().distance, average);
    // ward: sqrt(2*2*2/4) * |0.5 - 6.75|
    EXPECT_NEAR(linkage_tree(x, Linkage::Ward).back().distance, std::sqrt(2.0) * 6.25, 1e-12);
}

TEST(Agglomerative, CutMatchesGreedyOracle) {
    Rng rng(41);
    for (Linkage l : {Linkage::Single, Linkage::Complete, Linkage::Average, Linkage::Ward}) {
        for (int t = 0; t < 20; ++t) {
            const Matrix x = oracle::random_matrix(rng, 25, 2);
            const auto fit = agglomerative_fit(x, 4, l);
            EXPECT_TRUE(same_partition(fit.result.labels, oracle::greedy_cut(x, l, 4))) << to_string(l) << " " << t;
            check_label_invariants(fit.result);
        }
    }
}

TEST(Agglomerative, LabelsNumberedBySmallestMember) {
    const Matrix x = Matrix::from_rows({{10}, {0}, {10.5}, {0.5}});
    const auto fit = agglomerative_fit(x, 2, Linkage::Ward);
    EXPECT_EQ(fit.result.labels, (std::vector<int>{0, 1, 0, 1}));
}

TEST(Agglomerative, RejectsTooManyClustersAndGuardsMemory) {
    EXPECT_THROW(agglomerative_fit(Matrix(3, 1), 4, Linkage::Ward), std::invalid_argument);
    Rng rng(3);
    const Matrix x = oracle::random_matrix(rng, 100, 2);
    EXPECT_THROW(agglomerative_fit(x, 2, Linkage::Average, 1024), AlgorithmError);
    // single and ward do not need the table
    EXPECT_NO_THROW(agglomerative_fit(x, 2, Linkage::Single, 1024));
    EXPECT_NO_THROW(agglomerative_fit(x, 2, Linkage::Ward, 1024));
}

TEST(Agglomerative, ParseLinkageNames) {
    EXPECT_EQ(parse_linkage("ward"), Linkage::Ward);
    EXPECT_EQ(parse_linkage("single"), Linkage::Single);
    EXPECT_FALSE(parse_linkage("centroid").has_value());
}

TEST(ClusteringResult, CompactAndCompare) {
    std::vector<int> l = {7, 3, 7, kNoise, 3};
    EXPECT_EQ(compact_labels(l), 2u);
    EXPECT_EQ(l, (std::vector<int>{1, 0, 1, kNoise, 0}));  // ids keep their order: 3 -> 0, 7 -> 1
    EXPECT_TRUE(same_partition(std::vector<int>{0, 0, 1}, std::vector<int>{5, 5, 2}));
    EXPECT_FALSE(same_partition(std::vector<int>{0, 0, 1}, std::vector<int>{0, 1, 1}));
}
