#include <benchmark/benchmark.h>

#include "rfmseg/agglomerative.hpp"
#include "rfmseg/birch.hpp"
#include "rfmseg/dbscan.hpp"
#include "rfmseg/eval.hpp"
#include "rfmseg/gmm.hpp"
#include "rfmseg/kmeans.hpp"
#include "rfmseg/numeric.hpp"
#include "rfmseg/random.hpp"

using namespace rfmseg;

namespace {

// Three loose blobs in the unit square, roughly the shape of min-max scaled
// customer features.
Matrix blobs(std::size_t n, std::size_t d = 2) {
    Rng rng(7);
    const double centres[3] = {0.2, 0.5, 0.8};
    Matrix m(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) = centres[(i + j) % 3] + 0.05 * rng.normal();
    return m;
}

}  // namespace

static void BM_KMeans(benchmark::State& state) {
    const Matrix x = blobs(static_cast<std::size_t>(state.range(0)));
    KMeansParams p;
    p.k = 3;
    for (auto _ : state) benchmark::DoNotOptimize(kmeans_fit(x, p).model.inertia);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KMeans)->Arg(1000)->Arg(4400)->Arg(40000);

static void BM_Gmm(benchmark::State& state) {
    const Matrix x = blobs(static_cast<std::size_t>(state.range(0)));
    GmmParams p;
    p.k = 3;
    for (auto _ : state) benchmark::DoNotOptimize(gmm_fit(x, p).model.log_likelihood);
}
BENCHMARK(BM_Gmm)->Arg(1000)->Arg(4400);

static void BM_Silhouette(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix x = blobs(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % 3);
    for (auto _ : state) benchmark::DoNotOptimize(silhouette(x, labels).mean_score);
}
BENCHMARK(BM_Silhouette)->Arg(1000)->Arg(4400);

static void BM_Dbscan(benchmark::State& state) {
    const Matrix x = blobs(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(dbscan_fit(x, {0.03, 5}).n_clusters);
}
BENCHMARK(BM_Dbscan)->Arg(1000)->Arg(4400)->Arg(40000);

static void BM_Birch(benchmark::State& state) {
    const Matrix x = blobs(static_cast<std::size_t>(state.range(0)));
    BirchParams p;
    for (auto _ : state) benchmark::DoNotOptimize(birch_fit(x, p).result.n_clusters);
}
BENCHMARK(BM_Birch)->Arg(4400)->Arg(40000);

static void BM_AgglomerativeWard(benchmark::State& state) {
    const Matrix x = blobs(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(agglomerative_fit(x, 3, Linkage::Ward).result.n_clusters);
}
BENCHMARK(BM_AgglomerativeWard)->Arg(1000)->Arg(4400);

static void BM_Jacobi(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    Rng rng(3);
    Matrix c(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) c(i, j) = c(j, i) = rng.uniform();
    for (auto _ : state) benchmark::DoNotOptimize(eigen_symmetric(c).values.front());
}
BENCHMARK(BM_Jacobi)->Arg(2)->Arg(8)->Arg(32);
BENCHMARK_MAIN();
