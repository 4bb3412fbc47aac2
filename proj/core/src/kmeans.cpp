#include "rfmseg/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rfmseg/random.hpp"

namespace rfmseg {

namespace {

struct Assignment {
    std::vector<int> labels;
    std::vector<double> sq_dist;
};

Assignment assign(const Matrix& x, const Matrix& centroids) {
    const std::size_t n = x.rows(), k = centroids.rows();
    Assignment a{std::vector<int>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t c = 0; c < k; ++c) {
            const double d = squared_distance(x.row(i), centroids.row(c));
            if (d < best) {
                best = d;
                arg = c;
            }
        }
        a.labels[i] = static_cast<int>(arg);
        a.sq_dist[i] = best;
    }
    return a;
}

// Moves empty centroids onto the worst-served point until every cluster has
// a member. Terminates because each move zeroes one positive distance.
Assignment assign_nonempty(const Matrix& x, Matrix& centroids) {
    Assignment a = assign(x, centroids);
    const std::size_t k = centroids.rows();
    for (std::size_t guard = 0; guard <= k * x.rows(); ++guard) {
        std::vector<std::size_t> sizes(k, 0);
        for (int l : a.labels) ++sizes[static_cast<std::size_t>(l)];
        const auto empty = std::find(sizes.begin(), sizes.end(), 0);
        if (empty == sizes.end()) return a;
        // farthest point among clusters that can spare one
        std::size_t far = x.rows();
        for (std::size_t i = 0; i < x.rows(); ++i) {
            if (sizes[static_cast<std::size_t>(a.labels[i])] < 2) continue;
            if (far == x.rows() || a.sq_dist[i] > a.sq_dist[far]) far = i;
        }
        if (far == x.rows() || a.sq_dist[far] <= 0.0) break;
        const auto c = static_cast<std::size_t>(empty - sizes.begin());
        std::copy(x.row(far).begin(), x.row(far).end(), centroids.row(c).begin());
        a = assign(x, centroids);
    }
    throw std::logic_error("k-means could not fill an empty cluster");
}

Matrix init_plus_plus(const Matrix& x, std::size_t k, Rng& rng) {
    const std::size_t n = x.rows();
    Matrix centroids(k, x.cols());
    std::size_t first = rng.index(n);
    std::copy(x.row(first).begin(), x.row(first).end(), centroids.row(0).begin());

    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(x.row(i), centroids.row(0));
    for (std::size_t c = 1; c < k; ++c) {
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        if (!(total > 0.0)) throw std::invalid_argument("k-means++ ran out of distinct points");
        const double target = rng.uniform() * total;
        double acc = 0.0;
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (d2[i] <= 0.0) continue;
            pick = i;
            acc += d2[i];
            if (acc > target) break;
        }
        std::copy(x.row(pick).begin(), x.row(pick).end(), centroids.row(c).begin());
        for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(x.row(i), centroids.row(c)));
    }
    return centroids;
}

Matrix init_random(const Matrix& x, std::size_t k, Rng& rng) {
    std::vector<std::size_t> order(x.rows());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order.begin(), order.end());
    Matrix centroids(k, x.cols());
    std::size_t filled = 0;
    for (std::size_t i : order) {
        bool duplicate = false;
        for (std::size_t c = 0; c < filled && !duplicate; ++c) duplicate = squared_distance(x.row(i), centroids.row(c)) == 0.0;
        if (duplicate) continue;
        std::copy(x.row(i).begin(), x.row(i).end(), centroids.row(filled).begin());
        if (++filled == k) break;
    }
    return centroids;
}

Matrix means_of(const Matrix& x, std::span<const int> labels, std::size_t k, const Matrix& previous) {
    Matrix sums(k, x.cols());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        ++counts[c];
        for (std::size_t j = 0; j < x.cols(); ++j) sums(c, j) += x(i, j);
    }
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            sums(c, j) = counts[c] ? sums(c, j) / static_cast<double>(counts[c]) : previous(c, j);
        }
    }
    return sums;
}

}  // namespace

std::size_t count_distinct_rows(const Matrix& x) {
    std::vector<std::size_t> idx(x.rows());
    std::iota(idx.begin(), idx.end(), 0);
    const auto less = [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(x.row(a).begin(), x.row(a).end(), x.row(b).begin(), x.row(b).end());
    };
    std::sort(idx.begin(), idx.end(), less);
    std::size_t distinct = idx.empty() ? 0 : 1;
    for (std::size_t i = 1; i < idx.size(); ++i)
        if (less(idx[i - 1], idx[i])) ++distinct;
    return distinct;
}

double within_cluster_sum_of_squares(const Matrix& x, std::span<const int> labels, const Matrix& centroids) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) s += squared_distance(x.row(i), centroids.row(static_cast<std::size_t>(labels[i])));
    return s;
}

KMeansFit kmeans_fit(const Matrix& x, const KMeansParams& params) {
    if (x.rows() == 0 || x.cols() == 0) throw std::invalid_argument("k-means needs a non-empty matrix");
    if (params.k < 1) throw std::invalid_argument("k-means needs k >= 1");
    if (params.max_iter < 1) throw std::invalid_argument("k-means needs max_iter >= 1");
    const std::size_t distinct = count_distinct_rows(x);
    if (params.k > distinct) {
        throw std::invalid_argument("k-means k = " + std::to_string(params.k) + " exceeds the " + std::to_string(distinct) +
                                    " distinct rows");
    }

    Rng rng(params.seed);
    Matrix centroids =
        params.init == KMeansInit::KMeansPlusPlus ? init_plus_plus(x, params.k, rng) : init_random(x, params.k, rng);

    KMeansFit fit;
    Assignment current = assign_nonempty(x, centroids);
    fit.inertia_history.push_back(std::accumulate(current.sq_dist.begin(), current.sq_dist.end(), 0.0));

    std::size_t iterations = 0;
    while (iterations < params.max_iter) {
        ++iterations;
        Matrix updated = means_of(x, current.labels, params.k, centroids);
        double shift = 0.0;
        for (std::size_t c = 0; c < params.k; ++c) shift = std::max(shift, distance(updated.row(c), centroids.row(c)));
        centroids = std::move(updated);

        Assignment next = assign_nonempty(x, centroids);
        fit.inertia_history.push_back(std::accumulate(next.sq_dist.begin(), next.sq_dist.end(), 0.0));
        const bool stable = next.labels == current.labels;
        current = std::move(next);
        if (stable || shift < params.tol) break;
    }

    fit.model.centroids = std::move(centroids);
    fit.model.k = params.k;
    fit.model.n = x.rows();
    fit.model.inertia = within_cluster_sum_of_squares(x, current.labels, fit.model.centroids);

    fit.result.labels = std::move(current.labels);
    fit.result.n_clusters = params.k;
    fit.result.seed = params.seed;
    fit.result.iterations = iterations;
    fit.result.diagnostics["inertia"] = fit.model.inertia;
    return fit;
}

std::string to_string(KMeansInit init) { return init == KMeansInit::Random ? "random" : "kmeanspp"; }

}  // namespace rfmseg
