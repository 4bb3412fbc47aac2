#include "rfmseg/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "rfmseg/clustering_result.hpp"

namespace rfmseg {

SilhouetteReport silhouette(const Matrix& x, std::span<const int> labels, NoisePolicy noise) {
    if (labels.size() != x.rows()) throw std::invalid_argument("silhouette: label count does not match rows");

    SilhouetteReport rep;
    std::map<int, std::size_t> dense;
    std::vector<std::size_t> cluster_of;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == kNoise && noise == NoisePolicy::Exclude) {
            ++rep.excluded_noise;
            continue;
        }
        if (labels[i] < 0 && labels[i] != kNoise) throw std::invalid_argument("silhouette: negative label");
        rep.point_index.push_back(i);
        dense.emplace(labels[i], 0);
    }
    if (rep.point_index.empty()) throw std::invalid_argument("silhouette: no clustered points");
    std::size_t k = 0;
    for (auto& [_, id] : dense) id = k++;
    if (k < 2) throw std::invalid_argument("silhouette needs at least two clusters, found " + std::to_string(k));
    rep.n_clusters = k;

    const std::size_t m = rep.point_index.size();
    cluster_of.resize(m);
    std::vector<std::size_t> size(k, 0);
    for (std::size_t a = 0; a < m; ++a) {
        cluster_of[a] = dense[labels[rep.point_index[a]]];
        ++size[cluster_of[a]];
    }

    // sums(a, c): total distance from point a to members of cluster c
    Matrix sums(m, k);
    for (std::size_t a = 0; a < m; ++a) {
        const auto xa = x.row(rep.point_index[a]);
        for (std::size_t b = a + 1; b < m; ++b) {
            const double d = distance(xa, x.row(rep.point_index[b]));
            sums(a, cluster_of[b]) += d;
            sums(b, cluster_of[a]) += d;
        }
    }

    rep.per_point.resize(m);
    rep.per_point_a.resize(m);
    rep.per_point_b.resize(m);
    double total = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
        const std::size_t own = cluster_of[a];
        const double ai = size[own] > 1 ? sums(a, own) / static_cast<double>(size[own] - 1) : 0.0;
        double bi = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c)
            if (c != own) bi = std::min(bi, sums(a, c) / static_cast<double>(size[c]));
        const double denom = std::max(ai, bi);
        const double s = (size[own] > 1 && denom > 0.0) ? (bi - ai) / denom : 0.0;
        rep.per_point_a[a] = ai;
        rep.per_point_b[a] = bi;
        rep.per_point[a] = s;
        total += s;
    }
    rep.mean_score = total / static_cast<double>(m);
    return rep;
}

std::size_t knee_point(std::span<const std::size_t> k_values, std::span<const double> inertias) {
    if (k_values.size() != inertias.size()) throw std::invalid_argument("knee_point: length mismatch");
    if (k_values.size() < 3) throw std::invalid_argument("knee_point needs at least three points");
    std::size_t best = 1;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < inertias.size(); ++i) {
        const double second = inertias[i - 1] - 2.0 * inertias[i] + inertias[i + 1];
        if (second > best_value) {
            best_value = second;
            best = i;
        }
    }
    return k_values[best];
}

InertiaCurve inertia_curve(const Matrix& x, std::span<const std::size_t> k_range, std::size_t seeds, std::uint64_t seed0,
                           KMeansInit init) {
    if (k_range.empty()) throw std::invalid_argument("inertia_curve needs a non-empty k range");
    if (seeds < 1) throw std::invalid_argument("inertia_curve needs at least one seed");
    InertiaCurve curve;
    for (std::size_t k : k_range) {
        double best = std::numeric_limits<double>::infinity();
        std::uint64_t best_seed = seed0;
        for (std::size_t s = 0; s < seeds; ++s) {
            KMeansParams p;
            p.k = k;
            p.init = init;
            p.seed = seed0 + s;
            const double inertia = kmeans_fit(x, p).model.inertia;
            if (inertia < best) {
                best = inertia;
                best_seed = p.seed;
            }
        }
        curve.k_values.push_back(k);
        curve.inertias.push_back(best);
        curve.best_seeds.push_back(best_seed);
    }
    if (curve.k_values.size() >= 3) curve.chosen_k = knee_point(curve);
    return curve;
}

std::vector<double> k_distance(const Matrix& x, std::size_t k) {
    const std::size_t n = x.rows();
    if (k < 1 || k >= n) {
        throw std::invalid_argument("k_distance needs 1 <= k < n (k = " + std::to_string(k) + ", n = " + std::to_string(n) + ")");
    }
    std::vector<double> out(n), d(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t w = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) d[w++] = squared_distance(x.row(i), x.row(j));
        std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k - 1), d.end());
        out[i] = std::sqrt(d[k - 1]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace rfmseg
