#include "rfmseg/dbscan.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace rfmseg {

namespace {

// Range queries over points sorted by their first coordinate; only the
// window |x0 - q0| <= eps needs an exact distance check.
class NeighbourIndex {
public:
    NeighbourIndex(const Matrix& x, double eps) : x_(x), eps_(eps), eps2_(eps * eps), order_(x.rows()), key_(x.rows()) {
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(), [&](auto a, auto b) { return x(a, 0) < x(b, 0); });
        for (std::size_t i = 0; i < order_.size(); ++i) key_[i] = x(order_[i], 0);
    }

    template <class F>
    void for_each_neighbour(std::size_t p, F&& f) const {
        const double lo = x_(p, 0) - eps_, hi = x_(p, 0) + eps_;
        auto it = std::lower_bound(key_.begin(), key_.end(), lo);
        for (auto i = static_cast<std::size_t>(it - key_.begin()); i < key_.size() && key_[i] <= hi; ++i) {
            const std::size_t q = order_[i];
            if (squared_distance(x_.row(p), x_.row(q)) <= eps2_) f(q);
        }
    }

private:
    const Matrix& x_;
    double eps_, eps2_;
    std::vector<std::size_t> order_;
    std::vector<double> key_;
};

}  // namespace

void DbscanParams::validate() const {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("DBSCAN eps must be positive");
    if (min_samples < 1) throw std::invalid_argument("DBSCAN min_samples must be at least 1");
}

ClusteringResult dbscan_fit(const Matrix& x, const DbscanParams& params) {
    params.validate();
    const std::size_t n = x.rows();
    ClusteringResult r;
    r.labels.assign(n, kNoise);
    if (n == 0) return r;

    const NeighbourIndex index(x, params.eps);
    std::vector<bool> core(n, false);
    for (std::size_t p = 0; p < n; ++p) {
        std::size_t count = 0;
        index.for_each_neighbour(p, [&](std::size_t) { ++count; });
        core[p] = count >= params.min_samples;
    }

    int next_id = 0;
    std::deque<std::size_t> frontier;
    for (std::size_t p = 0; p < n; ++p) {
        if (!core[p] || r.labels[p] != kNoise) continue;
        const int id = next_id++;
        r.labels[p] = id;
        frontier.push_back(p);
        while (!frontier.empty()) {
            const std::size_t q = frontier.front();
            frontier.pop_front();
            index.for_each_neighbour(q, [&](std::size_t s) {
                if (r.labels[s] != kNoise) return;
                r.labels[s] = id;
                if (core[s]) frontier.push_back(s);
            });
        }
    }
    r.n_clusters = static_cast<std::size_t>(next_id);
    r.iterations = 1;
    r.diagnostics["noise"] = static_cast<double>(r.noise_count());
    r.diagnostics["core_points"] = static_cast<double>(std::count(core.begin(), core.end(), true));
    return r;
}

double core_distance(const Matrix& x, std::size_t p, std::size_t min_samples) {
    if (min_samples < 1 || min_samples > x.rows()) throw std::invalid_argument("core_distance: min_samples out of range");
    if (min_samples == 1) return 0.0;
    std::vector<double> d(x.rows());
    for (std::size_t q = 0; q < x.rows(); ++q) d[q] = q == p ? 0.0 : distance(x.row(p), x.row(q));
    std::swap(d[0], d[p]);  // self first, so ties keep p as the first neighbour
    std::nth_element(d.begin() + 1, d.begin() + static_cast<std::ptrdiff_t>(min_samples - 1), d.end());
    return d[min_samples - 1];
}

double reachability_distance(const Matrix& x, std::size_t p, std::size_t q, std::size_t min_samples) {
    return std::max(core_distance(x, p, min_samples), distance(x.row(p), x.row(q)));
}

}  // namespace rfmseg
