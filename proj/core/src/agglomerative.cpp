#include "rfmseg/agglomerative.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rfmseg/error.hpp"

namespace rfmseg {

namespace {

// A merge between the clusters containing points p and q.
struct RawMerge {
    std::size_t p;
    std::size_t q;
    double dist;
};

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }
    std::size_t unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (b < a) std::swap(a, b);
        parent_[b] = a;
        return a;
    }

private:
    std::vector<std::size_t> parent_;
};

// Prim's algorithm; sorted MST edges are exactly the single-linkage merges.
std::vector<RawMerge> single_linkage_mst(const Matrix& x) {
    const std::size_t n = x.rows();
    std::vector<RawMerge> out;
    std::vector<bool> in_tree(n, false);
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> from(n, 0);
    std::size_t current = 0;
    in_tree[0] = true;
    for (std::size_t step = 1; step < n; ++step) {
        std::size_t next = n;
        for (std::size_t v = 0; v < n; ++v) {
            if (in_tree[v]) continue;
            const double d = distance(x.row(current), x.row(v));
            if (d < best[v]) {
                best[v] = d;
                from[v] = current;
            }
            if (next == n || best[v] < best[next]) next = v;
        }
        in_tree[next] = true;
        out.push_back({std::min(from[next], next), std::max(from[next], next), best[next]});
        current = next;
    }
    return out;
}

// Nearest-neighbour chain over abstract cluster slots. Slot s always holds
// the cluster containing point s; a merge keeps the smaller slot.
template <class Dist, class Merge>
std::vector<RawMerge> nn_chain(std::size_t n, Dist&& dist, Merge&& merge) {
    std::vector<RawMerge> out;
    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), 0);
    std::vector<std::size_t> chain;

    while (active.size() > 1) {
        if (chain.empty()) chain.push_back(*std::min_element(active.begin(), active.end()));
        for (;;) {
            const std::size_t c = chain.back();
            const std::size_t prev = chain.size() >= 2 ? chain[chain.size() - 2] : n;
            std::size_t nn = n;
            double best = std::numeric_limits<double>::infinity();
            if (prev != n) {
                nn = prev;
                best = dist(c, prev);
            }
            for (std::size_t j : active) {
                if (j == c || j == prev) continue;
                const double d = dist(c, j);
                if (d < best || (d == best && nn != prev && j < nn)) {
                    best = d;
                    nn = j;
                }
            }
            if (nn == prev) {
                chain.pop_back();
                chain.pop_back();
                const std::size_t keep = std::min(c, prev), drop = std::max(c, prev);
                out.push_back({keep, drop, best});
                merge(keep, drop, active);
                active.erase(std::find(active.begin(), active.end(), drop));
                break;
            }
            chain.push_back(nn);
        }
    }
    return out;
}

std::vector<RawMerge> ward_linkage(const Matrix& x) {
    const std::size_t n = x.rows(), d = x.cols();
    Matrix centroid = x;
    std::vector<double> size(n, 1.0);
    const auto dist = [&](std::size_t i, std::size_t j) {
        const double w = 2.0 * size[i] * size[j] / (size[i] + size[j]);
        return std::sqrt(w * squared_distance(centroid.row(i), centroid.row(j)));
    };
    const auto merge = [&](std::size_t keep, std::size_t drop, const std::vector<std::size_t>&) {
        const double total = size[keep] + size[drop];
        for (std::size_t k = 0; k < d; ++k) {
            centroid(keep, k) = (size[keep] * centroid(keep, k) + size[drop] * centroid(drop, k)) / total;
        }
        size[keep] = total;
    };
    return nn_chain(n, dist, merge);
}

std::vector<RawMerge> table_linkage(const Matrix& x, Linkage linkage, std::size_t max_table_bytes) {
    const std::size_t n = x.rows();
    const double entries = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    if (entries * sizeof(double) > static_cast<double>(max_table_bytes)) {
        throw AlgorithmError(to_string(linkage) + " linkage on " + std::to_string(n) +
                             " points needs a distance table larger than the configured limit");
    }
    std::vector<double> table(static_cast<std::size_t>(entries));
    const auto at = [n](std::size_t i, std::size_t j) {
        if (j < i) std::swap(i, j);
        return i * n - i * (i + 1) / 2 + (j - i - 1);
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) table[at(i, j)] = distance(x.row(i), x.row(j));

    std::vector<double> size(n, 1.0);
    const auto dist = [&](std::size_t i, std::size_t j) { return table[at(i, j)]; };
    const auto merge = [&](std::size_t keep, std::size_t drop, const std::vector<std::size_t>& active) {
        for (std::size_t k : active) {
            if (k == keep || k == drop) continue;
            const double dk = table[at(keep, k)], dd = table[at(drop, k)];
            table[at(keep, k)] = linkage == Linkage::Complete
                                     ? std::max(dk, dd)
                                     : (size[keep] * dk + size[drop] * dd) / (size[keep] + size[drop]);
        }
        size[keep] += size[drop];
    };
    return nn_chain(n, dist, merge);
}

}  // namespace

std::string to_string(Linkage l) {
    switch (l) {
        case Linkage::Single: return "single";
        case Linkage::Complete: return "complete";
        case Linkage::Average: return "average";
        case Linkage::Ward: break;
    }
    return "ward";
}

std::optional<Linkage> parse_linkage(std::string_view name) {
    for (Linkage l : {Linkage::Single, Linkage::Complete, Linkage::Average, Linkage::Ward})
        if (to_string(l) == name) return l;
    return std::nullopt;
}

std::vector<MergeStep> linkage_tree(const Matrix& x, Linkage linkage, std::size_t max_table_bytes) {
    const std::size_t n = x.rows();
    if (n == 0) throw std::invalid_argument("agglomerative clustering needs at least one point");
    if (n == 1) return {};

    std::vector<RawMerge> raw;
    switch (linkage) {
        case Linkage::Single: raw = single_linkage_mst(x); break;
        case Linkage::Ward: raw = ward_linkage(x); break;
        default: raw = table_linkage(x, linkage, max_table_bytes); break;
    }
    std::stable_sort(raw.begin(), raw.end(), [](const RawMerge& a, const RawMerge& b) { return a.dist < b.dist; });

    UnionFind uf(n);
    std::vector<std::size_t> id(n), size(n, 1);
    std::iota(id.begin(), id.end(), 0);
    std::vector<MergeStep> steps;
    steps.reserve(n - 1);
    for (const auto& m : raw) {
        const std::size_t rp = uf.find(m.p), rq = uf.find(m.q);
        const std::size_t a = id[rp], b = id[rq];
        const std::size_t merged_size = size[rp] + size[rq];
        const std::size_t root = uf.unite(rp, rq);
        steps.push_back({std::min(a, b), std::max(a, b), m.dist, merged_size});
        id[root] = n + steps.size() - 1;
        size[root] = merged_size;
    }
    return steps;
}

std::vector<int> cut_tree(std::size_t n, const std::vector<MergeStep>& tree, std::size_t n_clusters) {
    if (n_clusters < 1 || n_clusters > n) throw std::invalid_argument("cut_tree: n_clusters out of range");
    // member point of every cluster id
    std::vector<std::size_t> member(n + tree.size());
    std::iota(member.begin(), member.begin() + static_cast<std::ptrdiff_t>(n), 0);
    UnionFind uf(n);
    for (std::size_t s = 0; s < n - n_clusters; ++s) {
        const auto& m = tree[s];
        member[n + s] = uf.unite(member[m.a], member[m.b]);
    }
    std::vector<int> labels(n, -1);
    std::vector<int> root_label(n, -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = uf.find(i);
        if (root_label[r] < 0) root_label[r] = next++;
        labels[i] = root_label[r];
    }
    return labels;
}

AgglomerativeFit agglomerative_fit(const Matrix& x, std::size_t n_clusters, Linkage linkage, std::size_t max_table_bytes) {
    const std::size_t n = x.rows();
    if (n_clusters < 1 || n_clusters > n) {
        throw std::invalid_argument("agglomerative n_clusters = " + std::to_string(n_clusters) + " outside [1, " +
                                    std::to_string(n) + "]");
    }
    auto tree = linkage_tree(x, linkage, max_table_bytes);
    AgglomerativeFit fit;
    fit.result.labels = cut_tree(n, tree, n_clusters);
    fit.result.n_clusters = n_clusters;
    fit.result.iterations = n - n_clusters;
    tree.resize(n - n_clusters);
    fit.result.diagnostics["last_merge_distance"] = tree.empty() ? 0.0 : tree.back().distance;
    fit.merges = std::move(tree);
    return fit;
}

double linkage_distance(const Matrix& x, std::span<const std::size_t> a, std::span<const std::size_t> b, Linkage linkage) {
    if (a.empty() || b.empty()) throw std::invalid_argument("linkage_distance needs two non-empty groups");
    if (linkage == Linkage::Ward) {
        std::vector<double> ca(x.cols(), 0.0), cb(x.cols(), 0.0);
        for (auto i : a)
            for (std::size_t c = 0; c < x.cols(); ++c) ca[c] += x(i, c);
        for (auto i : b)
            for (std::size_t c = 0; c < x.cols(); ++c) cb[c] += x(i, c);
        const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
        for (std::size_t c = 0; c < x.cols(); ++c) {
            ca[c] /= na;
            cb[c] /= nb;
        }
        return std::sqrt(2.0 * na * nb / (na + nb)) * distance(ca, cb);
    }
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
    for (auto i : a)
        for (auto j : b) {
            const double d = distance(x.row(i), x.row(j));
            lo = std::min(lo, d);
            hi = std::max(hi, d);
            sum += d;
        }
    switch (linkage) {
        case Linkage::Single: return lo;
        case Linkage::Complete: return hi;
        default: return sum / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
    }
}

}  // namespace rfmseg
