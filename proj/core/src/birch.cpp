#include "rfmseg/birch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rfmseg {

ClusterFeature ClusterFeature::of_point(std::span<const double> x) {
    ClusterFeature cf;
    cf.n = 1;
    cf.ls.assign(x.begin(), x.end());
    for (double v : x) cf.ss += v * v;
    return cf;
}

void ClusterFeature::merge(const ClusterFeature& other) {
    if (n == 0) {
        *this = other;
        return;
    }
    if (other.n == 0) return;
    if (ls.size() != other.ls.size()) throw std::invalid_argument("clustering features of different dimension");
    n += other.n;
    for (std::size_t i = 0; i < ls.size(); ++i) ls[i] += other.ls[i];
    ss += other.ss;
}

std::vector<double> ClusterFeature::centroid() const {
    std::vector<double> c(ls);
    for (double& v : c) v /= static_cast<double>(n);
    return c;
}

double ClusterFeature::radius_squared() const {
    const double nn = static_cast<double>(n);
    double centroid_norm2 = 0.0;
    for (double v : ls) centroid_norm2 += (v / nn) * (v / nn);
    return ss / nn - centroid_norm2;
}

double ClusterFeature::radius() const { return std::sqrt(std::max(0.0, radius_squared())); }

double centroid_distance(const ClusterFeature& a, const ClusterFeature& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.ls.size(); ++i) {
        const double d = a.ls[i] / static_cast<double>(a.n) - b.ls[i] / static_cast<double>(b.n);
        s += d * d;
    }
    return std::sqrt(s);
}

struct CFTree::Entry {
    ClusterFeature cf;
    std::unique_ptr<Node> child;
    std::size_t id = 0;
};

struct CFTree::Node {
    bool leaf = true;
    std::vector<Entry> entries;
};

struct CFTree::Split {
    Entry first;
    Entry second;
};

CFTree::CFTree(double threshold, std::size_t branching)
    : threshold_(threshold), branching_(branching), root_(std::make_unique<Node>()) {
    if (!(threshold > 0.0)) throw std::invalid_argument("BIRCH threshold must be positive");
    if (branching < 2) throw std::invalid_argument("BIRCH branching factor must be at least 2");
}

CFTree::~CFTree() = default;
CFTree::CFTree(CFTree&&) noexcept = default;
CFTree& CFTree::operator=(CFTree&&) noexcept = default;

std::size_t CFTree::insert(std::span<const double> point) {
    const ClusterFeature cf = ClusterFeature::of_point(point);
    std::size_t entry_id = 0;
    if (auto s = insert_into(*root_, cf, entry_id)) {
        auto root = std::make_unique<Node>();
        root->leaf = false;
        root->entries.push_back(std::move(s->first));
        root->entries.push_back(std::move(s->second));
        root_ = std::move(root);
    }
    return entry_id;
}

std::unique_ptr<CFTree::Split> CFTree::insert_into(Node& node, const ClusterFeature& point, std::size_t& entry_id) {
    std::size_t closest = node.entries.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < node.entries.size(); ++i) {
        const double d = centroid_distance(node.entries[i].cf, point);
        if (d < best) {
            best = d;
            closest = i;
        }
    }

    if (node.leaf) {
        if (closest < node.entries.size() && merged(node.entries[closest].cf, point).radius() <= threshold_) {
            node.entries[closest].cf.merge(point);
            entry_id = node.entries[closest].id;
            return nullptr;
        }
        entry_id = entry_count_++;
        node.entries.push_back(Entry{point, nullptr, entry_id});
        return node.entries.size() > branching_ ? split(node) : nullptr;
    }

    Entry& target = node.entries[closest];
    auto child_split = insert_into(*target.child, point, entry_id);
    if (!child_split) {
        target.cf.merge(point);
        return nullptr;
    }
    node.entries[closest] = std::move(child_split->first);
    node.entries.insert(node.entries.begin() + static_cast<std::ptrdiff_t>(closest) + 1, std::move(child_split->second));
    return node.entries.size() > branching_ ? split(node) : nullptr;
}

std::unique_ptr<CFTree::Split> CFTree::split(Node& node) {
    auto& entries = node.entries;
    std::size_t seed_a = 0, seed_b = 1;
    double farthest = -1.0;
    for (std::size_t i = 0; i < entries.size(); ++i)
        for (std::size_t j = i + 1; j < entries.size(); ++j) {
            const double d = centroid_distance(entries[i].cf, entries[j].cf);
            if (d > farthest) {
                farthest = d;
                seed_a = i;
                seed_b = j;
            }
        }

    auto left = std::make_unique<Node>();
    auto right = std::make_unique<Node>();
    left->leaf = right->leaf = node.leaf;
    // copies: the seed entries are moved out during the loop
    const ClusterFeature seed_a_cf = entries[seed_a].cf, seed_b_cf = entries[seed_b].cf;
    ClusterFeature left_cf, right_cf;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        bool to_left;
        if (i == seed_a) {
            to_left = true;
        } else if (i == seed_b) {
            to_left = false;
        } else {
            to_left = centroid_distance(entries[i].cf, seed_a_cf) <= centroid_distance(entries[i].cf, seed_b_cf);
        }
        (to_left ? left_cf : right_cf).merge(entries[i].cf);
        (to_left ? left : right)->entries.push_back(std::move(entries[i]));
    }
    entries.clear();
    auto s = std::make_unique<Split>();
    s->first = Entry{std::move(left_cf), std::move(left), 0};
    s->second = Entry{std::move(right_cf), std::move(right), 0};
    return s;
}

std::vector<ClusterFeature> CFTree::leaf_entries() const {
    std::vector<ClusterFeature> out(entry_count_);
    std::vector<const Node*> stack{root_.get()};
    while (!stack.empty()) {
        const Node* node = stack.back();
        stack.pop_back();
        for (const auto& e : node->entries) {
            if (node->leaf) {
                out[e.id] = e.cf;
            } else {
                stack.push_back(e.child.get());
            }
        }
    }
    return out;
}

std::size_t CFTree::height() const {
    std::size_t h = 1;
    for (const Node* node = root_.get(); !node->leaf; node = node->entries.front().child.get()) ++h;
    return h;
}

std::size_t CFTree::node_count() const {
    std::size_t count = 0;
    std::vector<const Node*> stack{root_.get()};
    while (!stack.empty()) {
        const Node* node = stack.back();
        stack.pop_back();
        ++count;
        if (!node->leaf)
            for (const auto& e : node->entries) stack.push_back(e.child.get());
    }
    return count;
}

void BirchParams::validate() const {
    if (!(threshold > 0.0) || !std::isfinite(threshold)) throw std::invalid_argument("BIRCH threshold must be positive");
    if (branching < 2) throw std::invalid_argument("BIRCH branching factor must be at least 2");
    if (n_clusters < 1) throw std::invalid_argument("BIRCH n_clusters must be at least 1");
}

BirchFit birch_fit(const Matrix& x, const BirchParams& params) {
    params.validate();
    if (x.rows() == 0) throw std::invalid_argument("BIRCH needs at least one point");

    CFTree tree(params.threshold, params.branching);
    std::vector<std::size_t> entry_of(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) entry_of[i] = tree.insert(x.row(i));

    BirchFit fit;
    fit.leaf_entries = tree.leaf_entries();
    const std::size_t m = fit.leaf_entries.size();

    if (m <= params.n_clusters) {
        fit.entry_labels.resize(m);
        for (std::size_t e = 0; e < m; ++e) fit.entry_labels[e] = static_cast<int>(e);
        fit.result.n_clusters = m;
    } else {
        Matrix centroids(m, x.cols());
        for (std::size_t e = 0; e < m; ++e) {
            const auto c = fit.leaf_entries[e].centroid();
            std::copy(c.begin(), c.end(), centroids.row(e).begin());
        }
        auto global = agglomerative_fit(centroids, params.n_clusters, Linkage::Average);
        fit.entry_labels = std::move(global.result.labels);
        fit.global_merges = std::move(global.merges);
        fit.result.n_clusters = params.n_clusters;
    }

    fit.result.labels.resize(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) fit.result.labels[i] = fit.entry_labels[entry_of[i]];
    fit.result.iterations = 1;
    fit.result.diagnostics["leaf_entries"] = static_cast<double>(m);
    fit.result.diagnostics["tree_height"] = static_cast<double>(tree.height());
    fit.result.diagnostics["tree_nodes"] = static_cast<double>(tree.node_count());
    return fit;
}

}  // namespace rfmseg
