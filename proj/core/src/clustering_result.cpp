#include "rfmseg/clustering_result.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace rfmseg {

std::size_t ClusteringResult::noise_count() const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kNoise));
}

std::vector<std::size_t> ClusteringResult::cluster_sizes() const {
    std::vector<std::size_t> sizes(n_clusters, 0);
    for (int l : labels)
        if (l >= 0 && static_cast<std::size_t>(l) < n_clusters) ++sizes[static_cast<std::size_t>(l)];
    return sizes;
}

void check_label_invariants(const ClusteringResult& r, bool allow_noise) {
    std::vector<bool> used(r.n_clusters, false);
    for (int l : r.labels) {
        if (l == kNoise) {
            if (!allow_noise) throw std::logic_error("noise label in a result that does not allow noise");
            continue;
        }
        if (l < 0 || static_cast<std::size_t>(l) >= r.n_clusters) throw std::logic_error("label out of range");
        used[static_cast<std::size_t>(l)] = true;
    }
    if (std::find(used.begin(), used.end(), false) != used.end()) throw std::logic_error("unused cluster id");
}

std::size_t compact_labels(std::span<int> labels) {
    std::map<int, int> remap;
    for (int l : labels)
        if (l != kNoise) remap.emplace(l, 0);
    int next = 0;
    for (auto& [_, v] : remap) v = next++;
    for (int& l : labels)
        if (l != kNoise) l = remap[l];
    return remap.size();
}

bool same_partition(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) return false;
    std::map<int, int> ab, ba;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((a[i] == kNoise) != (b[i] == kNoise)) return false;
        if (a[i] == kNoise) continue;
        const auto it1 = ab.emplace(a[i], b[i]).first;
        const auto it2 = ba.emplace(b[i], a[i]).first;
        if (it1->second != b[i] || it2->second != a[i]) return false;
    }
    return true;
}

}  // namespace rfmseg
