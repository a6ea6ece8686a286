#include "docclust/partition.hpp"

#include "docclust/error.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

namespace docclust {

std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::kmeans: return "kmeans";
        case Algorithm::dbscan: return "dbscan";
        case Algorithm::hdbscan: return "hdbscan";
        case Algorithm::hdbscan_knn: return "hdbscan-knn";
        case Algorithm::birch: return "birch";
        case Algorithm::consolidated: return "consolidated";
    }
    return "kmeans";
}

Algorithm algorithm_from_string(std::string_view name) {
    if (name == "kmeans") return Algorithm::kmeans;
    if (name == "dbscan") return Algorithm::dbscan;
    if (name == "hdbscan") return Algorithm::hdbscan;
    if (name == "hdbscan-knn" || name == "hdbscan_knn") return Algorithm::hdbscan_knn;
    if (name == "birch") return Algorithm::birch;
    if (name == "consolidated") return Algorithm::consolidated;
    throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

std::size_t Partition::noise_count() const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kNoise));
}

Partition Partition::from_labels(std::vector<int> raw, Algorithm algorithm) {
    std::unordered_map<int, int> remap;
    for (int& l : raw) {
        if (l < 0) {
            l = kNoise;
            continue;
        }
        auto [it, inserted] = remap.try_emplace(l, static_cast<int>(remap.size()));
        l = it->second;
    }
    return Partition{std::move(raw), static_cast<int>(remap.size()), algorithm};
}

void Partition::validate() const {
    std::vector<char> used(static_cast<std::size_t>(std::max(n_clusters, 0)), 0);
    for (int l : labels) {
        if (l == kNoise) continue;
        if (l < 0 || l >= n_clusters)
            throw DataError("partition label " + std::to_string(l) + " outside [0, " +
                            std::to_string(n_clusters) + ")");
        used[static_cast<std::size_t>(l)] = 1;
    }
    for (std::size_t c = 0; c < used.size(); ++c)
        if (!used[c]) throw DataError("partition cluster " + std::to_string(c) + " is empty");
}

bool same_up_to_renaming(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    std::unordered_map<int, int> fwd, back;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((a[i] < 0) != (b[i] < 0)) return false;
        if (a[i] < 0) continue;
        auto [f, fi] = fwd.try_emplace(a[i], b[i]);
        auto [g, gi] = back.try_emplace(b[i], a[i]);
        if (f->second != b[i] || g->second != a[i]) return false;
    }
    return true;
}

}  // namespace docclust
