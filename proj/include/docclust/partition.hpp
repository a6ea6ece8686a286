#pragma once

#include <string_view>
#include <vector>

namespace docclust {

enum class Algorithm { kmeans, dbscan, hdbscan, hdbscan_knn, birch, consolidated };

std::string_view to_string(Algorithm a);
Algorithm algorithm_from_string(std::string_view name);

inline constexpr int kNoise = -1;

// Cluster label per item. Noise is kNoise; clusters are numbered 0..C-1 and
// every id in that range is used at least once.
struct Partition {
    std::vector<int> labels;
    int n_clusters = 0;
    Algorithm algorithm = Algorithm::kmeans;

    std::size_t size() const { return labels.size(); }
    std::size_t noise_count() const;

    // Builds a partition from arbitrary non-negative ids (negative = noise),
    // renumbering clusters by first appearance.
    static Partition from_labels(std::vector<int> raw, Algorithm algorithm);

    // Throws DataError if the contiguity or usage invariant is broken.
    void validate() const;

    friend bool operator==(const Partition&, const Partition&) = default;
};

// True when a and b induce the same grouping (noise must match exactly).
bool same_up_to_renaming(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace docclust
