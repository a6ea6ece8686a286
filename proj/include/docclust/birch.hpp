#pragma once

#include "docclust/partition.hpp"
#include "docclust/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace docclust {

// BIRCH clustering feature: count, linear sum and squared-norm sum.
struct CFEntry {
    double n = 0.0;
    Vector ls;
    double ss = 0.0;

    static CFEntry of_point(const Eigen::Ref<const Vector>& x);
    Vector centroid() const { return ls / n; }
    // sqrt(ss / n - |ls / n|^2), clamped at zero.
    double radius() const;
};

CFEntry cf_merge(const CFEntry& a, const CFEntry& b);

struct BirchConfig {
    // Maximum leaf-entry radius after absorbing a point.
    double threshold = 0.5;
    // Maximum entries per node before it splits.
    int branching = 50;
    // When set, k-means over leaf centroids produces the final clusters.
    std::optional<int> global_k;
    std::uint64_t seed = 0;
};

struct BirchResult {
    Partition partition;
    std::vector<CFEntry> leaf_entries;
    // Leaf entry each point was absorbed into.
    std::vector<int> leaf_of_point;
};

// Single-pass CF-tree insertion. A point joins its closest leaf entry when the
// merged radius stays <= threshold; overflowing nodes split around their
// farthest pair of entries.
BirchResult birch_fit(const Matrix& data, const BirchConfig& cfg);

Partition birch(const Matrix& data, const BirchConfig& cfg);

}  // namespace docclust
