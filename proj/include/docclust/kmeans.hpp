#pragma once

#include "docclust/partition.hpp"
#include "docclust/types.hpp"

#include <cstdint>
#include <vector>

namespace docclust {

struct KMeansConfig {
    int k = 8;
    int max_iter = 300;
    std::uint64_t seed = 0;
    // Stop once no centroid moves farther than this (Euclidean).
    double tol = 0.0;
};

struct KMeansResult {
    Partition partition;
    Matrix centroids;  // k x d
    double inertia = 0.0;
    // Inertia after every assignment step; non-increasing.
    std::vector<double> inertia_history;
    int iterations = 0;
};

// Greedy k-means++ seeding: every step draws 2 + floor(ln k) D^2-weighted
// candidates and keeps the one that minimizes the resulting potential.
Matrix greedy_kmeanspp(const Matrix& data, int k, std::uint64_t seed);

// Lloyd iterations from greedy k-means++ seeds. Always returns exactly k
// non-empty clusters: an empty cluster takes the point farthest from its own
// centroid (among clusters with more than one member).
KMeansResult kmeans_fit(const Matrix& data, const KMeansConfig& cfg);

Partition kmeans(const Matrix& data, const KMeansConfig& cfg);

}  // namespace docclust
