#pragma once

#include "docclust/partition.hpp"
#include "docclust/types.hpp"

#include <vector>

namespace docclust {

struct HdbscanConfig {
    int min_cluster_size = 5;
    // Neighbourhood size for core distances; the point itself counts.
    int min_samples = 5;
    // Neighbours consulted when noise points are reassigned (hdbscan_knn).
    int knn_k = 5;
};

struct MstEdge {
    Eigen::Index a = 0;
    Eigen::Index b = 0;
    double weight = 0.0;
};

// Distance from each point to its min_samples-th nearest point, counting the
// point itself as the first.
Vector core_distances(const Matrix& dist, int min_samples);

// max(core(a), core(b), d(a, b)) off the diagonal, 0 on it.
Matrix mutual_reachability(const Matrix& dist, const Vector& core);

// Prim's algorithm on the dense mutual-reachability graph.
std::vector<MstEdge> mutual_reachability_mst(const Matrix& data, int min_samples);

// One node of the condensed cluster tree. Cluster 0 is the root; children
// always carry larger ids than their parent.
struct CondensedCluster {
    int parent = -1;
    double birth_lambda = 0.0;
    double stability = 0.0;
    Eigen::Index size = 0;
    std::vector<int> children;
    bool selected = false;
};

struct HdbscanResult {
    Partition partition;
    std::vector<MstEdge> mst;
    std::vector<CondensedCluster> tree;
};

// Core distances -> mutual reachability -> MST -> single-linkage dendrogram
// -> condensed tree at min_cluster_size -> excess-of-mass selection. The root
// may only be selected when the hierarchy never splits into two clusters of
// at least min_cluster_size points; min_cluster_size > n yields all noise.
HdbscanResult hdbscan_fit(const Matrix& data, const HdbscanConfig& cfg);

Partition hdbscan(const Matrix& data, const HdbscanConfig& cfg);

// HDBSCAN, then a k-NN vote (k = cfg.knn_k, capped at the number of labelled
// points) trained on the non-noise points relabels every noise point.
// Non-noise labels are untouched. Throws AllNoiseError if HDBSCAN finds no
// cluster.
Partition hdbscan_knn(const Matrix& data, const HdbscanConfig& cfg);

}  // namespace docclust
