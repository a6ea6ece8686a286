#pragma once

#include "docclust/birch.hpp"
#include "docclust/dbscan.hpp"
#include "docclust/hdbscan.hpp"
#include "docclust/kmeans.hpp"
#include "docclust/partition.hpp"

namespace docclust {

// One algorithm choice plus the parameters of every algorithm; only the
// block matching `algorithm` is read.
struct ClusterConfig {
    Algorithm algorithm = Algorithm::kmeans;
    KMeansConfig kmeans;
    DbscanConfig dbscan;
    HdbscanConfig hdbscan;
    BirchConfig birch;

    // Same parameters with every seed replaced by `seed`.
    ClusterConfig reseeded(std::uint64_t seed) const;
};

Partition run_clustering(const Matrix& data, const ClusterConfig& cfg);

}  // namespace docclust
