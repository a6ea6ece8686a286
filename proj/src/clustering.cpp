#include "docclust/clustering.hpp"

#include "docclust/error.hpp"

namespace docclust {

ClusterConfig ClusterConfig::reseeded(std::uint64_t seed) const {
    ClusterConfig out = *this;
    out.kmeans.seed = seed;
    out.birch.seed = seed;
    return out;
}

Partition run_clustering(const Matrix& data, const ClusterConfig& cfg) {
    switch (cfg.algorithm) {
        case Algorithm::kmeans: return kmeans(data, cfg.kmeans);
        case Algorithm::dbscan: return dbscan(data, cfg.dbscan);
        case Algorithm::hdbscan: return hdbscan(data, cfg.hdbscan);
        case Algorithm::hdbscan_knn: return hdbscan_knn(data, cfg.hdbscan);
        case Algorithm::birch: return birch(data, cfg.birch);
        case Algorithm::consolidated: break;
    }
    throw ConfigError("run_clustering: algorithm is not runnable");
}

}  // namespace docclust
