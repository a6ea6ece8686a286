#pragma once

#include "docclust/partition.hpp"
#include "docclust/types.hpp"

namespace docclust {

struct DbscanConfig {
    double eps = 0.5;
    // Neighbour count threshold for a core point; the point itself counts.
    int min_pts = 5;
};

// Core points are those with at least min_pts points (self included) within
// distance <= eps. Clusters are connected components of core points under
// eps-adjacency. A border point joins the cluster of its lowest-index core
// neighbour. Everything else is noise. Cluster ids follow the lowest core
// index of each component.
Partition dbscan(const Matrix& data, const DbscanConfig& cfg);

}  // namespace docclust
