#pragma once

#include "docclust/types.hpp"

namespace docclust {

// Full n x n Euclidean distance matrix, computed from coordinate differences
// (no Gram-matrix shortcut), symmetric with an exact zero diagonal.
Matrix pairwise_distances(const Matrix& data, unsigned threads = 1);

inline double euclidean(const Matrix& data, Eigen::Index i, Eigen::Index j) {
    return (data.row(i) - data.row(j)).norm();
}

}  // namespace docclust
