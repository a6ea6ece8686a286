#include "docclust/distance.hpp"

#include "docclust/parallel.hpp"

namespace docclust {

Matrix pairwise_distances(const Matrix& data, unsigned threads) {
    const Eigen::Index n = data.rows();
    Matrix dist = Matrix::Zero(n, n);
    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
        const auto ii = static_cast<Eigen::Index>(i);
        for (Eigen::Index j = ii + 1; j < n; ++j) dist(ii, j) = euclidean(data, ii, j);
    });
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) dist(j, i) = dist(i, j);
    return dist;
}

}  // namespace docclust
