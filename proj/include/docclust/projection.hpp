#pragma once

#include "docclust/embx.hpp"
#include "docclust/types.hpp"

#include <vector>

namespace docclust::projection {

// Max-pool window along the feature axis. Windows are non-overlapping with
// stride == kernel, so kernel must divide the hidden size exactly.
struct HybridConfig {
    int kernel = 8;
};

// Largest default kernel: 8 when it divides dim, else the largest divisor <= 8.
int default_kernel(Eigen::Index dim);

// Row mean over the whole sequence.
DocVector mean_pool(const embx::TokenEmbeddings& te);

// [text-row mean ; mean over image rows of per-window maxima]. Output size is
// D + D / kernel. Throws ConfigError if kernel does not divide D and DataError
// if either modality span is empty.
DocVector hybrid_pool(const embx::TokenEmbeddings& te, const HybridConfig& cfg);

// First row (the sequence-initial token).
DocVector cls_pool(const embx::TokenEmbeddings& te);

// Projects mean-centered vectors onto the top target_dim principal axes. Axes
// come from a full SVD of the centered matrix; each axis is signed so that its
// largest-magnitude loading is positive. Throws ConfigError if target_dim
// exceeds min(n, d) and DataError if fewer than target_dim singular values are
// nonzero.
std::vector<DocVector> pca_reduce(const std::vector<DocVector>& vectors, int target_dim);

// Principal axes (d x target_dim) and mean used by pca_reduce.
struct PcaModel {
    Vector mean;
    Matrix axes;
    Vector singular_values;
};
PcaModel fit_pca(const Matrix& data, int target_dim);

}  // namespace docclust::projection
