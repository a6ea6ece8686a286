#pragma once

#include "docclust/types.hpp"

#include <vector>

namespace docclust {

// Majority vote among the k nearest training rows (Euclidean, ties in distance
// broken by lower training index). A tied vote goes to the label whose
// nearest representative is closest to the query.
std::vector<int> knn_classify(const Matrix& train, const std::vector<int>& train_labels, const Matrix& query,
                              int k);

}  // namespace docclust
