#include "docclust/knn.hpp"

#include "docclust/error.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

namespace docclust {

std::vector<int> knn_classify(const Matrix& train, const std::vector<int>& train_labels, const Matrix& query,
                              int k) {
    const Eigen::Index n = train.rows();
    if (n == 0) throw DataError("knn_classify: empty training set");
    if (static_cast<std::size_t>(n) != train_labels.size())
        throw DataError("knn_classify: label count does not match training rows");
    if (k < 1 || k > n)
        throw ConfigError("knn_classify: k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    if (query.rows() > 0 && query.cols() != train.cols()) throw DataError("knn_classify: dimension mismatch");

    std::vector<int> out(static_cast<std::size_t>(query.rows()));
    std::vector<std::pair<double, Eigen::Index>> order(static_cast<std::size_t>(n));
    for (Eigen::Index q = 0; q < query.rows(); ++q) {
        for (Eigen::Index i = 0; i < n; ++i)
            order[static_cast<std::size_t>(i)] = {(train.row(i) - query.row(q)).norm(), i};
        std::partial_sort(order.begin(), order.begin() + k, order.end());

        // (label, votes) in order of first appearance among the neighbours.
        std::vector<std::pair<int, int>> votes;
        for (int j = 0; j < k; ++j) {
            const int label = train_labels[static_cast<std::size_t>(order[static_cast<std::size_t>(j)].second)];
            auto it = std::find_if(votes.begin(), votes.end(), [&](const auto& v) { return v.first == label; });
            if (it == votes.end())
                votes.emplace_back(label, 1);
            else
                ++it->second;
        }
        auto best = votes.begin();
        for (auto it = votes.begin(); it != votes.end(); ++it)
            if (it->second > best->second) best = it;
        out[static_cast<std::size_t>(q)] = best->first;
    }
    return out;
}

}  // namespace docclust
