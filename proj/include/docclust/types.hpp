#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

namespace docclust {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowMatrixF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Strategy { mean, hybrid, cls, pca };

std::string_view to_string(Strategy s);
Strategy strategy_from_string(std::string_view name);

// Fixed-size document embedding produced by a projection strategy.
struct DocVector {
    std::string doc_id;
    Vector vector;
    Strategy strategy = Strategy::mean;
};

// Stacks vectors into an n x d row matrix. All vectors must share a dimension.
Matrix stack_rows(const std::vector<DocVector>& vectors);

}  // namespace docclust
