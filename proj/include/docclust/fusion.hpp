#pragma once

#include "docclust/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace docclust::fusion {

enum class FusionMode { convex, concat };

std::string_view to_string(FusionMode m);
FusionMode fusion_mode_from_string(std::string_view name);

struct FusionConfig {
    FusionMode mode = FusionMode::convex;
    double weight_floor = 0.0;  // minimum text weight
};

// Text weight for a given OCR confidence; null confidence is neutral (0.5).
double text_weight(std::optional<double> ocr_conf, const FusionConfig& cfg);

// Both views are L2-normalized first. Convex output is unit norm, concat is
// [w t ; (1-w) g].
Vector fuse(const Vector& text, const Vector& vision, std::optional<double> ocr_conf, const FusionConfig& cfg);

struct GroupStats {
    std::string key;
    Vector mean;
    Matrix covariance;
    Eigen::Index count = 0;
    bool degenerate = false;  // fewer than two members, covariance left at zero
};

// One entry per distinct key, ordered by key. Rows of `vectors` pair with `keys`.
std::vector<GroupStats> fit_group_stats(const Matrix& vectors, const std::vector<std::string>& keys);
GroupStats fit_stats(const Matrix& vectors, std::string key = {});

// Zero mean, identity covariance.
GroupStats identity_stats(Eigen::Index dim);

// 1e-3 * trace(C) / d, or a tiny positive value when C is zero.
double default_ridge(const Matrix& covariance);

// x' = (x - mu_s) (C_s + r_s I)^-1/2 (C_r + r_r I)^1/2 + mu_r. With no explicit
// ridge each covariance gets its own default_ridge.
Matrix coral_align(const Matrix& source, const GroupStats& src, const GroupStats& ref,
                   std::optional<double> ridge = std::nullopt);

// Symmetric matrix power via eigendecomposition, for power = 0.5 or -0.5.
// Throws DataError when the matrix is not positive definite.
Matrix symmetric_power(const Matrix& m, double power);

}  // namespace docclust::fusion
