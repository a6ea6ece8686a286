#pragma once

#include "docclust/partition.hpp"
#include "docclust/types.hpp"

#include <optional>
#include <vector>

namespace docclust::metrics {

// External scores are null when no ground truth was supplied; ss is null when
// fewer than two clusters remain after dropping noise.
struct EvalReport {
    std::optional<double> ari;
    std::optional<double> nmi;
    std::optional<double> hs;
    std::optional<double> cs;
    std::optional<double> ss;
    int pc = 0;
    double noise_pct = 0.0;
};

// External metrics treat noise (-1) as one more cluster. Entropies use the
// natural logarithm.
double adjusted_rand(const std::vector<int>& pred, const std::vector<int>& truth);

// Mutual information normalized by the arithmetic mean of the two entropies;
// 1 when both entropies are zero.
double normalized_mi(const std::vector<int>& pred, const std::vector<int>& truth);

struct HomogeneityCompleteness {
    double homogeneity = 1.0;
    double completeness = 1.0;
};
HomogeneityCompleteness homogeneity_completeness(const std::vector<int>& pred, const std::vector<int>& truth);

// Mean silhouette over non-noise points. A point alone in its cluster scores
// 0. Null when fewer than two clusters remain.
std::optional<double> silhouette(const Matrix& data, const std::vector<int>& labels, unsigned threads = 1);

// Per-point silhouette values (NaN for noise points).
Vector silhouette_samples(const Matrix& data, const std::vector<int>& labels, unsigned threads = 1);

// Silhouette with a and b measured to cluster centroids instead of averaged
// over members: a = |x - c_own|, b = min over other clusters |x - c_j|.
std::optional<double> simplified_silhouette(const Matrix& data, const std::vector<int>& labels);

EvalReport evaluate(const Matrix& data, const Partition& pred, const std::optional<std::vector<int>>& truth,
                    unsigned threads = 1);

}  // namespace docclust::metrics
