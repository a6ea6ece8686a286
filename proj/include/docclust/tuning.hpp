#pragma once

#include "docclust/clustering.hpp"
#include "docclust/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace docclust::tuning {

struct Axis {
    std::string name;
    std::vector<double> values;
};

// Axis names: k, max_iter, eps, min_pts, min_cluster_size, min_samples,
// knn_k, threshold, branching, global_k.
struct GridSpec {
    Algorithm algorithm = Algorithm::dbscan;
    std::vector<Axis> axes;

    std::size_t trial_count() const;
};

struct Trial {
    std::vector<std::pair<std::string, double>> params;
    ClusterConfig config;
    std::optional<double> score;
    int pc = 0;
    double noise_pct = 0.0;
    // Set when the clustering itself failed on this grid point.
    std::optional<std::string> error;
};

struct TuneResult {
    ClusterConfig best_config;
    double best_score = 0.0;
    std::size_t best_index = 0;
    // Full grid in lexicographic order (first axis varies slowest).
    std::vector<Trial> trials;
};

// Writes one named grid value into the algorithm block of cfg.
void apply_param(ClusterConfig& cfg, const std::string& name, double value);

// Evaluates every grid point and scores it by silhouette. Undefined scores rank
// below every real score; ties keep the earliest grid point. Parameters not
// on an axis come from `base`. Grid points run concurrently on up to
// `threads` workers (0 = default) without affecting the result.
TuneResult grid_search(const Matrix& data, const GridSpec& spec, const ClusterConfig& base = {},
                       unsigned threads = 1);

// Percentile-anchored grids:
//   dbscan        eps = 10th..90th percentiles of 4-NN distances, min_pts {3,5,10,15}
//   hdbscan(-knn) min_cluster_size {5,10,15,25,50} within [2, n/2], min_samples {1,5,10}
//   birch         threshold = 10th..90th percentiles of 1000 sampled pair distances
// Needs n >= 10. Duplicate or non-positive percentile values are dropped.
GridSpec default_grid(Algorithm algorithm, const Matrix& data, std::uint64_t seed = 0);

// Linear-interpolation percentile (q in [0, 100]) of unsorted values.
double percentile(std::vector<double> values, double q);

// k-means with k = true_k, or BIRCH with the tuned threshold (running the
// default BIRCH grid when `tuned` is absent) and global_k = true_k.
Partition oracle_partition(const Matrix& data, Algorithm algorithm, int true_k,
                           const std::optional<TuneResult>& tuned = std::nullopt, std::uint64_t seed = 0,
                           unsigned threads = 1);

}  // namespace docclust::tuning
