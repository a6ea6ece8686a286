#pragma once

#include "docclust/clustering.hpp"
#include "docclust/partition.hpp"
#include "docclust/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace docclust::consolidation {

struct Constraint {
    Eigen::Index i = 0;
    Eigen::Index j = 0;
    double weight = 1.0;
};

// Soft pairwise hints. Pairs never repeat across the two lists.
struct ConstraintSet {
    std::vector<Constraint> must_links;
    std::vector<Constraint> cannot_links;

    // Throws DataError on out-of-range or self pairs, non-positive weights, or
    // a pair listed as both must-link and cannot-link.
    void validate(std::size_t n) const;
};

// Sum of violated must-link weights (endpoints in different clusters, noise
// included) plus violated cannot-link weights (endpoints in the same cluster).
double constraint_penalty(const std::vector<int>& labels, const ConstraintSet& cons);

// Old cluster id -> new cluster id, onto 0..n_new-1.
struct MergeMap {
    std::vector<int> mapping;
    int n_new = 0;

    static MergeMap identity(int n_clusters);
    // Noise stays noise.
    Partition apply(const Partition& part) const;
};

struct ConstraintResult {
    Partition partition;
    MergeMap merge_map;
    double penalty_before = 0.0;
    double penalty_after = 0.0;
};

// Greedy merge-only search: repeatedly applies the single whole-cluster merge
// with the largest penalty decrease (ties to the lowest cluster pair) until no
// merge strictly decreases the penalty. Clusters are never split.
ConstraintResult constraint_consolidate(const Partition& part, const ConstraintSet& cons);

struct SeedConfig {
    int budget = 1;
    // Added to the cost of every seed other than the one of the point's own
    // cluster. May be +infinity.
    double inertia = 0.0;
    // Re-run the pass once against member means instead of medoids.
    bool update_prototypes = false;
};

// Seeds are the medoids of the `budget` largest clusters. Every other point
// moves to the cheapest seed whose already-assigned members include none of
// its cannot-link partners; if no seed is feasible the cheapest is used.
// Points are visited in index order. Returns exactly `budget` clusters, with
// cluster j owned by the j-th largest input cluster.
Partition prototype_seed(const Matrix& data, const Partition& part, const SeedConfig& cfg,
                         const std::optional<ConstraintSet>& cons = std::nullopt);

// Index of the point minimizing the summed distance to the other members.
Eigen::Index medoid(const Matrix& data, const std::vector<Eigen::Index>& members);

struct GmmFit {
    Matrix means;     // m x d
    Vector weights;   // m
    double variance = 0.0;
    double log_likelihood = 0.0;
    std::vector<int> assignment;  // most responsible component per point
};

// EM for an m-component Gaussian mixture with one shared spherical variance
// (floored at `variance_floor`). `restarts` seeded k-means++ initializations;
// the highest likelihood wins.
GmmFit fit_spherical_gmm(const Matrix& points, int m, double variance_floor, int restarts, std::uint64_t seed);

// -2 log L + p ln(C) with p = m d + (m - 1) + 1.
double bic(const GmmFit& fit, Eigen::Index n_points);

struct AgglomerateConfig {
    int restarts = 5;
    std::uint64_t seed = 0;
};

struct AgglomerateResult {
    Partition partition;
    MergeMap merge_map;
    std::vector<double> bic_curve;  // index m - 1
    int m_star = 0;
    double variance_floor = 0.0;
};

// Fits the mixture to the unweighted cluster centroids for m = 1..C and keeps
// the BIC minimizer; component membership of each centroid is the merge map.
// The shared variance is floored at the pooled within-cluster per-dimension
// variance of the data: centroids closer together than the clusters are wide
// are not told apart.
AgglomerateResult centroid_agglomerate(const Matrix& data, const Partition& part, const AgglomerateConfig& cfg = {});

// Pairwise co-clustering frequency over bootstrap runs. The denominator of
// each entry is the number of runs in which both points were sampled; pairs
// never co-sampled hold 0 and cosampled == 0.
struct CoAssociation {
    Matrix matrix;
    Eigen::MatrixXi cosampled;
    int runs = 0;
    std::vector<int> cluster_counts;  // per bootstrap run
};

struct StabilityConfig {
    int runs = 20;
    double subsample = 0.8;
    double tau_merge = 0.5;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

// Reclusters `runs` seeded subsamples with the base configuration (fresh seed
// per run) and accumulates co-association counts.
CoAssociation co_association(const Matrix& data, const ClusterConfig& base_cfg, const StabilityConfig& cfg);

// Merges base clusters whose between-cluster mean co-association reaches tau
// (transitively), then dissolves merged clusters whose within-cluster mean is
// below tau, moving their points to the nearest surviving centroid. If nothing
// survives, the merged partition is returned undissolved.
Partition merge_by_coassociation(const Matrix& data, const Partition& base, const CoAssociation& co, double tau);

struct StabilityResult {
    Partition partition;
    Partition base;
    CoAssociation co;
};

StabilityResult stability_merge(const Matrix& data, const ClusterConfig& base_cfg, const StabilityConfig& cfg);

struct SweepPoint {
    double tau = 0.0;
    int clusters = 0;
    std::optional<double> score;
};

struct AdaptiveKResult {
    Partition partition;
    int k_hat = 0;
    // Population standard deviation of the per-run cluster counts.
    double k_dispersion = 0.0;
    double tau = 0.0;
    std::vector<SweepPoint> sweep;
};

inline const std::vector<double> kDefaultTauSweep{0.5, 0.6, 0.7, 0.8, 0.9};

// Stability merge at every tau of the sweep, scored by the centroid-space
// (simplified) silhouette; undefined scores rank last and ties keep the lower
// tau.
AdaptiveKResult adaptive_k(const Matrix& data, const ClusterConfig& base_cfg, const StabilityConfig& cfg,
                           const std::vector<double>& taus = kDefaultTauSweep);

}  // namespace docclust::consolidation
