#include "docclust/kmeans.hpp"

#include "docclust/error.hpp"
#include "docclust/rng.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace docclust {

namespace {

Eigen::Index pick_weighted(const Vector& weights, double total, Rng& rng) {
    if (!(total > 0.0)) return static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(weights.size())));
    const double target = rng.uniform() * total;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        acc += weights(i);
        if (acc > target) return i;
    }
    // Rounding can leave target just above the accumulated sum.
    for (Eigen::Index i = weights.size() - 1; i >= 0; --i)
        if (weights(i) > 0.0) return i;
    return weights.size() - 1;
}

void assign(const Matrix& data, const Matrix& centroids, std::vector<int>& labels, Vector& dist_sq) {
    const Eigen::Index n = data.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        int arg = 0;
        for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
            const double d = (data.row(i) - centroids.row(c)).squaredNorm();
            if (d < best) {
                best = d;
                arg = static_cast<int>(c);
            }
        }
        labels[static_cast<std::size_t>(i)] = arg;
        dist_sq(i) = best;
    }
}

void repair_empty(const Matrix& data, const Matrix& centroids, std::vector<int>& labels, int k) {
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    for (int j = 0; j < k; ++j) {
        if (sizes[static_cast<std::size_t>(j)] > 0) continue;
        double worst = -1.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (sizes[static_cast<std::size_t>(labels[i])] < 2) continue;
            const double d = (data.row(static_cast<Eigen::Index>(i)) - centroids.row(labels[i])).squaredNorm();
            if (d > worst) {
                worst = d;
                arg = i;
            }
        }
        --sizes[static_cast<std::size_t>(labels[arg])];
        labels[arg] = j;
        ++sizes[static_cast<std::size_t>(j)];
    }
}

Matrix cluster_means(const Matrix& data, const std::vector<int>& labels, int k) {
    Matrix sums = Matrix::Zero(k, data.cols());
    Vector counts = Vector::Zero(k);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        sums.row(labels[i]) += data.row(static_cast<Eigen::Index>(i));
        counts(labels[i]) += 1.0;
    }
    for (int c = 0; c < k; ++c) sums.row(c) /= counts(c);
    return sums;
}

double cost(const Matrix& data, const Matrix& centroids, const std::vector<int>& labels) {
    double total = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        total += (data.row(static_cast<Eigen::Index>(i)) - centroids.row(labels[i])).squaredNorm();
    return total;
}

}  // namespace

Matrix greedy_kmeanspp(const Matrix& data, int k, std::uint64_t seed) {
    const Eigen::Index n = data.rows();
    Rng rng(seed);
    Matrix centers(k, data.cols());
    const int trials = 2 + static_cast<int>(std::floor(std::log(static_cast<double>(k))));

    Eigen::Index first = static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(n)));
    centers.row(0) = data.row(first);
    Vector closest(n);
    for (Eigen::Index i = 0; i < n; ++i) closest(i) = (data.row(i) - data.row(first)).squaredNorm();
    double potential = closest.sum();

    Vector candidate_dist(n);
    for (int c = 1; c < k; ++c) {
        Eigen::Index best_idx = -1;
        double best_pot = std::numeric_limits<double>::infinity();
        Vector best_dist;
        for (int t = 0; t < trials; ++t) {
            const Eigen::Index cand = pick_weighted(closest, potential, rng);
            for (Eigen::Index i = 0; i < n; ++i)
                candidate_dist(i) = std::min(closest(i), (data.row(i) - data.row(cand)).squaredNorm());
            const double pot = candidate_dist.sum();
            if (pot < best_pot) {
                best_pot = pot;
                best_idx = cand;
                best_dist = candidate_dist;
            }
        }
        centers.row(c) = data.row(best_idx);
        closest = std::move(best_dist);
        potential = best_pot;
    }
    return centers;
}

KMeansResult kmeans_fit(const Matrix& data, const KMeansConfig& cfg) {
    const Eigen::Index n = data.rows();
    if (cfg.k < 1) throw ConfigError("kmeans: k must be positive");
    if (cfg.max_iter < 1) throw ConfigError("kmeans: max_iter must be positive");
    if (cfg.tol < 0.0) throw ConfigError("kmeans: tol must be non-negative");
    if (cfg.k > n)
        throw DataError("kmeans: k = " + std::to_string(cfg.k) + " exceeds n = " + std::to_string(n));

    KMeansResult result;
    Matrix centroids = greedy_kmeanspp(data, cfg.k, cfg.seed);
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    std::vector<int> previous;
    Vector dist_sq(n);
    bool final_pass = false;

    for (int it = 0; it < cfg.max_iter; ++it) {
        assign(data, centroids, labels, dist_sq);
        result.inertia_history.push_back(dist_sq.sum());
        result.iterations = it + 1;
        if ((it > 0 && labels == previous) || final_pass || it + 1 == cfg.max_iter) break;

        repair_empty(data, centroids, labels, cfg.k);
        Matrix updated = cluster_means(data, labels, cfg.k);
        const double shift = (updated - centroids).rowwise().norm().maxCoeff();
        centroids = std::move(updated);
        previous = labels;
        if (shift <= cfg.tol) final_pass = true;
    }

    repair_empty(data, centroids, labels, cfg.k);
    result.centroids = cluster_means(data, labels, cfg.k);
    result.inertia = cost(data, result.centroids, labels);
    if (result.inertia < result.inertia_history.back()) result.inertia_history.push_back(result.inertia);
    result.partition = Partition{std::move(labels), cfg.k, Algorithm::kmeans};
    return result;
}

Partition kmeans(const Matrix& data, const KMeansConfig& cfg) {
    return kmeans_fit(data, cfg).partition;
}

}  // namespace docclust
