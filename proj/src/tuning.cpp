#include "docclust/tuning.hpp"

#include "docclust/distance.hpp"
#include "docclust/error.hpp"
#include "docclust/metrics.hpp"
#include "docclust/parallel.hpp"
#include "docclust/rng.hpp"

#include <algorithm>
#include <cmath>

namespace docclust::tuning {

std::size_t GridSpec::trial_count() const {
    std::size_t total = 1;
    for (const Axis& a : axes) total *= a.values.size();
    return total;
}

namespace {

int as_int(const std::string& name, double value) {
    if (value != std::floor(value)) throw ConfigError("grid axis '" + name + "' needs integer values");
    return static_cast<int>(value);
}

}  // namespace

void apply_param(ClusterConfig& cfg, const std::string& name, double value) {
    if (name == "k")
        cfg.kmeans.k = as_int(name, value);
    else if (name == "max_iter")
        cfg.kmeans.max_iter = as_int(name, value);
    else if (name == "eps")
        cfg.dbscan.eps = value;
    else if (name == "min_pts")
        cfg.dbscan.min_pts = as_int(name, value);
    else if (name == "min_cluster_size")
        cfg.hdbscan.min_cluster_size = as_int(name, value);
    else if (name == "min_samples")
        cfg.hdbscan.min_samples = as_int(name, value);
    else if (name == "knn_k")
        cfg.hdbscan.knn_k = as_int(name, value);
    else if (name == "threshold")
        cfg.birch.threshold = value;
    else if (name == "branching")
        cfg.birch.branching = as_int(name, value);
    else if (name == "global_k")
        cfg.birch.global_k = as_int(name, value);
    else
        throw ConfigError("unknown grid axis '" + name + "'");
}

TuneResult grid_search(const Matrix& data, const GridSpec& spec, const ClusterConfig& base, unsigned threads) {
    if (spec.axes.empty()) throw ConfigError("grid_search: grid has no axes");
    for (const Axis& a : spec.axes)
        if (a.values.empty()) throw ConfigError("grid_search: axis '" + a.name + "' is empty");

    const std::size_t total = spec.trial_count();
    TuneResult result;
    result.trials.resize(total);
    for (std::size_t t = 0; t < total; ++t) {
        Trial& trial = result.trials[t];
        trial.config = base;
        trial.config.algorithm = spec.algorithm;
        std::size_t rem = t;
        std::vector<std::size_t> pos(spec.axes.size());
        for (std::size_t a = spec.axes.size(); a-- > 0;) {
            pos[a] = rem % spec.axes[a].values.size();
            rem /= spec.axes[a].values.size();
        }
        for (std::size_t a = 0; a < spec.axes.size(); ++a) {
            const double v = spec.axes[a].values[pos[a]];
            trial.params.emplace_back(spec.axes[a].name, v);
            apply_param(trial.config, spec.axes[a].name, v);
        }
    }

    parallel_for(total, threads, [&](std::size_t t) {
        Trial& trial = result.trials[t];
        try {
            const Partition part = run_clustering(data, trial.config);
            trial.pc = part.n_clusters;
            trial.noise_pct = part.size() ? 100.0 * static_cast<double>(part.noise_count()) /
                                                static_cast<double>(part.size())
                                          : 0.0;
            trial.score = metrics::silhouette(data, part.labels);
        } catch (const DataError& e) {
            trial.error = e.what();
            trial.noise_pct = 100.0;
        }
    });

    bool found = false;
    for (std::size_t t = 0; t < total; ++t) {
        const auto& s = result.trials[t].score;
        if (s && (!found || *s > result.best_score)) {
            found = true;
            result.best_score = *s;
            result.best_index = t;
        }
    }
    if (!found)
        throw ExhaustedGridError("grid_search: all " + std::to_string(total) +
                                 " grid points produced an undefined silhouette");
    result.best_config = result.trials[result.best_index].config;
    return result;
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw DataError("percentile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

namespace {

std::vector<double> decile_axis(const std::vector<double>& sample) {
    std::vector<double> out;
    for (int q = 10; q <= 90; q += 10) {
        const double v = percentile(sample, q);
        if (v > 0.0 && (out.empty() || v > out.back())) out.push_back(v);
    }
    if (out.empty()) throw DataError("default_grid: all sampled distances are zero");
    return out;
}

}  // namespace

GridSpec default_grid(Algorithm algorithm, const Matrix& data, std::uint64_t seed) {
    const Eigen::Index n = data.rows();
    if (n < 10) throw DataError("default_grid: need at least 10 items, got " + std::to_string(n));
    GridSpec spec;
    spec.algorithm = algorithm;
    switch (algorithm) {
        case Algorithm::dbscan: {
            const Matrix dist = pairwise_distances(data);
            std::vector<double> knn(static_cast<std::size_t>(n));
            std::vector<double> row(static_cast<std::size_t>(n));
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = dist(i, j);
                // Index 0 after sorting is the point itself.
                std::nth_element(row.begin(), row.begin() + 4, row.end());
                knn[static_cast<std::size_t>(i)] = row[4];
            }
            spec.axes = {{"eps", decile_axis(knn)}, {"min_pts", {3, 5, 10, 15}}};
            break;
        }
        case Algorithm::hdbscan:
        case Algorithm::hdbscan_knn: {
            std::vector<double> mcs;
            for (double v : {5.0, 10.0, 15.0, 25.0, 50.0})
                if (v >= 2.0 && v <= static_cast<double>(n / 2)) mcs.push_back(v);
            std::vector<double> ms;
            for (double v : {1.0, 5.0, 10.0})
                if (v <= static_cast<double>(n)) ms.push_back(v);
            spec.axes = {{"min_cluster_size", mcs}, {"min_samples", ms}};
            break;
        }
        case Algorithm::birch: {
            Rng rng(seed);
            std::vector<double> sample;
            sample.reserve(1000);
            for (int s = 0; s < 1000; ++s) {
                const auto i = static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(n)));
                auto j = static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(n - 1)));
                if (j >= i) ++j;
                sample.push_back(euclidean(data, i, j));
            }
            spec.axes = {{"threshold", decile_axis(sample)}};
            break;
        }
        case Algorithm::kmeans:
        case Algorithm::consolidated:
            throw ConfigError("default_grid: " + std::string(to_string(algorithm)) +
                              " has no default grid; k-means runs with the oracle k");
    }
    return spec;
}

Partition oracle_partition(const Matrix& data, Algorithm algorithm, int true_k,
                           const std::optional<TuneResult>& tuned, std::uint64_t seed, unsigned threads) {
    if (true_k < 1) throw ConfigError("oracle_partition: true_k must be positive");
    if (true_k > data.rows()) throw DataError("oracle_partition: true_k exceeds the number of items");
    if (algorithm == Algorithm::kmeans) return kmeans(data, KMeansConfig{true_k, 300, seed, 0.0});
    if (algorithm != Algorithm::birch)
        throw ConfigError("oracle_partition: only kmeans and birch take an oracle k");

    BirchConfig cfg;
    ClusterConfig base;
    base.birch.seed = seed;
    const TuneResult result = tuned ? *tuned : grid_search(data, default_grid(Algorithm::birch, data, seed), base, threads);
    cfg = result.best_config.birch;
    cfg.global_k = true_k;
    cfg.seed = seed;
    return birch(data, cfg);
}

}  // namespace docclust::tuning
