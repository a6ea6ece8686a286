#include "docclust/metrics.hpp"

#include "docclust/error.hpp"
#include "docclust/parallel.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace docclust::metrics {

namespace {

// Contingency table keyed by (x label, y label) with marginals.
struct Contingency {
    std::map<std::pair<int, int>, double> cells;
    std::map<int, double> x_counts;
    std::map<int, double> y_counts;
    double n = 0.0;
};

Contingency contingency(const std::vector<int>& x, const std::vector<int>& y) {
    if (x.size() != y.size())
        throw DataError("label vectors differ in length (" + std::to_string(x.size()) + " vs " +
                        std::to_string(y.size()) + ")");
    Contingency t;
    for (std::size_t i = 0; i < x.size(); ++i) {
        t.cells[{x[i], y[i]}] += 1.0;
        t.x_counts[x[i]] += 1.0;
        t.y_counts[y[i]] += 1.0;
    }
    t.n = static_cast<double>(x.size());
    return t;
}

double comb2(double v) { return v * (v - 1.0) / 2.0; }

double entropy(const std::map<int, double>& counts, double n) {
    double h = 0.0;
    for (const auto& [label, c] : counts) h -= (c / n) * std::log(c / n);
    return h;
}

// H(x | y) / H(x), or 0 when H(x) == 0.
double conditional_entropy_ratio(const std::vector<int>& x, const std::vector<int>& y) {
    const Contingency t = contingency(x, y);
    const double hx = entropy(t.x_counts, t.n);
    if (hx == 0.0) return 0.0;
    double h_cond = 0.0;
    for (const auto& [key, c] : t.cells) h_cond -= (c / t.n) * std::log(c / t.y_counts.at(key.second));
    return h_cond / hx;
}

}  // namespace

double adjusted_rand(const std::vector<int>& pred, const std::vector<int>& truth) {
    const Contingency t = contingency(pred, truth);
    if (t.n < 2.0) throw DataError("adjusted_rand: need at least two items");
    double index = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& [key, c] : t.cells) index += comb2(c);
    for (const auto& [label, c] : t.x_counts) sum_a += comb2(c);
    for (const auto& [label, c] : t.y_counts) sum_b += comb2(c);
    const double expected = sum_a * sum_b / comb2(t.n);
    const double max_index = 0.5 * (sum_a + sum_b);
    // Zero only when both sides are a single cluster or both are all singletons.
    if (max_index - expected == 0.0) return 1.0;
    return (index - expected) / (max_index - expected);
}

double normalized_mi(const std::vector<int>& pred, const std::vector<int>& truth) {
    const Contingency t = contingency(pred, truth);
    if (t.n < 1.0) throw DataError("normalized_mi: empty labelling");
    const double hp = entropy(t.x_counts, t.n);
    const double ht = entropy(t.y_counts, t.n);
    if (hp == 0.0 && ht == 0.0) return 1.0;
    double mi = 0.0;
    for (const auto& [key, c] : t.cells)
        mi += (c / t.n) * std::log(t.n * c / (t.x_counts.at(key.first) * t.y_counts.at(key.second)));
    mi = std::max(mi, 0.0);
    return std::min(1.0, mi / (0.5 * (hp + ht)));
}

HomogeneityCompleteness homogeneity_completeness(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.empty()) throw DataError("homogeneity_completeness: empty labelling");
    return {1.0 - conditional_entropy_ratio(truth, pred), 1.0 - conditional_entropy_ratio(pred, truth)};
}

Vector silhouette_samples(const Matrix& data, const std::vector<int>& labels, unsigned threads) {
    const Eigen::Index n = data.rows();
    if (static_cast<std::size_t>(n) != labels.size()) throw DataError("silhouette: label count does not match data");
    std::map<int, double> sizes;
    for (int l : labels)
        if (l != kNoise) sizes[l] += 1.0;
    std::vector<int> ids;
    for (const auto& [l, c] : sizes) ids.push_back(l);
    std::map<int, std::size_t> slot;
    for (std::size_t s = 0; s < ids.size(); ++s) slot[ids[s]] = s;

    Vector out = Vector::Constant(n, std::numeric_limits<double>::quiet_NaN());
    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
        const int own = labels[i];
        if (own == kNoise) return;
        std::vector<double> sums(ids.size(), 0.0);
        for (Eigen::Index j = 0; j < n; ++j) {
            const int l = labels[static_cast<std::size_t>(j)];
            if (l == kNoise || j == static_cast<Eigen::Index>(i)) continue;
            sums[slot.at(l)] += (data.row(static_cast<Eigen::Index>(i)) - data.row(j)).norm();
        }
        const double own_size = sizes.at(own);
        if (own_size < 2.0) {
            out(static_cast<Eigen::Index>(i)) = 0.0;
            return;
        }
        const double a = sums[slot.at(own)] / (own_size - 1.0);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < ids.size(); ++s)
            if (ids[s] != own) b = std::min(b, sums[s] / sizes.at(ids[s]));
        const double denom = std::max(a, b);
        out(static_cast<Eigen::Index>(i)) = denom > 0.0 ? (b - a) / denom : 0.0;
    });
    return out;
}

std::optional<double> silhouette(const Matrix& data, const std::vector<int>& labels, unsigned threads) {
    std::map<int, int> clusters;
    for (int l : labels)
        if (l != kNoise) ++clusters[l];
    if (clusters.size() < 2) return std::nullopt;
    const Vector s = silhouette_samples(data, labels, threads);
    double total = 0.0;
    double count = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (std::isnan(s(i))) continue;
        total += s(i);
        count += 1.0;
    }
    return total / count;
}

std::optional<double> simplified_silhouette(const Matrix& data, const std::vector<int>& labels) {
    if (static_cast<std::size_t>(data.rows()) != labels.size())
        throw DataError("simplified_silhouette: label count does not match data");
    std::map<int, std::pair<Vector, double>> centroids;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == kNoise) continue;
        auto [it, inserted] = centroids.try_emplace(labels[i], Vector::Zero(data.cols()), 0.0);
        it->second.first += data.row(static_cast<Eigen::Index>(i)).transpose();
        it->second.second += 1.0;
    }
    if (centroids.size() < 2) return std::nullopt;
    for (auto& [l, c] : centroids) c.first /= c.second;

    double total = 0.0;
    double count = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == kNoise) continue;
        const auto x = data.row(static_cast<Eigen::Index>(i)).transpose();
        double a = 0.0, b = std::numeric_limits<double>::infinity();
        for (const auto& [l, c] : centroids) {
            const double d = (x - c.first).norm();
            if (l == labels[i])
                a = d;
            else
                b = std::min(b, d);
        }
        const double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
        count += 1.0;
    }
    return total / count;
}

EvalReport evaluate(const Matrix& data, const Partition& pred, const std::optional<std::vector<int>>& truth,
                    unsigned threads) {
    if (static_cast<std::size_t>(data.rows()) != pred.size())
        throw DataError("evaluate: partition has " + std::to_string(pred.size()) + " labels for " +
                        std::to_string(data.rows()) + " items");
    if (truth && truth->size() != pred.size())
        throw DataError("evaluate: ground truth has " + std::to_string(truth->size()) + " labels for " +
                        std::to_string(pred.size()) + " items");
    EvalReport r;
    r.pc = pred.n_clusters;
    r.noise_pct = pred.size() ? 100.0 * static_cast<double>(pred.noise_count()) / static_cast<double>(pred.size()) : 0.0;
    if (data.rows() >= 2) r.ss = silhouette(data, pred.labels, threads);
    if (truth && !truth->empty()) {
        if (pred.size() >= 2) r.ari = adjusted_rand(pred.labels, *truth);
        r.nmi = normalized_mi(pred.labels, *truth);
        const auto hc = homogeneity_completeness(pred.labels, *truth);
        r.hs = hc.homogeneity;
        r.cs = hc.completeness;
    }
    return r;
}

}  // namespace docclust::metrics
