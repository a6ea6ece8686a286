#include "docclust/consolidation.hpp"

#include "docclust/distance.hpp"
#include "docclust/error.hpp"
#include "docclust/metrics.hpp"
#include "docclust/parallel.hpp"
#include "docclust/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <string>

namespace docclust::consolidation {

namespace {

std::pair<Eigen::Index, Eigen::Index> ordered(Eigen::Index a, Eigen::Index b) { return {std::min(a, b), std::max(a, b)}; }

// Renumbers group ids by first appearance over old cluster ids.
MergeMap compress(const std::vector<int>& group_of_cluster) {
    MergeMap map;
    std::map<int, int> renumber;
    for (int g : group_of_cluster) {
        auto [it, inserted] = renumber.try_emplace(g, static_cast<int>(renumber.size()));
        map.mapping.push_back(it->second);
    }
    map.n_new = static_cast<int>(renumber.size());
    return map;
}

std::vector<std::vector<Eigen::Index>> members_of(const Partition& part) {
    std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(part.n_clusters));
    for (std::size_t i = 0; i < part.labels.size(); ++i)
        if (part.labels[i] != kNoise) members[static_cast<std::size_t>(part.labels[i])].push_back(static_cast<Eigen::Index>(i));
    return members;
}

Matrix centroids_of(const Matrix& data, const std::vector<std::vector<Eigen::Index>>& members) {
    Matrix c = Matrix::Zero(static_cast<Eigen::Index>(members.size()), data.cols());
    for (std::size_t k = 0; k < members.size(); ++k) {
        for (Eigen::Index i : members[k]) c.row(static_cast<Eigen::Index>(k)) += data.row(i);
        c.row(static_cast<Eigen::Index>(k)) /= static_cast<double>(members[k].size());
    }
    return c;
}

}  // namespace

void ConstraintSet::validate(std::size_t n) const {
    std::set<std::pair<Eigen::Index, Eigen::Index>> must;
    auto check = [&](const Constraint& c, const char* kind) {
        if (c.i < 0 || c.j < 0 || static_cast<std::size_t>(c.i) >= n || static_cast<std::size_t>(c.j) >= n)
            throw DataError(std::string(kind) + " (" + std::to_string(c.i) + ", " + std::to_string(c.j) +
                            ") is out of range for " + std::to_string(n) + " items");
        if (c.i == c.j) throw DataError(std::string(kind) + " joins item " + std::to_string(c.i) + " to itself");
        if (!(c.weight > 0.0)) throw DataError(std::string(kind) + " weights must be positive");
    };
    for (const auto& c : must_links) {
        check(c, "must-link");
        must.insert(ordered(c.i, c.j));
    }
    for (const auto& c : cannot_links) {
        check(c, "cannot-link");
        if (must.count(ordered(c.i, c.j)))
            throw DataError("pair (" + std::to_string(c.i) + ", " + std::to_string(c.j) +
                            ") is both must-link and cannot-link");
    }
}

double constraint_penalty(const std::vector<int>& labels, const ConstraintSet& cons) {
    double penalty = 0.0;
    for (const auto& c : cons.must_links) {
        const int a = labels[static_cast<std::size_t>(c.i)], b = labels[static_cast<std::size_t>(c.j)];
        if (a == kNoise || b == kNoise || a != b) penalty += c.weight;
    }
    for (const auto& c : cons.cannot_links) {
        const int a = labels[static_cast<std::size_t>(c.i)], b = labels[static_cast<std::size_t>(c.j)];
        if (a != kNoise && a == b) penalty += c.weight;
    }
    return penalty;
}

MergeMap MergeMap::identity(int n_clusters) {
    MergeMap m;
    m.mapping.resize(static_cast<std::size_t>(n_clusters));
    std::iota(m.mapping.begin(), m.mapping.end(), 0);
    m.n_new = n_clusters;
    return m;
}

Partition MergeMap::apply(const Partition& part) const {
    if (mapping.size() != static_cast<std::size_t>(part.n_clusters))
        throw DataError("merge map covers " + std::to_string(mapping.size()) + " clusters, partition has " +
                        std::to_string(part.n_clusters));
    Partition out{part.labels, n_new, Algorithm::consolidated};
    for (int& l : out.labels)
        if (l != kNoise) l = mapping[static_cast<std::size_t>(l)];
    return out;
}

ConstraintResult constraint_consolidate(const Partition& part, const ConstraintSet& cons) {
    cons.validate(part.size());
    ConstraintResult result;
    result.penalty_before = constraint_penalty(part.labels, cons);

    std::vector<int> group(static_cast<std::size_t>(part.n_clusters));
    std::iota(group.begin(), group.end(), 0);
    auto group_of = [&](Eigen::Index point) {
        const int l = part.labels[static_cast<std::size_t>(point)];
        return l == kNoise ? -1 : group[static_cast<std::size_t>(l)];
    };

    while (true) {
        // Net penalty change of merging two groups: cannot-link weight gained
        // minus must-link weight satisfied.
        std::map<std::pair<int, int>, double> delta;
        for (const auto& c : cons.must_links) {
            const int a = group_of(c.i), b = group_of(c.j);
            if (a >= 0 && b >= 0 && a != b) delta[{std::min(a, b), std::max(a, b)}] -= c.weight;
        }
        for (const auto& c : cons.cannot_links) {
            const int a = group_of(c.i), b = group_of(c.j);
            if (a >= 0 && b >= 0 && a != b) delta[{std::min(a, b), std::max(a, b)}] += c.weight;
        }
        const std::pair<int, int>* best = nullptr;
        double best_delta = 0.0;
        for (const auto& [key, d] : delta)
            if (d < best_delta) {
                best_delta = d;
                best = &key;
            }
        if (!best) break;
        const int keep = best->first, drop = best->second;
        for (int& g : group)
            if (g == drop) g = keep;
    }

    result.merge_map = compress(group);
    result.partition = result.merge_map.apply(part);
    result.penalty_after = constraint_penalty(result.partition.labels, cons);
    return result;
}

Eigen::Index medoid(const Matrix& data, const std::vector<Eigen::Index>& members) {
    if (members.empty()) throw DataError("medoid of an empty cluster");
    Eigen::Index best = members.front();
    double best_sum = std::numeric_limits<double>::infinity();
    for (Eigen::Index i : members) {
        double s = 0.0;
        for (Eigen::Index j : members) s += euclidean(data, i, j);
        if (s < best_sum) {
            best_sum = s;
            best = i;
        }
    }
    return best;
}

Partition prototype_seed(const Matrix& data, const Partition& part, const SeedConfig& cfg,
                         const std::optional<ConstraintSet>& cons) {
    if (static_cast<std::size_t>(data.rows()) != part.size()) throw DataError("prototype_seed: partition size mismatch");
    if (cfg.budget < 1) throw ConfigError("prototype_seed: budget must be positive");
    if (!(cfg.inertia >= 0.0)) throw ConfigError("prototype_seed: inertia must be non-negative");
    if (cfg.budget > part.n_clusters)
        throw DataError("prototype_seed: budget " + std::to_string(cfg.budget) + " exceeds the " +
                        std::to_string(part.n_clusters) + " clusters");
    if (cons) cons->validate(part.size());

    const auto members = members_of(part);
    std::vector<int> order(static_cast<std::size_t>(part.n_clusters));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return members[static_cast<std::size_t>(a)].size() > members[static_cast<std::size_t>(b)].size();
    });

    const int budget = cfg.budget;
    std::vector<int> slot_of_cluster(static_cast<std::size_t>(part.n_clusters), -1);
    std::vector<Eigen::Index> seeds(static_cast<std::size_t>(budget));
    Matrix prototypes(budget, data.cols());
    for (int s = 0; s < budget; ++s) {
        const int c = order[static_cast<std::size_t>(s)];
        slot_of_cluster[static_cast<std::size_t>(c)] = s;
        seeds[static_cast<std::size_t>(s)] = medoid(data, members[static_cast<std::size_t>(c)]);
        prototypes.row(s) = data.row(seeds[static_cast<std::size_t>(s)]);
    }

    std::vector<std::vector<Eigen::Index>> cannot(part.size());
    if (cons)
        for (const auto& c : cons->cannot_links) {
            cannot[static_cast<std::size_t>(c.i)].push_back(c.j);
            cannot[static_cast<std::size_t>(c.j)].push_back(c.i);
        }

    auto pass = [&](const Matrix& protos) {
        std::vector<int> assigned(part.size(), kNoise);
        for (int s = 0; s < budget; ++s) assigned[static_cast<std::size_t>(seeds[static_cast<std::size_t>(s)])] = s;
        std::vector<std::pair<double, int>> costs(static_cast<std::size_t>(budget));
        for (std::size_t i = 0; i < part.size(); ++i) {
            if (assigned[i] != kNoise) continue;
            const int current =
                part.labels[i] == kNoise ? -1 : slot_of_cluster[static_cast<std::size_t>(part.labels[i])];
            for (int s = 0; s < budget; ++s) {
                double cost = (data.row(static_cast<Eigen::Index>(i)) - protos.row(s)).norm();
                if (current >= 0 && s != current) cost += cfg.inertia;
                costs[static_cast<std::size_t>(s)] = {cost, s};
            }
            std::stable_sort(costs.begin(), costs.end());
            int choice = costs.front().second;
            for (const auto& [cost, s] : costs) {
                const bool blocked = std::any_of(cannot[i].begin(), cannot[i].end(), [&](Eigen::Index other) {
                    return assigned[static_cast<std::size_t>(other)] == s;
                });
                if (!blocked) {
                    choice = s;
                    break;
                }
            }
            assigned[i] = choice;
        }
        return assigned;
    };

    std::vector<int> labels = pass(prototypes);
    if (cfg.update_prototypes) {
        Matrix means = Matrix::Zero(budget, data.cols());
        Vector counts = Vector::Zero(budget);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            means.row(labels[i]) += data.row(static_cast<Eigen::Index>(i));
            counts(labels[i]) += 1.0;
        }
        for (int s = 0; s < budget; ++s) means.row(s) /= counts(s);
        labels = pass(means);
    }
    return Partition{std::move(labels), budget, Algorithm::consolidated};
}

GmmFit fit_spherical_gmm(const Matrix& points, int m, double variance_floor, int restarts, std::uint64_t seed) {
    const Eigen::Index c = points.rows();
    const Eigen::Index d = points.cols();
    if (m < 1 || m > c) throw ConfigError("fit_spherical_gmm: component count outside [1, points]");
    if (restarts < 1) throw ConfigError("fit_spherical_gmm: restarts must be positive");
    const double floor = std::max(variance_floor, std::numeric_limits<double>::min());
    const double total_var = (points.rowwise() - points.colwise().mean()).squaredNorm() / static_cast<double>(c * d);

    GmmFit best;
    best.log_likelihood = -std::numeric_limits<double>::infinity();
    Matrix log_resp(c, m);
    for (int r = 0; r < restarts; ++r) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(m) * 1000 + static_cast<std::uint64_t>(r)));
        GmmFit fit;
        fit.means.resize(m, d);
        Vector closest = Vector::Constant(c, std::numeric_limits<double>::infinity());
        Eigen::Index pick = static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(c)));
        for (int k = 0; k < m; ++k) {
            if (k > 0) {
                const double total = closest.sum();
                if (total > 0.0) {
                    const double target = rng.uniform() * total;
                    double acc = 0.0;
                    pick = c - 1;
                    for (Eigen::Index i = 0; i < c; ++i) {
                        acc += closest(i);
                        if (acc > target) {
                            pick = i;
                            break;
                        }
                    }
                } else {
                    pick = static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(c)));
                }
            }
            fit.means.row(k) = points.row(pick);
            for (Eigen::Index i = 0; i < c; ++i)
                closest(i) = std::min(closest(i), (points.row(i) - points.row(pick)).squaredNorm());
        }
        fit.weights = Vector::Constant(m, 1.0 / m);
        fit.variance = std::max(floor, total_var);

        double previous = -std::numeric_limits<double>::infinity();
        for (int it = 0; it < 500; ++it) {
            // E-step
            const double log_norm = -0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi * fit.variance);
            double ll = 0.0;
            for (Eigen::Index i = 0; i < c; ++i) {
                double top = -std::numeric_limits<double>::infinity();
                for (int k = 0; k < m; ++k) {
                    log_resp(i, k) = fit.weights(k) > 0.0
                                         ? std::log(fit.weights(k)) + log_norm -
                                               (points.row(i) - fit.means.row(k)).squaredNorm() / (2.0 * fit.variance)
                                         : -std::numeric_limits<double>::infinity();
                    top = std::max(top, log_resp(i, k));
                }
                double s = 0.0;
                for (int k = 0; k < m; ++k) s += std::exp(log_resp(i, k) - top);
                const double lse = top + std::log(s);
                ll += lse;
                for (int k = 0; k < m; ++k) log_resp(i, k) -= lse;
            }
            fit.log_likelihood = ll;
            if (std::abs(ll - previous) <= 1e-10 * (1.0 + std::abs(ll))) break;
            previous = ll;
            // M-step
            const Matrix resp = log_resp.array().exp().matrix();
            const Vector mass = resp.colwise().sum().transpose();
            double scatter = 0.0;
            for (int k = 0; k < m; ++k) {
                fit.weights(k) = mass(k) / static_cast<double>(c);
                if (mass(k) < 1e-12) {
                    fit.weights(k) = 0.0;
                    continue;
                }
                fit.means.row(k) = (resp.col(k).transpose() * points) / mass(k);
                for (Eigen::Index i = 0; i < c; ++i)
                    scatter += resp(i, k) * (points.row(i) - fit.means.row(k)).squaredNorm();
            }
            fit.variance = std::max(floor, scatter / static_cast<double>(c * d));
        }
        fit.assignment.resize(static_cast<std::size_t>(c));
        for (Eigen::Index i = 0; i < c; ++i) {
            Eigen::Index arg = 0;
            log_resp.row(i).maxCoeff(&arg);
            fit.assignment[static_cast<std::size_t>(i)] = static_cast<int>(arg);
        }
        if (fit.log_likelihood > best.log_likelihood) best = std::move(fit);
    }
    return best;
}

double bic(const GmmFit& fit, Eigen::Index n_points) {
    const auto m = static_cast<double>(fit.means.rows());
    const auto d = static_cast<double>(fit.means.cols());
    const double params = m * d + (m - 1.0) + 1.0;
    return -2.0 * fit.log_likelihood + params * std::log(static_cast<double>(n_points));
}

AgglomerateResult centroid_agglomerate(const Matrix& data, const Partition& part, const AgglomerateConfig& cfg) {
    if (static_cast<std::size_t>(data.rows()) != part.size())
        throw DataError("centroid_agglomerate: partition size mismatch");
    AgglomerateResult result;
    const int c = part.n_clusters;
    if (c < 2) {
        result.merge_map = MergeMap::identity(c);
        result.partition = result.merge_map.apply(part);
        result.m_star = c;
        return result;
    }

    const auto members = members_of(part);
    const Matrix centroids = centroids_of(data, members);
    const auto d = static_cast<double>(data.cols());
    double scatter = 0.0;
    double counted = 0.0;
    for (std::size_t k = 0; k < members.size(); ++k) {
        for (Eigen::Index i : members[k]) scatter += (data.row(i) - centroids.row(static_cast<Eigen::Index>(k))).squaredNorm();
        counted += static_cast<double>(members[k].size());
    }
    double floor = scatter / (counted * d);
    if (!(floor > 0.0)) {
        const double scale = centroids.squaredNorm() / (static_cast<double>(c) * d);
        floor = 1e-12 * (1.0 + scale);
    }
    result.variance_floor = floor;

    double best_bic = std::numeric_limits<double>::infinity();
    std::vector<int> best_assignment;
    for (int m = 1; m <= c; ++m) {
        const GmmFit fit = fit_spherical_gmm(centroids, m, floor, cfg.restarts, cfg.seed);
        const double b = bic(fit, c);
        result.bic_curve.push_back(b);
        if (b < best_bic) {
            best_bic = b;
            result.m_star = m;
            best_assignment = fit.assignment;
        }
    }
    result.merge_map = compress(best_assignment);
    result.partition = result.merge_map.apply(part);
    return result;
}

CoAssociation co_association(const Matrix& data, const ClusterConfig& base_cfg, const StabilityConfig& cfg) {
    const Eigen::Index n = data.rows();
    if (cfg.runs < 2) throw ConfigError("stability: runs must be at least 2");
    if (!(cfg.subsample > 0.0 && cfg.subsample <= 1.0)) throw ConfigError("stability: subsample must be in (0, 1]");
    const auto m = static_cast<Eigen::Index>(std::floor(cfg.subsample * static_cast<double>(n)));
    if (m < 2) throw DataError("stability: subsample of " + std::to_string(m) + " points is degenerate");

    struct Run {
        std::vector<Eigen::Index> sample;
        std::vector<int> labels;
        int clusters = 0;
    };
    std::vector<Run> runs(static_cast<std::size_t>(cfg.runs));
    parallel_for(runs.size(), cfg.threads, [&](std::size_t r) {
        const std::uint64_t run_seed = mix_seed(cfg.seed, r);
        Rng rng(run_seed);
        std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        for (Eigen::Index i = 0; i < m; ++i) {
            const auto j = i + static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(n - i)));
            std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        }
        Run& run = runs[r];
        run.sample.assign(perm.begin(), perm.begin() + m);
        std::sort(run.sample.begin(), run.sample.end());
        try {
            const Partition p = run_clustering(data(run.sample, Eigen::all), base_cfg.reseeded(mix_seed(run_seed, 1)));
            run.labels = p.labels;
            run.clusters = p.n_clusters;
        } catch (const DataError&) {
            // A failed run still counts as co-sampled, with nothing co-clustered.
            run.labels.assign(run.sample.size(), kNoise);
        }
    });

    Eigen::MatrixXi together = Eigen::MatrixXi::Zero(n, n);
    CoAssociation co;
    co.cosampled = Eigen::MatrixXi::Zero(n, n);
    co.runs = cfg.runs;
    for (const Run& run : runs) {
        co.cluster_counts.push_back(run.clusters);
        for (std::size_t a = 0; a < run.sample.size(); ++a) {
            const Eigen::Index i = run.sample[a];
            for (std::size_t b = a; b < run.sample.size(); ++b) {
                const Eigen::Index j = run.sample[b];
                ++co.cosampled(i, j);
                if (a != b && run.labels[a] != kNoise && run.labels[a] == run.labels[b]) ++together(i, j);
            }
        }
    }
    co.matrix = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (co.cosampled(i, i) > 0) co.matrix(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            co.cosampled(j, i) = co.cosampled(i, j);
            if (co.cosampled(i, j) > 0)
                co.matrix(i, j) = co.matrix(j, i) =
                    static_cast<double>(together(i, j)) / static_cast<double>(co.cosampled(i, j));
        }
    }
    return co;
}

Partition merge_by_coassociation(const Matrix& data, const Partition& base, const CoAssociation& co, double tau) {
    const int c = base.n_clusters;
    const Eigen::Index n = data.rows();
    // Mean co-association between (and within, on the diagonal) base clusters.
    Matrix sum = Matrix::Zero(c, c);
    Matrix count = Matrix::Zero(c, c);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int a = base.labels[static_cast<std::size_t>(i)];
        if (a == kNoise) continue;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const int b = base.labels[static_cast<std::size_t>(j)];
            if (b == kNoise || co.cosampled(i, j) == 0) continue;
            sum(a, b) += co.matrix(i, j);
            count(a, b) += 1.0;
            if (a != b) {
                sum(b, a) += co.matrix(i, j);
                count(b, a) += 1.0;
            }
        }
    }

    std::vector<int> group(static_cast<std::size_t>(c));
    std::iota(group.begin(), group.end(), 0);
    std::function<int(int)> find = [&](int x) { return group[static_cast<std::size_t>(x)] == x ? x : group[static_cast<std::size_t>(x)] = find(group[static_cast<std::size_t>(x)]); };
    for (int a = 0; a < c; ++a)
        for (int b = a + 1; b < c; ++b)
            if (count(a, b) > 0.0 && sum(a, b) / count(a, b) >= tau) {
                const int ra = find(a), rb = find(b);
                if (ra != rb) group[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
            }
    std::vector<int> root(static_cast<std::size_t>(c));
    for (int a = 0; a < c; ++a) root[static_cast<std::size_t>(a)] = find(a);

    // Within-cluster stability of every merged group.
    std::map<int, std::pair<double, double>> within;
    for (int a = 0; a < c; ++a)
        for (int b = a; b < c; ++b)
            if (root[static_cast<std::size_t>(a)] == root[static_cast<std::size_t>(b)]) {
                auto& w = within[root[static_cast<std::size_t>(a)]];
                w.first += sum(a, b);
                w.second += count(a, b);
            }
    std::set<int> stable;
    for (const auto& [g, w] : within)
        if (w.second > 0.0 && w.first / w.second >= tau) stable.insert(g);

    std::vector<int> labels(static_cast<std::size_t>(n), kNoise);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int a = base.labels[static_cast<std::size_t>(i)];
        if (a != kNoise) labels[static_cast<std::size_t>(i)] = root[static_cast<std::size_t>(a)];
    }
    if (stable.empty() || stable.size() == within.size()) return Partition::from_labels(std::move(labels), Algorithm::consolidated);

    std::map<int, std::pair<Vector, double>> centers;
    for (Eigen::Index i = 0; i < n; ++i) {
        const int g = labels[static_cast<std::size_t>(i)];
        if (g == kNoise || !stable.count(g)) continue;
        auto [it, inserted] = centers.try_emplace(g, Vector::Zero(data.cols()), 0.0);
        it->second.first += data.row(i).transpose();
        it->second.second += 1.0;
    }
    for (auto& [g, cw] : centers) cw.first /= cw.second;
    for (Eigen::Index i = 0; i < n; ++i) {
        const int g = labels[static_cast<std::size_t>(i)];
        if (g == kNoise || stable.count(g)) continue;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [s, cw] : centers) {
            const double dist = (data.row(i).transpose() - cw.first).squaredNorm();
            if (dist < best) {
                best = dist;
                labels[static_cast<std::size_t>(i)] = s;
            }
        }
    }
    return Partition::from_labels(std::move(labels), Algorithm::consolidated);
}

StabilityResult stability_merge(const Matrix& data, const ClusterConfig& base_cfg, const StabilityConfig& cfg) {
    if (!(cfg.tau_merge > 0.0 && cfg.tau_merge < 1.0)) throw ConfigError("stability: tau_merge must be in (0, 1)");
    StabilityResult result;
    result.base = run_clustering(data, base_cfg);
    result.co = co_association(data, base_cfg, cfg);
    result.partition = merge_by_coassociation(data, result.base, result.co, cfg.tau_merge);
    return result;
}

AdaptiveKResult adaptive_k(const Matrix& data, const ClusterConfig& base_cfg, const StabilityConfig& cfg,
                           const std::vector<double>& taus) {
    if (taus.empty()) throw ConfigError("adaptive_k: empty tau sweep");
    for (double t : taus)
        if (!(t > 0.0 && t < 1.0)) throw ConfigError("adaptive_k: tau values must be in (0, 1)");
    const Partition base = run_clustering(data, base_cfg);
    const CoAssociation co = co_association(data, base_cfg, cfg);

    AdaptiveKResult result;
    std::optional<double> best_score;
    bool have = false;
    for (double tau : taus) {
        Partition merged = merge_by_coassociation(data, base, co, tau);
        const auto score = metrics::simplified_silhouette(data, merged.labels);
        result.sweep.push_back({tau, merged.n_clusters, score});
        const bool better = !have || (score && (!best_score || *score > *best_score));
        if (better) {
            have = true;
            best_score = score;
            result.partition = std::move(merged);
            result.tau = tau;
        }
    }
    result.k_hat = result.partition.n_clusters;

    const auto& counts = co.cluster_counts;
    const double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / static_cast<double>(counts.size());
    double var = 0.0;
    for (int k : counts) var += (k - mean) * (k - mean);
    result.k_dispersion = std::sqrt(var / static_cast<double>(counts.size()));
    return result;
}

}  // namespace docclust::consolidation
