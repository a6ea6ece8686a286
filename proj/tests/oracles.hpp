#pragma once

// Slow, direct reference implementations. None of them call into the library.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;

inline double pair_dist(const Matrix& x, Eigen::Index i, Eigen::Index j) {
    double s = 0.0;
    for (Eigen::Index c = 0; c < x.cols(); ++c) s += (x(i, c) - x(j, c)) * (x(i, c) - x(j, c));
    return std::sqrt(s);
}

// ARI by counting every unordered pair.
inline double ari_pairs(const std::vector<int>& a, const std::vector<int>& b) {
    double n11 = 0, n10 = 0, n01 = 0, n00 = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            const bool sa = a[i] == a[j], sb = b[i] == b[j];
            if (sa && sb) n11 += 1;
            else if (sa) n10 += 1;
            else if (sb) n01 += 1;
            else n00 += 1;
        }
    const double den = (n00 + n01) * (n01 + n11) + (n00 + n10) * (n10 + n11);
    if (den == 0.0) return 1.0;
    return 2.0 * (n00 * n11 - n01 * n10) / den;
}

inline double entropy(const std::vector<int>& a) {
    std::map<int, double> c;
    for (int x : a) c[x] += 1;
    double h = 0.0;
    const double n = static_cast<double>(a.size());
    for (const auto& [k, v] : c) h -= v / n * std::log(v / n);
    return h;
}

// H(a | b)
inline double cond_entropy(const std::vector<int>& a, const std::vector<int>& b) {
    std::map<std::pair<int, int>, double> joint;
    std::map<int, double> mb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        joint[{a[i], b[i]}] += 1;
        mb[b[i]] += 1;
    }
    const double n = static_cast<double>(a.size());
    double h = 0.0;
    for (const auto& [k, v] : joint) h -= v / n * std::log(v / mb[k.second]);
    return h;
}

inline double mutual_info(const std::vector<int>& a, const std::vector<int>& b) {
    std::map<std::pair<int, int>, double> joint;
    std::map<int, double> ma, mb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        joint[{a[i], b[i]}] += 1;
        ma[a[i]] += 1;
        mb[b[i]] += 1;
    }
    const double n = static_cast<double>(a.size());
    double mi = 0.0;
    for (const auto& [k, v] : joint) mi += v / n * std::log(v * n / (ma[k.first] * mb[k.second]));
    return mi;
}

inline double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
    const double hp = entropy(pred), ht = entropy(truth);
    if (hp == 0.0 && ht == 0.0) return 1.0;
    return mutual_info(pred, truth) / (0.5 * (hp + ht));
}

inline double homogeneity(const std::vector<int>& pred, const std::vector<int>& truth) {
    const double ht = entropy(truth);
    return ht == 0.0 ? 1.0 : 1.0 - cond_entropy(truth, pred) / ht;
}

inline double completeness(const std::vector<int>& pred, const std::vector<int>& truth) {
    const double hp = entropy(pred);
    return hp == 0.0 ? 1.0 : 1.0 - cond_entropy(pred, truth) / hp;
}

// Textbook DBSCAN: seed-list expansion from each unvisited core point in index
// order. Border points are then given the cluster of their lowest-index core
// neighbour, which is the library's documented rule.
inline std::vector<int> dbscan(const Matrix& x, double eps, int min_pts) {
    const Eigen::Index n = x.rows();
    std::vector<std::vector<Eigen::Index>> nb(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (pair_dist(x, i, j) <= eps) nb[static_cast<std::size_t>(i)].push_back(j);
    std::vector<bool> core(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        core[static_cast<std::size_t>(i)] = static_cast<int>(nb[static_cast<std::size_t>(i)].size()) >= min_pts;
    std::vector<int> label(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!core[static_cast<std::size_t>(i)] || label[static_cast<std::size_t>(i)] != -1) continue;
        std::deque<Eigen::Index> queue{i};
        label[static_cast<std::size_t>(i)] = next;
        while (!queue.empty()) {
            const Eigen::Index p = queue.front();
            queue.pop_front();
            for (Eigen::Index q : nb[static_cast<std::size_t>(p)])
                if (core[static_cast<std::size_t>(q)] && label[static_cast<std::size_t>(q)] == -1) {
                    label[static_cast<std::size_t>(q)] = next;
                    queue.push_back(q);
                }
        }
        ++next;
    }
    std::vector<int> out = label;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (core[static_cast<std::size_t>(i)]) continue;
        for (Eigen::Index q : nb[static_cast<std::size_t>(i)])  // ascending index
            if (core[static_cast<std::size_t>(q)]) {
                out[static_cast<std::size_t>(i)] = label[static_cast<std::size_t>(q)];
                break;
            }
    }
    return out;
}

// Both label vectors describe the same grouping (noise -1 must coincide).
inline bool same_grouping(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    std::map<int, int> ab, ba;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((a[i] == -1) != (b[i] == -1)) return false;
        if (a[i] == -1) continue;
        auto [x, fx] = ab.try_emplace(a[i], b[i]);
        auto [y, fy] = ba.try_emplace(b[i], a[i]);
        if (x->second != b[i] || y->second != a[i]) return false;
    }
    return true;
}

// Kruskal on the complete mutual-reachability graph; returns the total weight.
// Core distance = distance to the min_samples-th closest point, self first.
inline double mst_weight(const Matrix& x, int min_samples) {
    const Eigen::Index n = x.rows();
    std::vector<double> core(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<double> d;
        for (Eigen::Index j = 0; j < n; ++j) d.push_back(pair_dist(x, i, j));
        std::sort(d.begin(), d.end());
        core[static_cast<std::size_t>(i)] = d[static_cast<std::size_t>(min_samples - 1)];
    }
    struct E {
        double w;
        Eigen::Index a, b;
    };
    std::vector<E> edges;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            edges.push_back({std::max({core[static_cast<std::size_t>(i)], core[static_cast<std::size_t>(j)],
                                       pair_dist(x, i, j)}),
                             i, j});
    std::sort(edges.begin(), edges.end(), [](const E& p, const E& q) { return p.w < q.w; });
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](Eigen::Index v) {
        while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
        return v;
    };
    double total = 0.0;
    for (const auto& e : edges) {
        const Eigen::Index ra = find(e.a), rb = find(e.b);
        if (ra == rb) continue;
        parent[static_cast<std::size_t>(ra)] = rb;
        total += e.w;
    }
    return total;
}

// Direct clustering-feature statistics of a point set.
struct CF {
    double n = 0;
    Eigen::VectorXd ls;
    double ss = 0;
};

inline CF direct_cf(const Matrix& pts) {
    CF cf;
    cf.n = static_cast<double>(pts.rows());
    cf.ls = Eigen::VectorXd::Zero(pts.cols());
    for (Eigen::Index i = 0; i < pts.rows(); ++i)
        for (Eigen::Index c = 0; c < pts.cols(); ++c) {
            cf.ls(c) += pts(i, c);
            cf.ss += pts(i, c) * pts(i, c);
        }
    return cf;
}

// Silhouette straight from the definition: noise skipped, singletons 0.
inline double silhouette(const Matrix& x, const std::vector<int>& lab) {
    std::map<int, int> size;
    for (int l : lab)
        if (l != -1) ++size[l];
    if (size.size() < 2) return std::nan("");
    double total = 0.0;
    int counted = 0;
    for (std::size_t i = 0; i < lab.size(); ++i) {
        if (lab[i] == -1) continue;
        ++counted;
        if (size[lab[i]] == 1) continue;
        std::map<int, double> sum;
        for (std::size_t j = 0; j < lab.size(); ++j)
            if (j != i && lab[j] != -1) sum[lab[j]] += pair_dist(x, static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        const double a = sum[lab[i]] / (size[lab[i]] - 1);
        double b = INFINITY;
        for (const auto& [l, s] : sum)
            if (l != lab[i]) b = std::min(b, s / size[l]);
        total += (b - a) / std::max(a, b);
    }
    return total / counted;
}

}  // namespace oracle
