#include "docclust/hdbscan.hpp"

#include "docclust/distance.hpp"
#include "docclust/error.hpp"
#include "docclust/knn.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace docclust {

namespace {

// Zero distances (duplicate points) would give infinite density levels.
constexpr double kMaxLambda = 1e12;

double to_lambda(double distance) {
    return distance > 0.0 ? std::min(1.0 / distance, kMaxLambda) : kMaxLambda;
}

struct Dendrogram {
    Eigen::Index leaves = 0;
    // Internal node t has id leaves + t.
    std::vector<Eigen::Index> left, right, size;
    std::vector<double> distance;

    Eigen::Index node_size(Eigen::Index id) const { return id < leaves ? 1 : size[static_cast<std::size_t>(id - leaves)]; }
};

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

Dendrogram single_linkage(std::vector<MstEdge> edges, Eigen::Index n) {
    std::stable_sort(edges.begin(), edges.end(), [](const MstEdge& x, const MstEdge& y) { return x.weight < y.weight; });
    Dendrogram tree;
    tree.leaves = n;
    UnionFind uf(static_cast<std::size_t>(n));
    std::vector<Eigen::Index> node_of(static_cast<std::size_t>(n));
    std::iota(node_of.begin(), node_of.end(), 0);
    for (const MstEdge& e : edges) {
        const std::size_t ra = uf.find(static_cast<std::size_t>(e.a));
        const std::size_t rb = uf.find(static_cast<std::size_t>(e.b));
        const Eigen::Index l = node_of[ra], r = node_of[rb];
        tree.left.push_back(l);
        tree.right.push_back(r);
        tree.distance.push_back(e.weight);
        tree.size.push_back(tree.node_size(l) + tree.node_size(r));
        uf.unite(ra, rb);
        node_of[uf.find(ra)] = n + static_cast<Eigen::Index>(tree.left.size()) - 1;
    }
    return tree;
}

void collect_leaves(const Dendrogram& tree, Eigen::Index node, std::vector<Eigen::Index>& out) {
    std::vector<Eigen::Index> stack{node};
    while (!stack.empty()) {
        const Eigen::Index id = stack.back();
        stack.pop_back();
        if (id < tree.leaves) {
            out.push_back(id);
        } else {
            const auto t = static_cast<std::size_t>(id - tree.leaves);
            stack.push_back(tree.right[t]);
            stack.push_back(tree.left[t]);
        }
    }
}

}  // namespace

Vector core_distances(const Matrix& dist, int min_samples) {
    const Eigen::Index n = dist.rows();
    Vector core(n);
    std::vector<double> row(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = dist(i, j);
        std::nth_element(row.begin(), row.begin() + (min_samples - 1), row.end());
        core(i) = row[static_cast<std::size_t>(min_samples - 1)];
    }
    return core;
}

Matrix mutual_reachability(const Matrix& dist, const Vector& core) {
    const Eigen::Index n = dist.rows();
    Matrix mr(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            mr(i, j) = i == j ? 0.0 : std::max({core(i), core(j), dist(i, j)});
    return mr;
}

std::vector<MstEdge> mutual_reachability_mst(const Matrix& data, int min_samples) {
    const Eigen::Index n = data.rows();
    if (min_samples < 1 || min_samples > n)
        throw DataError("hdbscan: min_samples = " + std::to_string(min_samples) + " needs at least that many points (n = " +
                        std::to_string(n) + ")");
    const Matrix dist = pairwise_distances(data);
    const Matrix mr = mutual_reachability(dist, core_distances(dist, min_samples));

    std::vector<MstEdge> edges;
    if (n < 2) return edges;
    std::vector<char> in_tree(static_cast<std::size_t>(n), 0);
    std::vector<double> key(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    std::vector<Eigen::Index> link(static_cast<std::size_t>(n), 0);
    Eigen::Index current = 0;
    in_tree[0] = 1;
    for (Eigen::Index step = 1; step < n; ++step) {
        Eigen::Index next = -1;
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index v = 0; v < n; ++v) {
            if (in_tree[static_cast<std::size_t>(v)]) continue;
            if (mr(current, v) < key[static_cast<std::size_t>(v)]) {
                key[static_cast<std::size_t>(v)] = mr(current, v);
                link[static_cast<std::size_t>(v)] = current;
            }
            if (next < 0 || key[static_cast<std::size_t>(v)] < best) {
                best = key[static_cast<std::size_t>(v)];
                next = v;
            }
        }
        edges.push_back({link[static_cast<std::size_t>(next)], next, best});
        in_tree[static_cast<std::size_t>(next)] = 1;
        current = next;
    }
    return edges;
}

HdbscanResult hdbscan_fit(const Matrix& data, const HdbscanConfig& cfg) {
    if (cfg.min_cluster_size < 2) throw ConfigError("hdbscan: min_cluster_size must be at least 2");
    if (cfg.min_samples < 1) throw ConfigError("hdbscan: min_samples must be positive");
    const Eigen::Index n = data.rows();

    HdbscanResult result;
    result.mst = mutual_reachability_mst(data, cfg.min_samples);
    const Dendrogram dendro = single_linkage(result.mst, n);
    const Eigen::Index mcs = cfg.min_cluster_size;

    auto& tree = result.tree;
    tree.push_back(CondensedCluster{-1, 0.0, 0.0, n, {}, false});
    std::vector<int> point_cluster(static_cast<std::size_t>(n), 0);
    std::vector<Eigen::Index> fallen;

    auto fall_out = [&](Eigen::Index node, int cluster, double lambda) {
        fallen.clear();
        collect_leaves(dendro, node, fallen);
        auto& c = tree[static_cast<std::size_t>(cluster)];
        for (Eigen::Index p : fallen) {
            point_cluster[static_cast<std::size_t>(p)] = cluster;
            c.stability += lambda - c.birth_lambda;
        }
    };

    if (n == 1) {
        point_cluster[0] = 0;
    } else {
        std::vector<std::pair<Eigen::Index, int>> work{{2 * n - 2, 0}};
        while (!work.empty()) {
            const auto [node, cluster] = work.back();
            work.pop_back();
            const auto t = static_cast<std::size_t>(node - n);
            const double lambda = to_lambda(dendro.distance[t]);
            const Eigen::Index l = dendro.left[t], r = dendro.right[t];
            const Eigen::Index sl = dendro.node_size(l), sr = dendro.node_size(r);
            if (sl >= mcs && sr >= mcs) {
                for (Eigen::Index child : {l, r}) {
                    const int id = static_cast<int>(tree.size());
                    const Eigen::Index size = dendro.node_size(child);
                    tree.push_back(CondensedCluster{cluster, lambda, 0.0, size, {}, false});
                    auto& parent = tree[static_cast<std::size_t>(cluster)];
                    parent.children.push_back(id);
                    parent.stability += (lambda - parent.birth_lambda) * static_cast<double>(size);
                    work.emplace_back(child, id);
                }
            } else if (sl >= mcs) {
                fall_out(r, cluster, lambda);
                work.emplace_back(l, cluster);
            } else if (sr >= mcs) {
                fall_out(l, cluster, lambda);
                work.emplace_back(r, cluster);
            } else {
                fall_out(l, cluster, lambda);
                fall_out(r, cluster, lambda);
            }
        }
    }

    // Excess-of-mass selection, leaves first.
    std::vector<double> subtree(tree.size(), 0.0);
    for (int c = static_cast<int>(tree.size()) - 1; c >= 0; --c) {
        auto& node = tree[static_cast<std::size_t>(c)];
        if (c == 0 && !node.children.empty()) break;
        if (node.children.empty()) {
            node.selected = c != 0 || n >= mcs;
            subtree[static_cast<std::size_t>(c)] = node.stability;
            continue;
        }
        double child_sum = 0.0;
        for (int ch : node.children) child_sum += subtree[static_cast<std::size_t>(ch)];
        if (child_sum > node.stability) {
            subtree[static_cast<std::size_t>(c)] = child_sum;
        } else {
            subtree[static_cast<std::size_t>(c)] = node.stability;
            node.selected = true;
            std::vector<int> stack(node.children.begin(), node.children.end());
            while (!stack.empty()) {
                const int d = stack.back();
                stack.pop_back();
                tree[static_cast<std::size_t>(d)].selected = false;
                for (int g : tree[static_cast<std::size_t>(d)].children) stack.push_back(g);
            }
        }
    }

    std::vector<int> labels(static_cast<std::size_t>(n), kNoise);
    for (Eigen::Index p = 0; p < n; ++p) {
        for (int c = point_cluster[static_cast<std::size_t>(p)]; c >= 0; c = tree[static_cast<std::size_t>(c)].parent) {
            if (tree[static_cast<std::size_t>(c)].selected) {
                labels[static_cast<std::size_t>(p)] = c;
                break;
            }
        }
    }
    result.partition = Partition::from_labels(std::move(labels), Algorithm::hdbscan);
    return result;
}

Partition hdbscan(const Matrix& data, const HdbscanConfig& cfg) { return hdbscan_fit(data, cfg).partition; }

Partition hdbscan_knn(const Matrix& data, const HdbscanConfig& cfg) {
    if (cfg.knn_k < 1) throw ConfigError("hdbscan_knn: knn_k must be positive");
    Partition part = hdbscan(data, cfg);
    part.algorithm = Algorithm::hdbscan_knn;
    if (part.n_clusters == 0) throw AllNoiseError("hdbscan_knn: HDBSCAN labelled every point as noise");

    std::vector<Eigen::Index> train_idx, query_idx;
    for (std::size_t i = 0; i < part.labels.size(); ++i)
        (part.labels[i] == kNoise ? query_idx : train_idx).push_back(static_cast<Eigen::Index>(i));
    if (query_idx.empty()) return part;

    const Matrix train = data(train_idx, Eigen::all);
    const Matrix query = data(query_idx, Eigen::all);
    std::vector<int> train_labels;
    train_labels.reserve(train_idx.size());
    for (Eigen::Index i : train_idx) train_labels.push_back(part.labels[static_cast<std::size_t>(i)]);
    const int k = std::min<int>(cfg.knn_k, static_cast<int>(train_idx.size()));
    const std::vector<int> predicted = knn_classify(train, train_labels, query, k);
    for (std::size_t q = 0; q < query_idx.size(); ++q)
        part.labels[static_cast<std::size_t>(query_idx[q])] = predicted[q];
    return part;
}

}  // namespace docclust
