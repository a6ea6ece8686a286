#include "docclust/birch.hpp"

#include "docclust/error.hpp"
#include "docclust/kmeans.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace docclust {

CFEntry CFEntry::of_point(const Eigen::Ref<const Vector>& x) { return CFEntry{1.0, x, x.squaredNorm()}; }

double CFEntry::radius() const {
    const double r2 = ss / n - (ls / n).squaredNorm();
    return r2 > 0.0 ? std::sqrt(r2) : 0.0;
}

CFEntry cf_merge(const CFEntry& a, const CFEntry& b) {
    if (a.ls.size() != b.ls.size()) throw DataError("cf_merge: dimension mismatch");
    if (!(a.n >= 1.0) || !(b.n >= 1.0)) throw DataError("cf_merge: entries must summarize at least one point");
    return CFEntry{a.n + b.n, a.ls + b.ls, a.ss + b.ss};
}

namespace {

class CFTree {
public:
    CFTree(double threshold, int branching) : threshold_(threshold), branching_(branching) {
        nodes_.push_back(Node{true, {}});
    }

    void insert(const Eigen::Ref<const Vector>& x, int point) {
        const CFEntry cf = CFEntry::of_point(x);
        if (auto split = insert_into(root_, cf, point)) {
            nodes_.push_back(Node{false, {std::move(split->first), std::move(split->second)}});
            root_ = static_cast<int>(nodes_.size()) - 1;
        }
    }

    // Leaf entries in depth-first order with their member points.
    void leaves(std::vector<CFEntry>& entries, std::vector<std::vector<int>>& members) const {
        collect(root_, entries, members);
    }

private:
    struct Entry {
        CFEntry cf;
        int child = -1;
        std::vector<int> points;
    };
    struct Node {
        bool leaf;
        std::vector<Entry> entries;
    };
    using Split = std::pair<Entry, Entry>;

    static std::size_t closest(const std::vector<Entry>& entries, const Vector& x) {
        std::size_t arg = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t e = 0; e < entries.size(); ++e) {
            const double d = (entries[e].cf.centroid() - x).squaredNorm();
            if (d < best) {
                best = d;
                arg = e;
            }
        }
        return arg;
    }

    std::optional<Split> insert_into(int node_id, const CFEntry& cf, int point) {
        if (nodes_[static_cast<std::size_t>(node_id)].leaf) {
            auto& entries = nodes_[static_cast<std::size_t>(node_id)].entries;
            if (!entries.empty()) {
                const std::size_t e = closest(entries, cf.ls);
                CFEntry merged = cf_merge(entries[e].cf, cf);
                if (merged.radius() <= threshold_) {
                    entries[e].cf = std::move(merged);
                    entries[e].points.push_back(point);
                    return std::nullopt;
                }
            }
            entries.push_back(Entry{cf, -1, {point}});
        } else {
            const std::size_t e = closest(nodes_[static_cast<std::size_t>(node_id)].entries, cf.ls);
            const int child = nodes_[static_cast<std::size_t>(node_id)].entries[e].child;
            auto split = insert_into(child, cf, point);
            auto& entries = nodes_[static_cast<std::size_t>(node_id)].entries;
            if (split) {
                entries[e] = std::move(split->first);
                entries.insert(entries.begin() + static_cast<std::ptrdiff_t>(e) + 1, std::move(split->second));
            } else {
                entries[e].cf = cf_merge(entries[e].cf, cf);
            }
        }
        if (static_cast<int>(nodes_[static_cast<std::size_t>(node_id)].entries.size()) > branching_)
            return split_node(node_id);
        return std::nullopt;
    }

    Split split_node(int node_id) {
        std::vector<Entry> entries = std::move(nodes_[static_cast<std::size_t>(node_id)].entries);
        const bool leaf = nodes_[static_cast<std::size_t>(node_id)].leaf;
        std::size_t sa = 0, sb = 1;
        double far = -1.0;
        for (std::size_t i = 0; i < entries.size(); ++i)
            for (std::size_t j = i + 1; j < entries.size(); ++j) {
                const double d = (entries[i].cf.centroid() - entries[j].cf.centroid()).squaredNorm();
                if (d > far) {
                    far = d;
                    sa = i;
                    sb = j;
                }
            }
        const Vector ca = entries[sa].cf.centroid(), cb = entries[sb].cf.centroid();
        std::vector<Entry> group_a, group_b;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const bool to_a = i == sa || (i != sb && (entries[i].cf.centroid() - ca).squaredNorm() <=
                                                         (entries[i].cf.centroid() - cb).squaredNorm());
            (to_a ? group_a : group_b).push_back(std::move(entries[i]));
        }
        auto summarize = [](const std::vector<Entry>& group) {
            CFEntry total = group.front().cf;
            for (std::size_t i = 1; i < group.size(); ++i) total = cf_merge(total, group[i].cf);
            return total;
        };
        Entry a{summarize(group_a), node_id, {}};
        Entry b{summarize(group_b), static_cast<int>(nodes_.size()), {}};
        nodes_[static_cast<std::size_t>(node_id)].entries = std::move(group_a);
        nodes_.push_back(Node{leaf, std::move(group_b)});
        return {std::move(a), std::move(b)};
    }

    void collect(int node_id, std::vector<CFEntry>& entries, std::vector<std::vector<int>>& members) const {
        const Node& node = nodes_[static_cast<std::size_t>(node_id)];
        for (const Entry& e : node.entries) {
            if (node.leaf) {
                entries.push_back(e.cf);
                members.push_back(e.points);
            } else {
                collect(e.child, entries, members);
            }
        }
    }

    double threshold_;
    int branching_;
    std::vector<Node> nodes_;
    int root_ = 0;
};

}  // namespace

BirchResult birch_fit(const Matrix& data, const BirchConfig& cfg) {
    if (!(cfg.threshold > 0.0)) throw ConfigError("birch: threshold must be positive");
    if (cfg.branching < 2) throw ConfigError("birch: branching must be at least 2");
    if (cfg.global_k && *cfg.global_k < 1) throw ConfigError("birch: global_k must be positive");
    const Eigen::Index n = data.rows();
    if (n < 1) throw DataError("birch: empty dataset");

    CFTree tree(cfg.threshold, cfg.branching);
    for (Eigen::Index i = 0; i < n; ++i) tree.insert(data.row(i).transpose(), static_cast<int>(i));

    BirchResult result;
    std::vector<std::vector<int>> members;
    tree.leaves(result.leaf_entries, members);
    result.leaf_of_point.assign(static_cast<std::size_t>(n), 0);
    for (std::size_t e = 0; e < members.size(); ++e)
        for (int p : members[e]) result.leaf_of_point[static_cast<std::size_t>(p)] = static_cast<int>(e);

    const auto n_leaves = static_cast<int>(result.leaf_entries.size());
    std::vector<int> entry_label(static_cast<std::size_t>(n_leaves));
    if (cfg.global_k) {
        if (*cfg.global_k > n_leaves)
            throw DataError("birch: global_k = " + std::to_string(*cfg.global_k) + " exceeds the " +
                            std::to_string(n_leaves) + " leaf entries");
        Matrix centroids(n_leaves, data.cols());
        for (int e = 0; e < n_leaves; ++e) centroids.row(e) = result.leaf_entries[static_cast<std::size_t>(e)].centroid();
        entry_label = kmeans(centroids, KMeansConfig{*cfg.global_k, 300, cfg.seed, 0.0}).labels;
    } else {
        for (int e = 0; e < n_leaves; ++e) entry_label[static_cast<std::size_t>(e)] = e;
    }

    std::vector<int> labels(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        labels[static_cast<std::size_t>(i)] =
            entry_label[static_cast<std::size_t>(result.leaf_of_point[static_cast<std::size_t>(i)])];
    result.partition = Partition::from_labels(std::move(labels), Algorithm::birch);
    return result;
}

Partition birch(const Matrix& data, const BirchConfig& cfg) { return birch_fit(data, cfg).partition; }

}  // namespace docclust
