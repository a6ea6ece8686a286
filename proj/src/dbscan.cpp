#include "docclust/dbscan.hpp"

#include "docclust/distance.hpp"
#include "docclust/error.hpp"

#include <vector>

namespace docclust {

Partition dbscan(const Matrix& data, const DbscanConfig& cfg) {
    if (!(cfg.eps > 0.0)) throw ConfigError("dbscan: eps must be positive");
    if (cfg.min_pts < 1) throw ConfigError("dbscan: min_pts must be positive");
    const Eigen::Index n = data.rows();

    const Matrix dist = pairwise_distances(data);
    std::vector<std::vector<Eigen::Index>> neighbors(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i == j || dist(i, j) <= cfg.eps) neighbors[static_cast<std::size_t>(i)].push_back(j);

    std::vector<char> core(static_cast<std::size_t>(n), 0);
    for (Eigen::Index i = 0; i < n; ++i)
        core[static_cast<std::size_t>(i)] =
            static_cast<int>(neighbors[static_cast<std::size_t>(i)].size()) >= cfg.min_pts;

    std::vector<int> labels(static_cast<std::size_t>(n), kNoise);
    int next_cluster = 0;
    std::vector<Eigen::Index> stack;
    for (Eigen::Index seed = 0; seed < n; ++seed) {
        if (!core[static_cast<std::size_t>(seed)] || labels[static_cast<std::size_t>(seed)] != kNoise) continue;
        const int id = next_cluster++;
        labels[static_cast<std::size_t>(seed)] = id;
        stack.assign(1, seed);
        while (!stack.empty()) {
            const Eigen::Index p = stack.back();
            stack.pop_back();
            for (Eigen::Index q : neighbors[static_cast<std::size_t>(p)]) {
                if (core[static_cast<std::size_t>(q)] && labels[static_cast<std::size_t>(q)] == kNoise) {
                    labels[static_cast<std::size_t>(q)] = id;
                    stack.push_back(q);
                }
            }
        }
    }

    for (Eigen::Index i = 0; i < n; ++i) {
        if (core[static_cast<std::size_t>(i)]) continue;
        for (Eigen::Index q : neighbors[static_cast<std::size_t>(i)]) {
            if (core[static_cast<std::size_t>(q)]) {
                labels[static_cast<std::size_t>(i)] = labels[static_cast<std::size_t>(q)];
                break;
            }
        }
    }
    return Partition{std::move(labels), next_cluster, Algorithm::dbscan};
}

}  // namespace docclust
