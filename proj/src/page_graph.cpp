#include "docclust/page_graph.hpp"

#include "docclust/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace docclust::pagegraph {

namespace {

void check(const PageGraphConfig& cfg) {
    if (!(cfg.lambda_seq > 0.0)) throw ConfigError("page graph: lambda_seq must be positive");
    if (!(cfg.lambda_sim > 0.0)) throw ConfigError("page graph: lambda_sim must be positive");
    if (cfg.sem_k < 1) throw ConfigError("page graph: sem_k must be positive");
    if (cfg.smoothing_steps != 1 && cfg.smoothing_steps != 2)
        throw ConfigError("page graph: smoothing_steps must be 1 or 2");
    if (!(cfg.temperature > 0.0)) throw ConfigError("page graph: temperature must be positive");
}

double cosine(const Vector& a, const Vector& b) {
    const double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return a.dot(b) / (na * nb);
}

}  // namespace

Matrix cosine_similarity(const Matrix& rows) {
    const Eigen::Index n = rows.rows();
    Matrix sim(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) sim(i, j) = sim(j, i) = cosine(rows.row(i), rows.row(j));
    return sim;
}

PageGraph build_page_graph_from_similarity(const Matrix& similarity, const PageGraphConfig& cfg) {
    check(cfg);
    const Eigen::Index n = similarity.rows();
    if (n < 1) throw DataError("page graph: document has no pages");
    if (similarity.cols() != n) throw DataError("page graph: similarity matrix is not square");

    PageGraph g;
    g.adjacency = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) g.adjacency(i, i) = 1.0;
    for (Eigen::Index i = 0; i + 1 < n; ++i) g.adjacency(i, i + 1) = g.adjacency(i + 1, i) = cfg.lambda_seq;

    std::vector<Eigen::Index> candidates;
    for (Eigen::Index i = 0; i < n; ++i) {
        candidates.clear();
        for (Eigen::Index j = 0; j < n; ++j)
            if (std::abs(i - j) > 1) candidates.push_back(j);
        const auto take = std::min<std::size_t>(static_cast<std::size_t>(cfg.sem_k), candidates.size());
        std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take), candidates.end(),
                          [&](Eigen::Index a, Eigen::Index b) {
                              if (similarity(i, a) != similarity(i, b)) return similarity(i, a) > similarity(i, b);
                              return a < b;
                          });
        for (std::size_t c = 0; c < take; ++c) {
            const Eigen::Index j = candidates[c];
            // Weight depends on the unordered pair only, so either endpoint selecting it yields the same edge.
            const double w = cfg.lambda_sim * std::max(0.0, 0.5 * (similarity(i, j) + similarity(j, i)));
            if (w > 0.0) g.adjacency(i, j) = g.adjacency(j, i) = w;
        }
    }

    g.degrees = g.adjacency.rowwise().sum();
    g.normalized = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = g.adjacency(i, j) / std::sqrt(g.degrees(i) * g.degrees(j));
            g.normalized(i, j) = g.normalized(j, i) = v;
        }
    return g;
}

PageGraph build_page_graph(const Matrix& pages, const PageGraphConfig& cfg) {
    return build_page_graph_from_similarity(cosine_similarity(pages), cfg);
}

Matrix smooth(const Matrix& pages, const PageGraph& graph, int steps) {
    if (steps != 1 && steps != 2) throw ConfigError("smooth: steps must be 1 or 2");
    if (graph.normalized.cols() != pages.rows())
        throw DataError("smooth: graph has " + std::to_string(graph.normalized.cols()) + " nodes but " +
                        std::to_string(pages.rows()) + " pages were given");
    Matrix out = graph.normalized * pages;
    if (steps == 2) out = graph.normalized * out;
    return out;
}

AttentionPool attention_pool(const Matrix& smoothed, const PageGraphConfig& cfg) {
    check(cfg);
    const Eigen::Index n = smoothed.rows();
    if (n < 1) throw DataError("attention_pool: no pages");
    const Vector prototype = smoothed.colwise().mean().transpose();

    Vector scores(n);
    for (Eigen::Index i = 0; i < n; ++i) scores(i) = cosine(smoothed.row(i).transpose(), prototype) / cfg.temperature;
    const double top = scores.maxCoeff();
    Vector weights = (scores.array() - top).exp().matrix();
    weights /= weights.sum();

    Vector doc = smoothed.transpose() * weights;
    const double norm = doc.norm();
    if (!(norm > 0.0)) throw DataError("attention_pool: pooled document vector has zero norm");
    return {doc / norm, std::move(weights)};
}

Vector aggregate_document(const Matrix& pages, const PageGraphConfig& cfg) {
    const PageGraph g = build_page_graph(pages, cfg);
    return attention_pool(smooth(pages, g, cfg.smoothing_steps), cfg).document;
}

}  // namespace docclust::pagegraph
