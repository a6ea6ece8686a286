#pragma once

#include "docclust/types.hpp"

namespace docclust::pagegraph {

struct PageGraphConfig {
    double lambda_seq = 1.0;
    double lambda_sim = 0.5;
    int sem_k = 1;
    int smoothing_steps = 1;
    double temperature = 0.1;
};

// A: weighted adjacency with unit self-loops; degrees: row sums of A;
// normalized: D^-1/2 A D^-1/2, filled symmetrically.
struct PageGraph {
    Matrix adjacency;
    Vector degrees;
    Matrix normalized;
};

// Pages i and i+1 are joined with lambda_seq. Each page additionally picks its
// sem_k most similar non-adjacent pages (ties to the lower index); a pair is
// joined with lambda_sim * max(0, cos) when either end picks the other, and
// omitted when that weight is zero. `similarity` is the n x n cosine matrix.
PageGraph build_page_graph_from_similarity(const Matrix& similarity, const PageGraphConfig& cfg);

// Same, with cosines computed from page vectors (rows of `pages`). A zero-norm
// page has cosine 0 with everything.
PageGraph build_page_graph(const Matrix& pages, const PageGraphConfig& cfg);

Matrix cosine_similarity(const Matrix& rows);

// Applies the normalized operator `steps` times (1 or 2).
Matrix smooth(const Matrix& pages, const PageGraph& graph, int steps);

struct AttentionPool {
    Vector document;  // unit norm
    Vector weights;   // softmax attention over pages, sums to 1
};

// Softmax over cos(row_i, row mean) / temperature, then the weighted row sum
// is L2-normalized. A zero-norm row (or a zero mean) scores cosine 0.
AttentionPool attention_pool(const Matrix& smoothed, const PageGraphConfig& cfg);

// build_page_graph -> smooth -> attention_pool.
Vector aggregate_document(const Matrix& pages, const PageGraphConfig& cfg);

}  // namespace docclust::pagegraph
