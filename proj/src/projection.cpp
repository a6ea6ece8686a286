#include "docclust/projection.hpp"

#include "docclust/error.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace docclust::projection {

int default_kernel(Eigen::Index dim) {
    for (int k = 8; k >= 1; --k)
        if (dim % k == 0) return k;
    return 1;
}

DocVector mean_pool(const embx::TokenEmbeddings& te) {
    if (te.rows() < 1) throw DataError("mean_pool: empty sequence");
    return {te.doc_id, te.matrix.cast<double>().colwise().mean().transpose(), Strategy::mean};
}

DocVector hybrid_pool(const embx::TokenEmbeddings& te, const HybridConfig& cfg) {
    const Eigen::Index dim = te.cols();
    if (cfg.kernel < 1 || dim % cfg.kernel != 0)
        throw ConfigError("hybrid_pool: kernel " + std::to_string(cfg.kernel) +
                          " does not divide hidden size " + std::to_string(dim));
    const Eigen::Index text_rows = te.text_rows;
    const Eigen::Index image_rows = te.image_rows();
    if (text_rows < 1 || image_rows < 1)
        throw DataError("hybrid_pool: " + te.doc_id + " lacks a " +
                        (text_rows < 1 ? "text" : "image") + " span; use mean pooling instead");

    const Matrix h = te.matrix.cast<double>();
    const Eigen::Index pooled_dim = dim / cfg.kernel;
    Vector out(dim + pooled_dim);
    out.head(dim) = h.topRows(text_rows).colwise().mean().transpose();

    Vector pooled_sum = Vector::Zero(pooled_dim);
    for (Eigen::Index r = text_rows; r < te.rows(); ++r)
        for (Eigen::Index w = 0; w < pooled_dim; ++w)
            pooled_sum(w) += h.row(r).segment(w * cfg.kernel, cfg.kernel).maxCoeff();
    out.tail(pooled_dim) = pooled_sum / static_cast<double>(image_rows);
    return {te.doc_id, std::move(out), Strategy::hybrid};
}

DocVector cls_pool(const embx::TokenEmbeddings& te) {
    if (te.rows() < 1) throw DataError("cls_pool: empty sequence");
    return {te.doc_id, te.matrix.row(0).cast<double>().transpose(), Strategy::cls};
}

PcaModel fit_pca(const Matrix& data, int target_dim) {
    const Eigen::Index n = data.rows();
    const Eigen::Index d = data.cols();
    if (n < 2) throw DataError("pca: need at least two vectors");
    if (target_dim < 1 || target_dim > std::min(n, d))
        throw ConfigError("pca: target_dim " + std::to_string(target_dim) + " outside [1, " +
                          std::to_string(std::min(n, d)) + "]");

    PcaModel model;
    model.mean = data.colwise().mean().transpose();
    const Matrix centered = data.rowwise() - model.mean.transpose();
    Eigen::JacobiSVD<Matrix> svd(centered, Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const double cutoff =
        sv.size() ? sv(0) * static_cast<double>(std::max(n, d)) * std::numeric_limits<double>::epsilon() : 0.0;
    Eigen::Index nonzero = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff && sv(i) > 0.0) ++nonzero;
    if (nonzero < target_dim)
        throw DataError("pca: data has rank " + std::to_string(nonzero) + " < target_dim " +
                        std::to_string(target_dim));

    model.axes = svd.matrixV().leftCols(target_dim);
    for (Eigen::Index c = 0; c < model.axes.cols(); ++c) {
        Eigen::Index arg = 0;
        model.axes.col(c).cwiseAbs().maxCoeff(&arg);
        if (model.axes(arg, c) < 0) model.axes.col(c) *= -1.0;
    }
    model.singular_values = sv.head(target_dim);
    return model;
}

std::vector<DocVector> pca_reduce(const std::vector<DocVector>& vectors, int target_dim) {
    const Matrix data = stack_rows(vectors);
    const PcaModel model = fit_pca(data, target_dim);
    const Matrix projected = (data.rowwise() - model.mean.transpose()) * model.axes;
    std::vector<DocVector> out;
    out.reserve(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i)
        out.push_back({vectors[i].doc_id, projected.row(static_cast<Eigen::Index>(i)).transpose(), Strategy::pca});
    return out;
}

}  // namespace docclust::projection
