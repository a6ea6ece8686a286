#include "docclust/fusion.hpp"

#include "docclust/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace docclust::fusion {

std::string_view to_string(FusionMode m) { return m == FusionMode::convex ? "convex" : "concat"; }

FusionMode fusion_mode_from_string(std::string_view name) {
    if (name == "convex") return FusionMode::convex;
    if (name == "concat") return FusionMode::concat;
    throw ConfigError("unknown fusion mode '" + std::string(name) + "'");
}

double text_weight(std::optional<double> ocr_conf, const FusionConfig& cfg) {
    if (!(cfg.weight_floor >= 0.0 && cfg.weight_floor <= 1.0)) throw ConfigError("weight_floor must be in [0, 1]");
    if (ocr_conf && !(*ocr_conf >= 0.0 && *ocr_conf <= 1.0)) throw DataError("ocr confidence outside [0, 1]");
    return std::clamp(std::max(cfg.weight_floor, ocr_conf.value_or(0.5)), cfg.weight_floor, 1.0);
}

Vector fuse(const Vector& text, const Vector& vision, std::optional<double> ocr_conf, const FusionConfig& cfg) {
    const double w = text_weight(ocr_conf, cfg);
    const double nt = text.norm(), ng = vision.norm();
    if (nt == 0.0 || ng == 0.0) throw DataError("fuse: zero-norm view");
    const Vector t = text / nt, g = vision / ng;
    if (cfg.mode == FusionMode::concat) {
        Vector out(t.size() + g.size());
        out << w * t, (1.0 - w) * g;
        return out;
    }
    if (t.size() != g.size())
        throw DataError("fuse: convex mode needs equal dims, got " + std::to_string(t.size()) + " and " +
                        std::to_string(g.size()));
    const Vector v = w * t + (1.0 - w) * g;
    const double nv = v.norm();
    if (nv == 0.0) throw DataError("fuse: views cancel out");
    return v / nv;
}

GroupStats fit_stats(const Matrix& vectors, std::string key) {
    if (vectors.rows() == 0) throw DataError("group '" + key + "' is empty");
    GroupStats s;
    s.key = std::move(key);
    s.count = vectors.rows();
    s.mean = vectors.colwise().mean().transpose();
    s.covariance = Matrix::Zero(vectors.cols(), vectors.cols());
    if (s.count < 2) {
        s.degenerate = true;
        return s;
    }
    const Matrix centered = vectors.rowwise() - s.mean.transpose();
    s.covariance = centered.transpose() * centered / static_cast<double>(s.count - 1);
    s.covariance = 0.5 * (s.covariance + s.covariance.transpose()).eval();
    return s;
}

std::vector<GroupStats> fit_group_stats(const Matrix& vectors, const std::vector<std::string>& keys) {
    if (static_cast<std::size_t>(vectors.rows()) != keys.size())
        throw DataError("fit_group_stats: " + std::to_string(keys.size()) + " keys for " +
                        std::to_string(vectors.rows()) + " vectors");
    std::map<std::string, std::vector<Eigen::Index>> rows;
    for (std::size_t i = 0; i < keys.size(); ++i) rows[keys[i]].push_back(static_cast<Eigen::Index>(i));
    std::vector<GroupStats> out;
    for (const auto& [key, idx] : rows) out.push_back(fit_stats(vectors(idx, Eigen::all), key));
    return out;
}

GroupStats identity_stats(Eigen::Index dim) {
    GroupStats s;
    s.key = "identity";
    s.mean = Vector::Zero(dim);
    s.covariance = Matrix::Identity(dim, dim);
    return s;
}

double default_ridge(const Matrix& covariance) {
    const double r = 1e-3 * covariance.trace() / static_cast<double>(covariance.rows());
    return r > 0.0 ? r : 1e-12;
}

Matrix symmetric_power(const Matrix& m, double power) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
    if (eig.info() != Eigen::Success) throw DataError("eigendecomposition failed");
    const Vector& ev = eig.eigenvalues();
    const double lo = ev.minCoeff(), hi = ev.maxCoeff();
    if (!(lo > 0.0)) {
        std::ostringstream msg;
        msg << "matrix is not positive definite after ridge: min eigenvalue " << lo << ", max eigenvalue " << hi;
        throw DataError(msg.str());
    }
    if (hi / lo > 1e15) {
        std::ostringstream msg;
        msg << "matrix is numerically singular: condition number " << hi / lo;
        throw DataError(msg.str());
    }
    const Vector scaled = ev.array().pow(power).matrix();
    return eig.eigenvectors() * scaled.asDiagonal() * eig.eigenvectors().transpose();
}

Matrix coral_align(const Matrix& source, const GroupStats& src, const GroupStats& ref, std::optional<double> ridge) {
    const Eigen::Index d = source.cols();
    if (src.mean.size() != d || ref.mean.size() != d || src.covariance.rows() != d || ref.covariance.rows() != d)
        throw DataError("coral_align: dimension mismatch");
    if (ridge && !(*ridge > 0.0)) throw ConfigError("coral_align: ridge must be positive");
    const double rs = ridge.value_or(default_ridge(src.covariance));
    const double rr = ridge.value_or(default_ridge(ref.covariance));
    const Matrix id = Matrix::Identity(d, d);
    const Matrix transport =
        symmetric_power(src.covariance + rs * id, -0.5) * symmetric_power(ref.covariance + rr * id, 0.5);
    return ((source.rowwise() - src.mean.transpose()) * transport).rowwise() + ref.mean.transpose();
}

}  // namespace docclust::fusion
