#include "docclust/synthgen.hpp"

#include "docclust/error.hpp"
#include "docclust/rng.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

namespace docclust::synth {

std::string_view to_string(Shift s) { return s == Shift::none ? "none" : "covariate"; }

Shift shift_from_string(std::string_view name) {
    if (name == "none") return Shift::none;
    if (name == "covariate") return Shift::covariate;
    throw ConfigError("unknown shift '" + std::string(name) + "'");
}

void BlobSpec::validate() const {
    if (n_clusters < 1) throw ConfigError("synth: n_clusters must be positive");
    if (points_per_cluster < 1) throw ConfigError("synth: points_per_cluster must be positive");
    if (dim < 1) throw ConfigError("synth: dim must be positive");
    if (!(separation >= 0.0) || !std::isfinite(separation)) throw ConfigError("synth: separation must be >= 0");
    if (!(noise_frac >= 0.0 && noise_frac < 1.0)) throw ConfigError("synth: noise_frac must be in [0, 1)");
    if (!(shift_magnitude >= 0.0) || !std::isfinite(shift_magnitude))
        throw ConfigError("synth: shift_magnitude must be >= 0");
}

int BlobSpec::outlier_count() const {
    const double clean = static_cast<double>(n_clusters) * points_per_cluster;
    return static_cast<int>(std::floor(noise_frac * clean / (1.0 - noise_frac) + 0.5));
}

namespace {

Matrix gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
    return m;
}

}  // namespace

embx::Dataset generate(const BlobSpec& spec) {
    spec.validate();
    const Eigen::Index d = spec.dim;
    const Eigen::Index clean = static_cast<Eigen::Index>(spec.n_clusters) * spec.points_per_cluster;
    const Eigen::Index total = clean + spec.outlier_count();

    Rng centre_rng(mix_seed(spec.seed, 1));
    Matrix centroids = gaussian(centre_rng, spec.n_clusters, d);
    for (Eigen::Index k = 0; k < centroids.rows(); ++k) {
        double norm = centroids.row(k).norm();
        while (norm == 0.0) {
            centroids.row(k) = gaussian(centre_rng, 1, d);
            norm = centroids.row(k).norm();
        }
        centroids.row(k) *= spec.separation / norm;
    }

    Rng point_rng(mix_seed(spec.seed, 2));
    Matrix x(total, d);
    std::vector<int> labels(static_cast<std::size_t>(total));
    for (Eigen::Index i = 0; i < clean; ++i) {
        const auto k = static_cast<int>(i / spec.points_per_cluster);
        x.row(i) = centroids.row(k) + gaussian(point_rng, 1, d);
        labels[static_cast<std::size_t>(i)] = k;
    }
    if (total > clean) {
        const Eigen::RowVectorXd lo = x.topRows(clean).colwise().minCoeff().array() - 3.0;
        const Eigen::RowVectorXd hi = x.topRows(clean).colwise().maxCoeff().array() + 3.0;
        Rng out_rng(mix_seed(spec.seed, 3));
        for (Eigen::Index i = clean; i < total; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) x(i, j) = out_rng.uniform(lo(j), hi(j));
            labels[static_cast<std::size_t>(i)] = spec.n_clusters;
        }
    }

    if (spec.shift == Shift::covariate && spec.shift_magnitude > 0.0) {
        Rng shift_rng(mix_seed(spec.seed, 4));
        const Eigen::Index rank = std::min<Eigen::Index>(3, d);
        const Matrix basis = Eigen::HouseholderQR<Matrix>(gaussian(shift_rng, d, rank)).householderQ() *
                             Matrix::Identity(d, rank);
        x += spec.shift_magnitude * gaussian(shift_rng, total, rank) * basis.transpose();
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(total));
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(mix_seed(spec.seed, 5));
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle_rng.index(i)]);

    std::vector<std::string> ids;
    Matrix shuffled(total, d);
    char buf[32];
    for (Eigen::Index i = 0; i < total; ++i) {
        shuffled.row(i) = x.row(order[static_cast<std::size_t>(i)]);
        std::snprintf(buf, sizeof buf, "doc-%06ld", static_cast<long>(i));
        ids.emplace_back(buf);
    }
    embx::Dataset ds = embx::from_vectors(shuffled, ids);
    for (Eigen::Index i = 0; i < total; ++i)
        ds.items[static_cast<std::size_t>(i)].label = labels[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    return ds;
}

}  // namespace docclust::synth
