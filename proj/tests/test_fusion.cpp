#include "docclust/error.hpp"
#include "docclust/fusion.hpp"
#include "test_util.hpp"

#include <doctest.h>

using namespace docclust;
using namespace docclust::fusion;

namespace {

Vector v2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

Matrix empirical_cov(const Matrix& x) {
    const Matrix c = x.rowwise() - x.colwise().mean();
    return c.transpose() * c / static_cast<double>(x.rows() - 1);
}

}  // namespace

TEST_CASE("fuse") {
    const Vector t = v2(3, 4), g = v2(0, -2);
    CHECK((fuse(t, g, 1.0, {}) - v2(0.6, 0.8)).norm() < 1e-15);
    CHECK((fuse(t, g, 0.0, {}) - v2(0, -1)).norm() < 1e-15);

    const Vector a = v2(1, 0), b = v2(0, 1);
    const Vector half = fuse(a, b, 0.5, {});
    CHECK(half.dot(a) == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(half.dot(b) == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(half.norm() == doctest::Approx(1.0).epsilon(1e-15));

    // null confidence is neutral
    CHECK(fuse(a, b, std::nullopt, {}) == half);
    CHECK(text_weight(std::nullopt, {}) == 0.5);
    CHECK(text_weight(0.1, {FusionMode::convex, 0.3}) == 0.3);
    CHECK(text_weight(0.9, {FusionMode::convex, 0.3}) == 0.9);

    Vector g3(3);
    g3 << 0, 0, 2;
    const Vector cat = fuse(a, g3, 0.25, {FusionMode::concat, 0.0});
    REQUIRE(cat.size() == 5);
    Vector expect(5);
    expect << 0.25, 0, 0, 0, 0.75;
    CHECK((cat - expect).norm() < 1e-15);

    CHECK_THROWS_AS(fuse(a, g3, 0.5, {}), Error);
    CHECK_THROWS_AS(fuse(v2(0, 0), b, 0.5, {}), DataError);
    CHECK_THROWS(text_weight(1.5, {}));
    CHECK_THROWS_AS(text_weight(0.5, {FusionMode::convex, 2.0}), ConfigError);
}

TEST_CASE("group stats") {
    Matrix anti(2, 2);
    anti << 1, 0, -1, 0;
    const auto s = fit_stats(anti, "en");
    CHECK(s.mean.norm() == 0.0);
    CHECK(s.covariance(0, 0) == doctest::Approx(2.0));
    Eigen::SelfAdjointEigenSolver<Matrix> es(s.covariance);
    CHECK(es.eigenvalues()(0) == doctest::Approx(0.0));
    CHECK_FALSE(s.degenerate);

    Matrix same(3, 2);
    same << 1, 2, 1, 2, 1, 2;
    CHECK(fit_stats(same).covariance.norm() == 0.0);

    Matrix mixed(5, 2);
    mixed << 0, 0, 2, 2, 10, 10, 12, 8, 7, 7;
    const auto groups = fit_group_stats(mixed, {"fr", "fr", "de", "de", "zh"});
    REQUIRE(groups.size() == 3);
    CHECK(groups[0].key == "de");
    CHECK((groups[0].mean - v2(11, 9)).norm() < 1e-15);
    CHECK(groups[1].key == "fr");
    CHECK(groups[1].count == 2);
    CHECK(groups[2].degenerate);
    CHECK(groups[2].covariance.norm() == 0.0);
}

TEST_CASE("coral") {
    const auto x = testutil::gaussian(300, 3, 14);
    Matrix mix(3, 3);
    mix << 2, 0.3, 0, 0, 1, 0.5, 0.2, 0, 0.7;
    const Matrix src_x = (x * mix).rowwise() + Eigen::RowVector3d(4, -1, 2);
    const auto src = fit_stats(src_x);

    SUBCASE("identical stats are the identity") {
        CHECK((coral_align(src_x, src, src) - src_x).cwiseAbs().maxCoeff() < 1e-9);
    }
    SUBCASE("whitening") {
        const Matrix out = coral_align(src_x, src, identity_stats(3), 1e-9);
        CHECK(out.colwise().mean().cwiseAbs().maxCoeff() < 1e-12);
        CHECK((empirical_cov(out) - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-6);
    }
    SUBCASE("pure translation") {
        GroupStats ref = src;
        ref.mean = Eigen::Vector3d(-7, 0.5, 3);
        const Matrix out = coral_align(src_x, src, ref);
        const Matrix expect = (src_x.rowwise() - src.mean.transpose()).rowwise() + ref.mean.transpose();
        CHECK((out - expect).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("output mean lands on the reference") {
        GroupStats ref = fit_stats(testutil::gaussian(100, 3, 15, 3.0));
        const Matrix out = coral_align(src_x, src, ref);
        CHECK((out.colwise().mean().transpose() - ref.mean).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("indefinite covariance is rejected") {
        GroupStats bad = src;
        bad.covariance(0, 0) = -50;
        CHECK_THROWS_AS(coral_align(src_x, bad, src, 1e-9), DataError);
    }
}

TEST_CASE("ridge and matrix powers") {
    Matrix c = Matrix::Zero(2, 2);
    c(0, 0) = 4;
    c(1, 1) = 2;
    CHECK(default_ridge(c) == doctest::Approx(3e-3));
    CHECK(default_ridge(Matrix::Zero(2, 2)) > 0.0);
    const Matrix r = symmetric_power(c, 0.5);
    CHECK((r * r - c).norm() < 1e-12);
    CHECK((symmetric_power(c, -0.5) * r - Matrix::Identity(2, 2)).norm() < 1e-12);
}
