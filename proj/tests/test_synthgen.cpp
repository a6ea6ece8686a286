#include "docclust/embx.hpp"
#include "docclust/error.hpp"
#include "docclust/kmeans.hpp"
#include "docclust/metrics.hpp"
#include "docclust/synthgen.hpp"

#include <doctest.h>

#include <map>

using namespace docclust;

TEST_CASE("generation is deterministic and valid") {
    synth::BlobSpec spec;
    spec.seed = 9;
    spec.noise_frac = 0.1;
    spec.shift = synth::Shift::covariate;
    const auto a = synth::generate(spec);
    CHECK(a == synth::generate(spec));
    embx::validate(a);
    spec.seed = 10;
    CHECK_FALSE(a == synth::generate(spec));
}

TEST_CASE("label counts match the blob settings") {
    synth::BlobSpec spec;
    spec.n_clusters = 5;
    spec.points_per_cluster = 13;
    spec.noise_frac = 0.2;
    const auto ds = synth::generate(spec);
    std::map<int, int> counts;
    const auto labels = ds.labels();
    for (int l : *labels) ++counts[l];
    for (int c = 0; c < 5; ++c) CHECK(counts[c] == 13);
    CHECK(counts[5] == spec.outlier_count());
    // 65 clean points at 20 % outliers
    CHECK(spec.outlier_count() == 16);
    CHECK(ds.size() == 81);
    CHECK(ds.dim == spec.dim);
}

TEST_CASE("separation controls recoverability") {
    synth::BlobSpec spec;
    spec.seed = 2;
    const auto far = synth::generate(spec);
    const auto p = kmeans(far.vectors(), {4, 300, 0, 0.0});
    CHECK(metrics::adjusted_rand(p.labels, *far.labels()) == doctest::Approx(1.0));

    spec.separation = 0.0;
    const auto none = synth::generate(spec);
    const auto q = kmeans(none.vectors(), {4, 300, 0, 0.0});
    CHECK(std::abs(metrics::adjusted_rand(q.labels, *none.labels())) < 0.05);
}

TEST_CASE("blob settings are validated") {
    synth::BlobSpec bad;
    bad.noise_frac = 1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = {};
    bad.n_clusters = 0;
    CHECK_THROWS_AS(synth::generate(bad), ConfigError);
    CHECK(synth::shift_from_string("covariate") == synth::Shift::covariate);
    CHECK_THROWS(synth::shift_from_string("rotate"));
}
