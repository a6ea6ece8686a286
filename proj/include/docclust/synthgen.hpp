#pragma once

#include "docclust/embx.hpp"

#include <cstdint>
#include <string_view>

namespace docclust::synth {

enum class Shift { none, covariate };

std::string_view to_string(Shift s);
Shift shift_from_string(std::string_view name);

struct BlobSpec {
    int n_clusters = 4;
    int points_per_cluster = 50;
    int dim = 32;
    double separation = 20.0;  // centroid radius, in within-cluster std units
    double noise_frac = 0.0;   // share of outliers in the final dataset
    Shift shift = Shift::none;
    double shift_magnitude = 5.0;  // std of the rank-3 perturbation
    std::uint64_t seed = 0;

    void validate() const;
    int outlier_count() const;
};

// Gaussian blobs around random sphere points, plus uniform outliers over the
// padded bounding box labelled n_clusters. Items come out shuffled.
embx::Dataset generate(const BlobSpec& spec);

}  // namespace docclust::synth
