#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "featsel/data.hpp"
#include "featsel/ranking.hpp"

namespace featsel {

struct ReliefWeights {
    std::vector<double> w;
    std::size_t iterations = 0;
    std::size_t neighbors = 0;
    std::uint64_t seed = 0;

    FeatureRanking ranking() const;
};

/// One nearest-hit / nearest-miss update:
///   w_f <- w_f - (x_f - hit_f)^2 + (x_f - miss_f)^2
/// Inputs are expected on the [0,1] scale.
void relief_update(std::span<double> w, std::span<const double> x, std::span<const double> hit,
                   std::span<const double> miss);

struct ReliefOptions {
    /// Number of sampled queries; 0 means every sample once, in index order.
    std::size_t iterations = 0;
    std::size_t neighbors = 10;
    std::uint64_t seed = 42;
};

/// Rescales each column to [0,1] by its min and max (constant columns -> 0).
Matrix minmax_normalize(const Matrix& x);

/// ReliefF: per query, the k nearest hits and, for every other class, the
/// k nearest misses weighted by that class's prior over the non-query mass.
/// Neighbour search uses Manhattan distance on min-max scaled features;
/// ties go to the lower sample index. Weights are averaged over
/// iterations * k.
ReliefWeights relieff_weights(const Dataset& ds, const ReliefOptions& opts = {});

/// Original two-class Relief with a single nearest hit and miss per query,
/// averaged over the iteration count.
ReliefWeights relief_basic(const Dataset& ds, std::size_t iterations = 0, std::uint64_t seed = 42);

} // namespace featsel
