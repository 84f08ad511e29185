#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "featsel/data.hpp"

namespace featsel {

/// 2 * I(a;b) / (H(a) + H(b)); 0 when both codings are constant.
double symmetrical_uncertainty(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

/// Feature-class and feature-feature symmetrical uncertainties over a shared
/// discretization. Pairwise values are filled on first use, or eagerly when
/// p <= 64. Lazy fills mutate internal state, so share a cache across
/// threads only after precompute().
class CorrelationCache {
public:
    CorrelationCache(const DiscretizedView& dv, std::span<const Label> y);

    std::size_t p() const noexcept { return r_cf_.size(); }
    double r_cf(std::size_t f) const { return r_cf_[f]; }
    const std::vector<double>& r_cf() const noexcept { return r_cf_; }
    double r_ff(std::size_t a, std::size_t b) const;

    void precompute() const;

private:
    const DiscretizedView* dv_;
    std::vector<double> r_cf_;
    mutable std::vector<double> r_ff_;  // p*p, NaN = not yet computed
};

/// Merit of a subset from its mean feature-class and mean pairwise
/// feature-feature correlations.
double merit(std::span<const std::size_t> subset, const CorrelationCache& cache);

/// Merit from explicit averages (k = subset size).
double merit_from_means(std::size_t k, double mean_rcf, double mean_rff);

struct MeritStep {
    FeatureSet subset;  ///< ascending feature indices
    double merit = 0.0;
};

struct MeritTrace {
    std::vector<MeritStep> steps;       ///< every evaluated subset, in order
    std::vector<MeritStep> expansions;  ///< subsets popped for expansion, in order
    FeatureSet best_subset;
    double best_merit = 0.0;
    FeatureSet final_subset;  ///< last expanded subset when the search stopped
};

struct CfsOptions {
    /// Consecutive non-improving expansions before stopping; 0 disables the
    /// cutoff (the search then visits every subset).
    std::size_t stall_limit = 5;
};

/// Best-first forward search on merit. The open list is ordered by merit,
/// ties by lexicographically smaller subset; a subset replaces the incumbent
/// only with strictly higher merit, or equal merit and fewer features.
MeritTrace cfs_search(const DiscretizedView& dv, std::span<const Label> y,
                      const CfsOptions& opts = {});

} // namespace featsel
