#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace featsel {

/// Per-feature scores with a deterministic descending order (equal scores
/// keep ascending feature index).
struct FeatureRanking {
    std::vector<double> scores;
    std::vector<std::size_t> order;
    std::string method;
    std::optional<std::size_t> bins;
    std::optional<std::uint64_t> seed;

    std::size_t p() const noexcept { return scores.size(); }
    /// Position of each feature in `order` (0 = best).
    std::vector<std::size_t> positions() const;
    /// First `k` entries of `order`.
    std::vector<std::size_t> top(std::size_t k) const;
};

/// Builds a ranking from raw scores; throws if any score is non-finite.
FeatureRanking make_ranking(std::vector<double> scores, std::string method);

} // namespace featsel
