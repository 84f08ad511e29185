#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "featsel/data.hpp"
#include "featsel/ranking.hpp"

namespace featsel {

/// Feature-bin by class counts with marginals.
struct ContingencyTable {
    std::vector<std::vector<std::size_t>> counts;  ///< counts[row][col]
    std::vector<std::size_t> row_totals;
    std::vector<std::size_t> col_totals;
    std::size_t total = 0;

    static ContingencyTable from_counts(std::vector<std::vector<std::size_t>> counts);
    /// Cross-tabulates two integer codings of the same samples.
    static ContingencyTable build(std::span<const std::uint32_t> rows,
                                  std::span<const Label> cols, std::size_t num_rows,
                                  std::size_t num_cols);
};

/// Pearson chi-square statistic with expected counts from the marginals.
double chi_square(const ContingencyTable& t);

/// Shannon entropy (bits) of a label vector.
double entropy(std::span<const Label> y);
/// Entropy (bits) of a count vector.
double entropy_of_counts(std::span<const std::size_t> counts);

/// H(Y) - H(Y | X) in bits, from the joint table.
double information_gain(const ContingencyTable& t);

double chi_square_score(const DiscretizedView& dv, std::span<const Label> y,
                        std::size_t num_classes, std::size_t feature);
double info_gain_score(const DiscretizedView& dv, std::span<const Label> y,
                       std::size_t num_classes, std::size_t feature);

enum class RankMethod { chi2, igain, relieff, rf_importance };

std::string_view rank_method_name(RankMethod m);
RankMethod parse_rank_method(std::string_view name);

struct RankOptions {
    std::size_t bins = 10;
    std::uint64_t seed = 42;
    // ReliefF
    std::size_t relief_neighbors = 10;
    std::size_t relief_iterations = 0;  ///< 0 = one pass over every sample
    // Random forest
    std::size_t forest_trees = 100;
    std::size_t importance_repeats = 5;
};

FeatureRanking rank_discretized(const DiscretizedView& dv, std::span<const Label> y,
                                std::size_t num_classes, RankMethod method);

/// Scores every feature of `ds`. chi2 and igain bin the data first; relieff
/// and rf_importance delegate to their modules.
FeatureRanking rank_features(const Dataset& ds, RankMethod method, const RankOptions& opts = {});

struct SelectionPolicy {
    enum class Kind { top_k, top_fraction, above_half_max, nonzero };
    Kind kind = Kind::top_k;
    std::size_t k = 0;
    double fraction = 0.5;

    static SelectionPolicy top_k_of(std::size_t k) { return {Kind::top_k, k, 0.5}; }
    static SelectionPolicy top_fraction_of(double f) { return {Kind::top_fraction, 0, f}; }
    static SelectionPolicy above_half_max() { return {Kind::above_half_max, 0, 0.5}; }
    static SelectionPolicy nonzero() { return {Kind::nonzero, 0, 0.5}; }
};

/// Selected feature indices, listed in ranking order.
FeatureSet apply_policy(const FeatureRanking& r, const SelectionPolicy& policy);

enum class CorrelationKind { pearson, spearman };

double pearson(std::span<const double> a, std::span<const double> b);
/// Ranks starting at 1; tied values share their average rank.
std::vector<double> average_ranks(std::span<const double> v);
double spearman(std::span<const double> a, std::span<const double> b);

double rank_correlation(const FeatureRanking& a, const FeatureRanking& b, CorrelationKind kind);

} // namespace featsel
