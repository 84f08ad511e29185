#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "featsel/classify.hpp"
#include "featsel/data.hpp"
#include "featsel/ranking.hpp"

namespace featsel {

struct TraceStep {
    FeatureSet subset;  ///< ascending feature indices
    double cv_accuracy = 0.0;
};

struct SubsetResult {
    FeatureSet selected;
    double selected_accuracy = 0.0;
    std::vector<TraceStep> trace;
    std::string stopping_rule;
    KnnConfig classifier;
    std::size_t folds = 0;
    std::uint64_t fold_seed = 0;
};

/// Cross-validated k-NN accuracy using only the columns in `subset`.
double evaluate_subset(const Dataset& ds, const FeatureSet& subset, const FoldAssignment& folds,
                       const KnnConfig& config);

/// Every non-empty subset; best by accuracy, then fewer features, then
/// lexicographic order.
SubsetResult exhaustive_search(const Dataset& ds, const FoldAssignment& folds,
                               const KnnConfig& config, std::size_t max_p = 20);

/// Sequential forward selection. Each step adds the single feature with the
/// best accuracy (ties: lower index). With `run_to_completion` the search
/// continues to all p features and returns the best traced subset (ties:
/// the smaller one); otherwise it stops at the first non-improving step.
SubsetResult sfs(const Dataset& ds, const FoldAssignment& folds, const KnnConfig& config,
                 bool run_to_completion = true);

/// Backward elimination from the full set. Each step drops the feature whose
/// removal gives the best accuracy (ties: drop the higher index). The trace
/// starts with the full set.
SubsetResult backward_elimination(const Dataset& ds, const FoldAssignment& folds,
                                  const KnnConfig& config, bool run_to_completion = true);

/// Evaluates nested prefixes of `ranking` and keeps the shortest prefix that
/// reaches the best traced accuracy.
SubsetResult hybrid_filter_wrapper(const Dataset& ds, const FeatureRanking& ranking,
                                   const FoldAssignment& folds, const KnnConfig& config);

/// Hex bitmask of a subset, lowest feature in the least significant bit.
std::string subset_mask_hex(const FeatureSet& subset, std::size_t p);

} // namespace featsel
