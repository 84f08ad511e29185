#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "featsel/data.hpp"
#include "featsel/random.hpp"
#include "featsel/ranking.hpp"
#include "featsel/tree.hpp"

namespace featsel {

struct ForestOptions {
    std::size_t n_trees = 100;
    std::uint64_t seed = 42;
    std::size_t mtry = 0;  ///< 0 = floor(sqrt(p))
    /// false trains every tree on the full sample with an empty OOB set
    /// (degenerate forest, for testing).
    bool bootstrap = true;
    Criterion criterion = Criterion::gini;
};

/// Bagged trees with per-split random feature subsets. Tree t draws its bag
/// and feature subsets from Rng(mix_seed(seed, t)), so each tree is
/// independent of training order.
class ForestModel {
public:
    static ForestModel fit(const Dataset& train, const ForestOptions& opts = {});

    const std::vector<TreeModel>& trees() const noexcept { return trees_; }
    /// in_bag[t][i]: sample i was drawn at least once for tree t.
    const std::vector<std::vector<bool>>& in_bag() const noexcept { return in_bag_; }
    std::size_t mtry() const noexcept { return mtry_; }
    std::size_t n_trees() const noexcept { return trees_.size(); }
    std::uint64_t seed() const noexcept { return seed_; }
    std::size_t num_classes() const noexcept { return num_classes_; }

    /// Majority vote of all trees (ties: smaller class id).
    std::vector<Label> predict(const Matrix& x) const;

    /// Mean over trees of the out-of-bag share of samples.
    double oob_fraction() const;

    /// Out-of-bag sample indices for tree t, ascending.
    std::vector<std::size_t> oob_indices(std::size_t t) const;

private:
    std::vector<TreeModel> trees_;
    std::vector<std::vector<bool>> in_bag_;
    std::size_t mtry_ = 0;
    std::uint64_t seed_ = 0;
    std::size_t num_classes_ = 0;
};

struct OobReport {
    double accuracy = 0.0;
    std::size_t covered = 0;   ///< samples out-of-bag in at least one tree
    std::size_t excluded = 0;  ///< samples in every bag
};

/// Each sample is predicted by the trees that did not see it. Throws
/// DataError when no sample is out-of-bag anywhere.
OobReport rf_oob_report(const ForestModel& model, const Dataset& train);
double rf_oob_accuracy(const ForestModel& model, const Dataset& train);

/// Per feature: mean over trees and repeats of (OOB accuracy - OOB accuracy
/// with the feature's OOB values permuted). Trees with an empty OOB set are
/// skipped; a feature a tree never splits on contributes exactly 0 for that
/// tree.
FeatureRanking rf_permutation_importance(const ForestModel& model, const Dataset& train,
                                         std::size_t repeats, std::uint64_t seed);

} // namespace featsel
