#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "featsel/data.hpp"
#include "featsel/random.hpp"

namespace featsel {

enum class Criterion { gini, entropy };

Criterion parse_criterion(std::string_view name);

struct TreeOptions {
    Criterion criterion = Criterion::gini;
    std::optional<std::size_t> max_depth;  ///< unset = grow until pure
    std::size_t min_samples_split = 2;
    /// Features drawn (without replacement) as split candidates at each node;
    /// 0 = all features.
    std::size_t max_features = 0;
};

struct TreeNode {
    static constexpr std::size_t leaf = static_cast<std::size_t>(-1);

    std::size_t feature = leaf;  ///< split feature, or `leaf`
    double threshold = 0.0;      ///< samples with value <= threshold go left
    std::size_t left = 0;
    std::size_t right = 0;
    std::size_t depth = 0;
    std::vector<std::size_t> class_counts;

    bool is_leaf() const noexcept { return feature == leaf; }
};

/// Binary classification tree with numeric thresholds (CART).
///
/// Splits minimise the weighted child impurity; thresholds are midpoints
/// between consecutive distinct values. Ties prefer the lower feature index
/// and then the lower threshold. A node stays a leaf when it is pure, too
/// small, at the depth limit, or has no feature with two distinct values.
class TreeModel {
public:
    static TreeModel fit(const Dataset& train, const TreeOptions& opts = {});

    /// Fits on `samples` (repeats allowed, e.g. a bootstrap bag). `rng` is
    /// only consulted when opts.max_features limits the candidates.
    static TreeModel fit_indices(const Dataset& train, std::span<const std::size_t> samples,
                                 const TreeOptions& opts, Rng* rng);

    Label predict_one(std::span<const double> x) const;
    std::vector<Label> predict(const Matrix& x) const;

    /// Feature indices used by any internal node, ascending.
    FeatureSet used_features() const;

    const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
    std::size_t depth() const;
    std::size_t leaf_count() const;
    std::size_t num_features() const noexcept { return num_features_; }
    std::size_t num_classes() const noexcept { return num_classes_; }

    std::string to_text(std::span<const std::string> feature_names,
                        std::span<const std::string> class_names) const;
    std::string to_dot(std::span<const std::string> feature_names,
                       std::span<const std::string> class_names) const;

private:
    std::vector<TreeNode> nodes_;
    std::size_t num_features_ = 0;
    std::size_t num_classes_ = 0;
};

double impurity(std::span<const std::size_t> counts, Criterion criterion);

} // namespace featsel
