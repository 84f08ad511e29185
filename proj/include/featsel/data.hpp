#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "featsel/linalg.hpp"

namespace featsel {

using Label = std::size_t;
using FeatureSet = std::vector<std::size_t>;

/// Numeric object-feature matrix with class labels.
///
/// Rows are samples, columns are features. Class ids are contiguous
/// 0..num_classes()-1 and index `class_names`.
class Dataset {
public:
    Dataset() = default;
    /// Validates shape, finiteness and label range; throws DataError.
    Dataset(Matrix x, std::vector<Label> y, std::vector<std::string> feature_names,
            std::vector<std::string> class_names);

    const Matrix& x() const noexcept { return x_; }
    std::span<const Label> y() const noexcept { return y_; }
    const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
    const std::vector<std::string>& class_names() const noexcept { return class_names_; }

    std::size_t n() const noexcept { return x_.rows(); }
    std::size_t p() const noexcept { return x_.cols(); }
    std::size_t num_classes() const noexcept { return class_names_.size(); }

    std::vector<std::size_t> class_counts() const;

    /// Samples at `idx` (order preserved). Keeps the full class list so
    /// class ids stay comparable with the parent dataset.
    Dataset subset_rows(std::span<const std::size_t> idx) const;
    /// Columns at `features` (order preserved).
    Dataset subset_features(std::span<const std::size_t> features) const;
    /// Keeps only samples whose class is in `classes`, relabelled 0..k-1 in
    /// the given order.
    Dataset restrict_classes(std::span<const Label> classes) const;

    /// Index of the named feature; throws std::invalid_argument if absent.
    std::size_t feature_index(const std::string& name) const;
    Label class_id(const std::string& name) const;

private:
    Matrix x_;
    std::vector<Label> y_;
    std::vector<std::string> feature_names_;
    std::vector<std::string> class_names_;
};

/// Reads a comma-separated file with a header row. The label column is
/// removed from the feature matrix and encoded by first appearance.
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column);
/// Same, from in-memory text. `source` names the input in error messages.
Dataset parse_csv(const std::string& text, const std::string& label_column,
                  const std::string& source = "<memory>");

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Random train/test partition. Indices are returned in ascending order.
SplitIndices split_indices(const Dataset& ds, double test_fraction, std::uint64_t seed,
                           bool stratified = true);
std::pair<Dataset, Dataset> split(const Dataset& ds, double test_fraction, std::uint64_t seed,
                                  bool stratified = true);

struct FoldAssignment {
    std::vector<std::size_t> fold_of;
    std::size_t k = 0;
    std::uint64_t seed = 0;
    bool stratified = false;

    std::vector<std::size_t> fold_sizes() const;
    std::vector<std::size_t> members(std::size_t fold) const;
    std::vector<std::size_t> complement(std::size_t fold) const;
};

/// K-fold assignment. A stratified request with a class smaller than K
/// falls back to plain folds and emits a warning.
FoldAssignment kfold(const Dataset& ds, std::size_t k, std::uint64_t seed, bool stratified = true);
FoldAssignment kfold(std::size_t n, std::size_t k, std::uint64_t seed);

/// Per-feature equal-frequency bins.
///
/// Feature j has sorted cut points `bin_edges[j]`; a value v lands in the
/// bin equal to the number of edges strictly below v, so a value equal to a
/// cut point falls in the lower bin.
struct DiscretizedView {
    std::size_t n = 0;
    std::vector<std::vector<std::uint32_t>> bins;  ///< bins[feature][sample]
    std::vector<std::size_t> bins_per_feature;
    std::vector<std::vector<double>> bin_edges;

    std::size_t p() const noexcept { return bins.size(); }
    std::span<const std::uint32_t> column(std::size_t j) const { return bins[j]; }

    /// Bins arbitrary data (same width) with the stored edges.
    std::vector<std::vector<std::uint32_t>> apply(const Matrix& x) const;
};

std::uint32_t bin_of(std::span<const double> edges, double value);

/// Equal-frequency cut points for one column (strictly increasing, the
/// column maximum never appears as an edge).
std::vector<double> equal_frequency_edges(std::span<const double> column, std::size_t bins);

DiscretizedView discretize_equal_frequency(const Matrix& x, std::size_t bins = 10);
inline DiscretizedView discretize_equal_frequency(const Dataset& ds, std::size_t bins = 10) {
    return discretize_equal_frequency(ds.x(), bins);
}

/// Column z-scoring fitted on training data (population standard deviation).
/// Zero-variance columns map to zero.
class Standardizer {
public:
    Standardizer() = default;
    static Standardizer fit(const Matrix& x);

    Matrix transform(const Matrix& x) const;
    void transform_row(std::span<const double> in, std::span<double> out) const;

    const std::vector<double>& means() const noexcept { return means_; }
    const std::vector<double>& stdevs() const noexcept { return stdevs_; }
    const std::vector<bool>& constant() const noexcept { return constant_; }

private:
    std::vector<double> means_;
    std::vector<double> stdevs_;
    std::vector<bool> constant_;
};

} // namespace featsel
