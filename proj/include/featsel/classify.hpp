#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "featsel/data.hpp"

namespace featsel {

enum class Metric { euclidean, cosine };

std::string_view metric_name(Metric m);
Metric parse_metric(std::string_view name);

struct KnnConfig {
    std::size_t k = 3;
    Metric metric = Metric::euclidean;
    bool standardize = true;
};

/// k-nearest-neighbour classifier.
///
/// Neighbours are ordered by (distance, training index); the vote goes to
/// the most frequent class, ties to the smaller class id.
class KnnModel {
public:
    static KnnModel fit(const Dataset& train, const KnnConfig& config);

    std::vector<Label> predict(const Matrix& queries) const;
    Label predict_one(std::span<const double> query) const;

    /// Indices of the k nearest training rows to a raw (unscaled) query,
    /// nearest first.
    std::vector<std::size_t> neighbors(std::span<const double> query) const;

    const KnnConfig& config() const noexcept { return config_; }
    std::size_t num_features() const noexcept { return x_.cols(); }

private:
    void prepare(std::span<const double> query, std::span<double> out) const;

    KnnConfig config_;
    std::optional<Standardizer> scaler_;
    Matrix x_;
    std::vector<double> norms_;  // cosine metric only
    std::vector<Label> y_;
    std::size_t num_classes_ = 0;
};

struct EvalReport {
    double accuracy = 0.0;
    /// confusion[true][predicted]
    std::vector<std::vector<std::size_t>> confusion;
    std::vector<double> fold_scores;

    double pooled_accuracy() const;
};

EvalReport holdout_accuracy(const Dataset& train, const Dataset& test, const KnnConfig& config);

/// Fits on each fold's complement and scores on the fold. `accuracy` is the
/// mean of the per-fold scores; folds are aggregated by id.
EvalReport cross_val_accuracy(const Dataset& ds, const FoldAssignment& folds,
                              const KnnConfig& config);

double accuracy(std::span<const Label> truth, std::span<const Label> predicted);

// ---------------------------------------------------------------------------
// Curse-of-dimensionality demonstrations

struct SpreadStats {
    std::size_t dim = 0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;

    double iqr() const { return q3 - q1; }
};

/// Linear-interpolated quantile of sorted data (q in [0,1]).
double quantile_sorted(std::span<const double> sorted, double q);

/// Cosine similarity between the centre of the unit hypercube and `n_points`
/// random points drawn uniformly from it, summarised per dimension.
std::vector<SpreadStats> similarity_spread_demo(std::span<const std::size_t> dims,
                                                std::size_t n_points, std::uint64_t seed);

/// Uniform random points in [0,1]^d for each requested dimension.
std::vector<Matrix> sparsity_demo(std::span<const std::size_t> dims, std::size_t n_points,
                                  std::uint64_t seed);

} // namespace featsel
