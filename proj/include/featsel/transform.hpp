#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "featsel/data.hpp"
#include "featsel/linalg.hpp"

namespace featsel {

enum class TransformKind { pca, lda };

std::string_view transform_kind_name(TransformKind k);

/// x' = (x - column_means) * W, with W of shape p x k.
struct LinearTransform {
    TransformKind kind = TransformKind::pca;
    std::vector<double> column_means;
    Matrix w;
    std::vector<double> values;      ///< eigenvalue (PCA) or Fisher criterion (LDA) per column of W
    std::vector<double> all_values;  ///< the full spectrum, descending

    std::size_t p() const noexcept { return w.rows(); }
    std::size_t k() const noexcept { return w.cols(); }

    /// Throws std::invalid_argument on a width mismatch.
    Matrix apply(const Matrix& x) const;
};

/// Sample covariance (1/(n-1)) Z^T Z of column-centred data.
Matrix covariance(const Matrix& x);

struct PcaOptions {
    /// Components to keep; unset = smallest k whose cumulative explained
    /// variance reaches `variance_threshold`.
    std::optional<std::size_t> k;
    double variance_threshold = 0.95;
};

/// Principal components from the Jacobi eigendecomposition of the
/// covariance matrix. Each column of W has its largest-magnitude entry
/// positive.
LinearTransform pca_fit(const Matrix& x, const PcaOptions& opts = {});

/// Kept eigenvalues over the sum of all eigenvalues. PCA only.
std::vector<double> explained_variance_ratio(const LinearTransform& t);

inline Matrix pca_transform(const LinearTransform& t, const Matrix& x) { return t.apply(x); }

struct ScatterMatrices {
    Matrix between;
    Matrix within;
};

/// Between-class scatter sum_c n_c (mu_c - mu)(mu_c - mu)^T and within-class
/// scatter sum_c sum_{i in c} (x_i - mu_c)(x_i - mu_c)^T. With
/// `class_size_weighted_within`, each class's within term is additionally
/// multiplied by n_c.
ScatterMatrices scatter_matrices(const Dataset& ds, bool class_size_weighted_within = false);

struct LdaOptions {
    std::optional<std::size_t> k;  ///< default min(|C| - 1, p)
    bool class_size_weighted_within = false;
};

/// Fisher discriminant directions: whitens S_W = L L^T (adding
/// 1e-6 * trace(S_W) / p to the diagonal when the factorization fails),
/// eigendecomposes L^-1 S_B L^-T and maps the top-k eigenvectors back.
LinearTransform lda_fit(const Dataset& ds, const LdaOptions& opts = {});

/// det(W^T S_B W) / det(W^T S_W W).
double fisher_ratio(const Matrix& w, const ScatterMatrices& s);

struct LdaClassifierOptions {
    LdaOptions lda;
    bool per_class_covariance = false;
    /// Class priors; unset = training class frequencies. Must sum to 1.
    std::optional<std::vector<double>> priors;
};

/// Gaussian class densities in LDA space with a pooled (default) or
/// per-class covariance. Predictions maximise log density + log prior;
/// ties go to the smaller class id.
class LdaClassifier {
public:
    static LdaClassifier fit(const Dataset& train, const LdaClassifierOptions& opts = {});

    std::vector<Label> predict(const Matrix& x) const;
    Label predict_projected(std::span<const double> z) const;
    /// Log density plus log prior per class, for one projected row.
    std::vector<double> log_scores(std::span<const double> z) const;

    const LinearTransform& transform() const noexcept { return transform_; }
    const std::vector<std::vector<double>>& class_means() const noexcept { return means_; }
    const std::vector<Matrix>& covariances() const noexcept { return covs_; }
    const std::vector<double>& priors() const noexcept { return priors_; }

private:
    LinearTransform transform_;
    std::vector<std::vector<double>> means_;
    std::vector<Matrix> covs_;       // one pooled or one per class
    std::vector<Matrix> inv_chol_;   // L^-1 for each covariance
    std::vector<double> log_dets_;
    std::vector<double> priors_;
};

} // namespace featsel
