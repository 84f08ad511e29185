#include "featsel/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "featsel/error.hpp"
#include "featsel/log.hpp"

namespace featsel {

std::string_view transform_kind_name(TransformKind k) { return k == TransformKind::pca ? "pca" : "lda"; }

Matrix LinearTransform::apply(const Matrix& x) const {
    if (x.cols() != p())
        throw std::invalid_argument("transform: expected " + std::to_string(p()) +
                                    " columns, got " + std::to_string(x.cols()));
    Matrix out(x.rows(), k());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < p(); ++j) {
            const double c = x(i, j) - column_means[j];
            if (c == 0.0) continue;
            for (std::size_t m = 0; m < k(); ++m) out(i, m) += c * w(j, m);
        }
    }
    return out;
}

namespace {

std::vector<double> column_means(const Matrix& x) {
    std::vector<double> mu(x.cols(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) mu[j] += x(i, j);
    for (double& m : mu) m /= static_cast<double>(x.rows());
    return mu;
}

// Flips each column so its largest-magnitude entry is positive (first such
// entry on exact ties).
void normalize_signs(Matrix& w) {
    for (std::size_t c = 0; c < w.cols(); ++c) {
        std::size_t arg = 0;
        for (std::size_t r = 1; r < w.rows(); ++r)
            if (std::abs(w(r, c)) > std::abs(w(arg, c))) arg = r;
        if (w(arg, c) < 0.0)
            for (std::size_t r = 0; r < w.rows(); ++r) w(r, c) = -w(r, c);
    }
}

Matrix leading_columns(const Matrix& v, std::size_t k) {
    Matrix out(v.rows(), k);
    for (std::size_t r = 0; r < v.rows(); ++r)
        for (std::size_t c = 0; c < k; ++c) out(r, c) = v(r, c);
    return out;
}

void add_outer(Matrix& acc, std::span<const double> d, double weight) {
    for (std::size_t a = 0; a < d.size(); ++a)
        for (std::size_t b = 0; b < d.size(); ++b) acc(a, b) += weight * d[a] * d[b];
}

} // namespace

Matrix covariance(const Matrix& x) {
    if (x.rows() < 2) throw DataError("covariance: need at least 2 samples");
    const auto mu = column_means(x);
    const std::size_t p = x.cols();
    Matrix c(p, p);
    std::vector<double> d(p);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < p; ++j) d[j] = x(i, j) - mu[j];
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = a; b < p; ++b) c(a, b) += d[a] * d[b];
    }
    const double scale = 1.0 / static_cast<double>(x.rows() - 1);
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = a; b < p; ++b) c(b, a) = c(a, b) = c(a, b) * scale;
    return c;
}

LinearTransform pca_fit(const Matrix& x, const PcaOptions& opts) {
    if (x.rows() < 2) throw DataError("pca_fit: need at least 2 samples, got " + std::to_string(x.rows()));
    if (x.cols() == 0) throw DataError("pca_fit: no features");
    const std::size_t p = x.cols();
    if (opts.k && (*opts.k == 0 || *opts.k > p))
        throw std::invalid_argument("pca_fit: k must be in [1, " + std::to_string(p) + "]");
    if (!opts.k && !(opts.variance_threshold > 0.0 && opts.variance_threshold <= 1.0))
        throw std::invalid_argument("pca_fit: variance threshold must be in (0, 1]");

    const auto eig = jacobi_eigen(covariance(x));
    LinearTransform t;
    t.kind = TransformKind::pca;
    t.column_means = column_means(x);
    t.all_values = eig.values;
    for (double& v : t.all_values) v = std::max(v, 0.0);  // PSD; drop rounding noise

    std::size_t k = p;
    if (opts.k) {
        k = *opts.k;
    } else {
        const double total = std::accumulate(t.all_values.begin(), t.all_values.end(), 0.0);
        if (total <= 0.0) {
            k = 1;
        } else {
            double cum = 0.0;
            for (std::size_t i = 0; i < p; ++i) {
                cum += t.all_values[i];
                if (cum / total >= opts.variance_threshold - 1e-12) {
                    k = i + 1;
                    break;
                }
            }
        }
    }
    t.values.assign(t.all_values.begin(), t.all_values.begin() + static_cast<std::ptrdiff_t>(k));
    t.w = leading_columns(eig.vectors, k);
    return t;
}

std::vector<double> explained_variance_ratio(const LinearTransform& t) {
    if (t.kind != TransformKind::pca)
        throw std::invalid_argument("explained_variance_ratio: only defined for PCA transforms");
    const double total = std::accumulate(t.all_values.begin(), t.all_values.end(), 0.0);
    std::vector<double> out(t.values.size(), 0.0);
    if (total <= 0.0) return out;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = t.values[i] / total;
    return out;
}

ScatterMatrices scatter_matrices(const Dataset& ds, bool class_size_weighted_within) {
    const std::size_t p = ds.p();
    const std::size_t c = ds.num_classes();
    const auto counts = ds.class_counts();
    const auto mu = column_means(ds.x());
    std::vector<std::vector<double>> mu_c(c, std::vector<double>(p, 0.0));
    for (std::size_t i = 0; i < ds.n(); ++i)
        for (std::size_t j = 0; j < p; ++j) mu_c[ds.y()[i]][j] += ds.x()(i, j);
    for (std::size_t k = 0; k < c; ++k)
        if (counts[k] > 0)
            for (double& v : mu_c[k]) v /= static_cast<double>(counts[k]);

    ScatterMatrices s{Matrix(p, p), Matrix(p, p)};
    std::vector<double> d(p);
    for (std::size_t k = 0; k < c; ++k) {
        if (counts[k] == 0) continue;
        for (std::size_t j = 0; j < p; ++j) d[j] = mu_c[k][j] - mu[j];
        add_outer(s.between, d, static_cast<double>(counts[k]));
    }
    for (std::size_t i = 0; i < ds.n(); ++i) {
        const Label y = ds.y()[i];
        for (std::size_t j = 0; j < p; ++j) d[j] = ds.x()(i, j) - mu_c[y][j];
        add_outer(s.within, d, class_size_weighted_within ? static_cast<double>(counts[y]) : 1.0);
    }
    return s;
}

LinearTransform lda_fit(const Dataset& ds, const LdaOptions& opts) {
    const std::size_t p = ds.p();
    const auto counts = ds.class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c)
        if (counts[c] < 2)
            throw DataError("lda_fit: class '" + ds.class_names()[c] + "' has " +
                            std::to_string(counts[c]) + " samples; need at least 2");
    if (ds.num_classes() < 2)
        throw DataError("lda_fit: between-class scatter is zero (need at least 2 distinct classes)");
    const std::size_t useful = ds.num_classes() - 1;
    const std::size_t k = opts.k.value_or(std::min(useful, p));
    if (k == 0 || k > p)
        throw std::invalid_argument("lda_fit: k must be in [1, " + std::to_string(p) + "]");
    if (k > useful)
        warn("lda_fit: k = " + std::to_string(k) + " exceeds |C| - 1 = " + std::to_string(useful) +
             "; extra components carry no between-class variance");

    const auto s = scatter_matrices(ds, opts.class_size_weighted_within);
    if (max_abs_offdiag(s.between) == 0.0 && trace(s.between) == 0.0)
        throw DataError("lda_fit: between-class scatter is zero (need at least 2 distinct classes)");

    auto l = cholesky(s.within);
    if (!l) {
        const double tr = trace(s.within);
        const double eps = 1e-6 * (tr > 0.0 ? tr / static_cast<double>(p) : 1.0);
        Matrix ridged = s.within;
        for (std::size_t j = 0; j < p; ++j) ridged(j, j) += eps;
        l = cholesky(ridged);
        if (!l) throw DataError("lda_fit: within-class scatter is not positive definite after ridge");
        warn("lda_fit: within-class scatter singular; added ridge " + std::to_string(eps));
    }
    const Matrix linv = lower_inverse(*l);
    Matrix m = linv * s.between * linv.transposed();
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = a + 1; b < p; ++b) m(a, b) = m(b, a) = 0.5 * (m(a, b) + m(b, a));
    const auto eig = jacobi_eigen(m);

    LinearTransform t;
    t.kind = TransformKind::lda;
    t.column_means = column_means(ds.x());
    t.all_values = eig.values;
    t.values.assign(eig.values.begin(), eig.values.begin() + static_cast<std::ptrdiff_t>(k));
    t.w = linv.transposed() * leading_columns(eig.vectors, k);
    normalize_signs(t.w);
    return t;
}

double fisher_ratio(const Matrix& w, const ScatterMatrices& s) {
    const Matrix wt = w.transposed();
    return determinant(wt * s.between * w) / determinant(wt * s.within * w);
}

LdaClassifier LdaClassifier::fit(const Dataset& train, const LdaClassifierOptions& opts) {
    LdaClassifier clf;
    clf.transform_ = lda_fit(train, opts.lda);
    const Matrix z = clf.transform_.apply(train.x());
    const std::size_t c = train.num_classes();
    const std::size_t k = z.cols();
    const auto counts = train.class_counts();

    if (opts.priors) {
        const auto& pr = *opts.priors;
        if (pr.size() != c) throw std::invalid_argument("lda: one prior per class required");
        double sum = 0.0;
        for (double v : pr) {
            if (!(v >= 0.0)) throw std::invalid_argument("lda: priors must be non-negative");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("lda: priors must sum to 1");
        clf.priors_ = pr;
    } else {
        for (std::size_t v : counts)
            clf.priors_.push_back(static_cast<double>(v) / static_cast<double>(train.n()));
    }

    clf.means_.assign(c, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < z.rows(); ++i)
        for (std::size_t j = 0; j < k; ++j) clf.means_[train.y()[i]][j] += z(i, j);
    for (std::size_t cl = 0; cl < c; ++cl)
        for (double& v : clf.means_[cl]) v /= static_cast<double>(counts[cl]);

    const std::size_t groups = opts.per_class_covariance ? c : 1;
    clf.covs_.assign(groups, Matrix(k, k));
    std::vector<double> d(k);
    for (std::size_t i = 0; i < z.rows(); ++i) {
        const Label y = train.y()[i];
        for (std::size_t j = 0; j < k; ++j) d[j] = z(i, j) - clf.means_[y][j];
        add_outer(clf.covs_[opts.per_class_covariance ? y : 0], d, 1.0);
    }
    for (std::size_t g = 0; g < groups; ++g) {
        const double dof = opts.per_class_covariance
                               ? static_cast<double>(counts[g] - 1)
                               : static_cast<double>(train.n() > c ? train.n() - c : train.n());
        Matrix& cov = clf.covs_[g];
        for (double& v : cov.data()) v /= dof;
        auto l = cholesky(cov);
        double ridge = 1e-9 * std::max(trace(cov) / static_cast<double>(k), 1e-300);
        while (!l) {
            for (std::size_t j = 0; j < k; ++j) cov(j, j) += ridge;
            ridge *= 10.0;
            l = cholesky(cov);
        }
        double log_det = 0.0;
        for (std::size_t j = 0; j < k; ++j) log_det += 2.0 * std::log((*l)(j, j));
        clf.inv_chol_.push_back(lower_inverse(*l));
        clf.log_dets_.push_back(log_det);
    }
    return clf;
}

std::vector<double> LdaClassifier::log_scores(std::span<const double> z) const {
    const std::size_t k = transform_.k();
    if (z.size() != k) throw std::invalid_argument("lda: projected width mismatch");
    std::vector<double> out(means_.size());
    std::vector<double> d(k);
    for (std::size_t c = 0; c < means_.size(); ++c) {
        const std::size_t g = covs_.size() == 1 ? 0 : c;
        for (std::size_t j = 0; j < k; ++j) d[j] = z[j] - means_[c][j];
        const Matrix& li = inv_chol_[g];
        double maha = 0.0;
        for (std::size_t a = 0; a < k; ++a) {
            double s = 0.0;
            for (std::size_t b = 0; b <= a; ++b) s += li(a, b) * d[b];
            maha += s * s;
        }
        const double log_prior =
            priors_[c] > 0.0 ? std::log(priors_[c]) : -std::numeric_limits<double>::infinity();
        out[c] = -0.5 * maha - 0.5 * log_dets_[g] + log_prior;
    }
    return out;
}

Label LdaClassifier::predict_projected(std::span<const double> z) const {
    const auto s = log_scores(z);
    return static_cast<Label>(std::max_element(s.begin(), s.end()) - s.begin());
}

std::vector<Label> LdaClassifier::predict(const Matrix& x) const {
    const Matrix z = transform_.apply(x);
    std::vector<Label> out(z.rows());
    for (std::size_t i = 0; i < z.rows(); ++i) out[i] = predict_projected(z.row(i));
    return out;
}

} // namespace featsel
