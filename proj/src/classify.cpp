#include "featsel/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "featsel/kernels.hpp"

namespace featsel {

std::string_view metric_name(Metric m) {
    return m == Metric::cosine ? "cosine" : "euclidean";
}

Metric parse_metric(std::string_view name) {
    if (name == "euclidean") return Metric::euclidean;
    if (name == "cosine") return Metric::cosine;
    throw std::invalid_argument("unknown metric: " + std::string(name));
}

KnnModel KnnModel::fit(const Dataset& train, const KnnConfig& config) {
    if (config.k < 1 || config.k > train.n())
        throw std::invalid_argument("knn_fit: k must satisfy 1 <= k <= n_train (k=" +
                                    std::to_string(config.k) + ", n=" +
                                    std::to_string(train.n()) + ")");
    KnnModel m;
    m.config_ = config;
    if (config.standardize) {
        m.scaler_ = Standardizer::fit(train.x());
        m.x_ = m.scaler_->transform(train.x());
    } else {
        m.x_ = train.x();
    }
    if (config.metric == Metric::cosine) {
        m.norms_.resize(m.x_.rows());
        for (std::size_t i = 0; i < m.x_.rows(); ++i)
            m.norms_[i] = std::sqrt(kernels::dot(m.x_.row(i), m.x_.row(i)));
    }
    m.y_.assign(train.y().begin(), train.y().end());
    m.num_classes_ = train.num_classes();
    return m;
}

void KnnModel::prepare(std::span<const double> query, std::span<double> out) const {
    if (query.size() != x_.cols())
        throw std::invalid_argument("knn_predict: query width " + std::to_string(query.size()) +
                                    " differs from training width " + std::to_string(x_.cols()));
    if (scaler_)
        scaler_->transform_row(query, out);
    else
        std::copy(query.begin(), query.end(), out.begin());
}

std::vector<std::size_t> KnnModel::neighbors(std::span<const double> query) const {
    const std::size_t n = x_.rows();
    std::vector<double> q(x_.cols());
    prepare(query, q);

    std::vector<double> dist(n);
    if (config_.metric == Metric::euclidean) {
        kernels::squared_euclidean_rows(q, x_.data(), dist);
    } else {
        kernels::dot_rows(q, x_.data(), dist);
        const double qn = std::sqrt(kernels::dot(q, q));
        for (std::size_t i = 0; i < n; ++i) {
            const double denom = qn * norms_[i];
            dist[i] = 1.0 - (denom > 0.0 ? dist[i] / denom : 0.0);
        }
    }

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    const std::size_t k = config_.k;
    auto closer = [&](std::size_t a, std::size_t b) {
        return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
    };
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), closer);
    idx.resize(k);
    return idx;
}

Label KnnModel::predict_one(std::span<const double> query) const {
    const auto nn = neighbors(query);
    std::vector<std::size_t> votes(num_classes_, 0);
    for (std::size_t i : nn) ++votes[y_[i]];
    return static_cast<Label>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

std::vector<Label> KnnModel::predict(const Matrix& queries) const {
    std::vector<Label> out(queries.rows());
    for (std::size_t i = 0; i < queries.rows(); ++i) out[i] = predict_one(queries.row(i));
    return out;
}

double accuracy(std::span<const Label> truth, std::span<const Label> predicted) {
    if (truth.size() != predicted.size())
        throw std::invalid_argument("accuracy: length mismatch");
    if (truth.empty()) return 0.0;
    std::size_t hit = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hit += truth[i] == predicted[i];
    return static_cast<double>(hit) / static_cast<double>(truth.size());
}

double EvalReport::pooled_accuracy() const {
    std::size_t diag = 0, total = 0;
    for (std::size_t t = 0; t < confusion.size(); ++t)
        for (std::size_t p = 0; p < confusion[t].size(); ++p) {
            total += confusion[t][p];
            if (t == p) diag += confusion[t][p];
        }
    return total ? static_cast<double>(diag) / static_cast<double>(total) : 0.0;
}

EvalReport holdout_accuracy(const Dataset& train, const Dataset& test, const KnnConfig& config) {
    const auto model = KnnModel::fit(train, config);
    const auto pred = model.predict(test.x());
    EvalReport r;
    const std::size_t c = std::max(train.num_classes(), test.num_classes());
    r.confusion.assign(c, std::vector<std::size_t>(c, 0));
    for (std::size_t i = 0; i < pred.size(); ++i) ++r.confusion[test.y()[i]][pred[i]];
    r.accuracy = accuracy(test.y(), pred);
    return r;
}

EvalReport cross_val_accuracy(const Dataset& ds, const FoldAssignment& folds,
                              const KnnConfig& config) {
    if (folds.fold_of.size() != ds.n())
        throw std::invalid_argument("cross_val_accuracy: fold assignment length mismatch");
    EvalReport r;
    const std::size_t c = ds.num_classes();
    r.confusion.assign(c, std::vector<std::size_t>(c, 0));
    r.fold_scores.assign(folds.k, 0.0);

    for (std::size_t f = 0; f < folds.k; ++f) {
        const auto test_idx = folds.members(f);
        if (test_idx.empty())
            throw std::invalid_argument("cross_val_accuracy: fold " + std::to_string(f) +
                                        " is empty");
        const auto train_idx = folds.complement(f);
        const auto model = KnnModel::fit(ds.subset_rows(train_idx), config);
        std::size_t hit = 0;
        for (std::size_t i : test_idx) {
            const Label pred = model.predict_one(ds.x().row(i));
            ++r.confusion[ds.y()[i]][pred];
            hit += pred == ds.y()[i];
        }
        r.fold_scores[f] = static_cast<double>(hit) / static_cast<double>(test_idx.size());
    }
    r.accuracy = std::accumulate(r.fold_scores.begin(), r.fold_scores.end(), 0.0) /
                 static_cast<double>(folds.k);
    return r;
}

} // namespace featsel
