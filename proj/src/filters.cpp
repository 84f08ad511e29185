#include "featsel/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "featsel/forest.hpp"
#include "featsel/relief.hpp"

namespace featsel {

ContingencyTable ContingencyTable::from_counts(std::vector<std::vector<std::size_t>> counts) {
    ContingencyTable t;
    const std::size_t cols = counts.empty() ? 0 : counts.front().size();
    t.row_totals.assign(counts.size(), 0);
    t.col_totals.assign(cols, 0);
    for (std::size_t r = 0; r < counts.size(); ++r) {
        if (counts[r].size() != cols)
            throw std::invalid_argument("contingency table: ragged rows");
        for (std::size_t c = 0; c < cols; ++c) {
            t.row_totals[r] += counts[r][c];
            t.col_totals[c] += counts[r][c];
            t.total += counts[r][c];
        }
    }
    t.counts = std::move(counts);
    return t;
}

ContingencyTable ContingencyTable::build(std::span<const std::uint32_t> rows,
                                         std::span<const Label> cols, std::size_t num_rows,
                                         std::size_t num_cols) {
    if (rows.size() != cols.size())
        throw std::invalid_argument("contingency table: length mismatch");
    std::vector<std::vector<std::size_t>> counts(num_rows, std::vector<std::size_t>(num_cols, 0));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= num_rows || cols[i] >= num_cols)
            throw std::invalid_argument("contingency table: code out of range");
        ++counts[rows[i]][cols[i]];
    }
    return from_counts(std::move(counts));
}

double chi_square(const ContingencyTable& t) {
    if (t.total == 0) return 0.0;
    const double n = static_cast<double>(t.total);
    double chi2 = 0.0;
    for (std::size_t r = 0; r < t.counts.size(); ++r) {
        for (std::size_t c = 0; c < t.col_totals.size(); ++c) {
            const double expected =
                static_cast<double>(t.row_totals[r]) * static_cast<double>(t.col_totals[c]) / n;
            if (expected <= 0.0) continue;  // observed is 0 here too
            const double d = static_cast<double>(t.counts[r][c]) - expected;
            chi2 += d * d / expected;
        }
    }
    return chi2;
}

double entropy_of_counts(std::span<const std::size_t> counts) {
    const double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(),
                                                         std::size_t{0}));
    if (n == 0.0) return 0.0;
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

double entropy(std::span<const Label> y) {
    if (y.empty()) throw std::invalid_argument("entropy: empty label vector");
    const Label top = *std::max_element(y.begin(), y.end());
    std::vector<std::size_t> counts(top + 1, 0);
    for (Label c : y) ++counts[c];
    return entropy_of_counts(counts);
}

double information_gain(const ContingencyTable& t) {
    if (t.total == 0) return 0.0;
    const double n = static_cast<double>(t.total);
    double conditional = 0.0;
    for (std::size_t r = 0; r < t.counts.size(); ++r) {
        if (t.row_totals[r] == 0) continue;
        conditional += static_cast<double>(t.row_totals[r]) / n * entropy_of_counts(t.counts[r]);
    }
    // Clamp rounding noise; the exact value lies in [0, H(Y)].
    const double h = entropy_of_counts(t.col_totals);
    return std::clamp(h - conditional, 0.0, h);
}

namespace {

ContingencyTable feature_table(const DiscretizedView& dv, std::span<const Label> y,
                               std::size_t num_classes, std::size_t feature) {
    if (feature >= dv.p()) throw std::invalid_argument("feature index out of range");
    if (y.size() != dv.n) throw std::invalid_argument("label length differs from sample count");
    return ContingencyTable::build(dv.column(feature), y, dv.bins_per_feature[feature],
                                   num_classes);
}

} // namespace

double chi_square_score(const DiscretizedView& dv, std::span<const Label> y,
                        std::size_t num_classes, std::size_t feature) {
    return chi_square(feature_table(dv, y, num_classes, feature));
}

double info_gain_score(const DiscretizedView& dv, std::span<const Label> y,
                       std::size_t num_classes, std::size_t feature) {
    return information_gain(feature_table(dv, y, num_classes, feature));
}

std::string_view rank_method_name(RankMethod m) {
    switch (m) {
        case RankMethod::chi2: return "chi2";
        case RankMethod::igain: return "igain";
        case RankMethod::relieff: return "relieff";
        case RankMethod::rf_importance: return "rf";
    }
    return "?";
}

RankMethod parse_rank_method(std::string_view name) {
    if (name == "chi2") return RankMethod::chi2;
    if (name == "igain") return RankMethod::igain;
    if (name == "relieff") return RankMethod::relieff;
    if (name == "rf" || name == "rf_importance") return RankMethod::rf_importance;
    throw std::invalid_argument("unknown ranking method: " + std::string(name));
}

FeatureRanking rank_discretized(const DiscretizedView& dv, std::span<const Label> y,
                                std::size_t num_classes, RankMethod method) {
    std::vector<double> scores(dv.p());
    for (std::size_t j = 0; j < dv.p(); ++j) {
        switch (method) {
            case RankMethod::chi2: scores[j] = chi_square_score(dv, y, num_classes, j); break;
            case RankMethod::igain: scores[j] = info_gain_score(dv, y, num_classes, j); break;
            default:
                throw std::invalid_argument("rank_discretized: method needs the numeric dataset");
        }
    }
    return make_ranking(std::move(scores), std::string(rank_method_name(method)));
}

FeatureRanking rank_features(const Dataset& ds, RankMethod method, const RankOptions& opts) {
    switch (method) {
        case RankMethod::chi2:
        case RankMethod::igain: {
            const auto dv = discretize_equal_frequency(ds, opts.bins);
            auto r = rank_discretized(dv, ds.y(), ds.num_classes(), method);
            r.bins = opts.bins;
            return r;
        }
        case RankMethod::relieff: {
            ReliefOptions ro;
            ro.iterations = opts.relief_iterations;
            ro.neighbors = opts.relief_neighbors;
            ro.seed = opts.seed;
            return relieff_weights(ds, ro).ranking();
        }
        case RankMethod::rf_importance: {
            ForestOptions fo;
            fo.n_trees = opts.forest_trees;
            fo.seed = opts.seed;
            const auto forest = ForestModel::fit(ds, fo);
            return rf_permutation_importance(forest, ds, opts.importance_repeats,
                                             mix_seed(opts.seed, 0x1337));
        }
    }
    throw std::invalid_argument("unknown ranking method");
}

FeatureSet apply_policy(const FeatureRanking& r, const SelectionPolicy& policy) {
    FeatureSet out;
    switch (policy.kind) {
        case SelectionPolicy::Kind::top_k:
            if (policy.k == 0) throw std::invalid_argument("top_k: k must be >= 1");
            return r.top(policy.k);
        case SelectionPolicy::Kind::top_fraction: {
            if (!(policy.fraction > 0.0 && policy.fraction <= 1.0))
                throw std::invalid_argument("top_fraction: fraction must lie in (0, 1]");
            const auto k = static_cast<std::size_t>(
                std::ceil(policy.fraction * static_cast<double>(r.p()) - 1e-12));
            return r.top(std::max<std::size_t>(k, 1));
        }
        case SelectionPolicy::Kind::above_half_max: {
            if (r.p() == 0) return out;
            const double threshold = 0.5 * r.scores[r.order.front()];
            for (std::size_t f : r.order)
                if (r.scores[f] > threshold) out.push_back(f);
            return out;
        }
        case SelectionPolicy::Kind::nonzero:
            for (std::size_t f : r.order)
                if (r.scores[f] != 0.0) out.push_back(f);
            return out;
    }
    return out;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("correlation: length mismatch");
    if (a.size() < 2) throw std::invalid_argument("correlation: need at least two values");
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0)
        throw std::invalid_argument("correlation: zero-variance score vector");
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("correlation: length mismatch");
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    return pearson(ra, rb);
}

double rank_correlation(const FeatureRanking& a, const FeatureRanking& b, CorrelationKind kind) {
    if (a.p() != b.p()) throw std::invalid_argument("rank_correlation: rankings differ in length");
    return kind == CorrelationKind::pearson ? pearson(a.scores, b.scores)
                                            : spearman(a.scores, b.scores);
}

} // namespace featsel
