#include "featsel/wrappers.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace featsel {

double evaluate_subset(const Dataset& ds, const FeatureSet& subset, const FoldAssignment& folds,
                       const KnnConfig& config) {
    if (subset.empty()) throw std::invalid_argument("evaluate_subset: empty feature subset");
    return cross_val_accuracy(ds.subset_features(subset), folds, config).accuracy;
}

namespace {

SubsetResult make_result(std::string rule, const FoldAssignment& folds, const KnnConfig& config) {
    SubsetResult r;
    r.stopping_rule = std::move(rule);
    r.classifier = config;
    r.folds = folds.k;
    r.fold_seed = folds.seed;
    return r;
}

// Strictly better: higher accuracy, then fewer features, then lexicographic.
bool better(const TraceStep& a, const TraceStep& b) {
    if (a.cv_accuracy != b.cv_accuracy) return a.cv_accuracy > b.cv_accuracy;
    if (a.subset.size() != b.subset.size()) return a.subset.size() < b.subset.size();
    return a.subset < b.subset;
}

void select_best(SubsetResult& r) {
    const TraceStep* best = &r.trace.front();
    for (const auto& s : r.trace)
        if (better(s, *best)) best = &s;
    r.selected = best->subset;
    r.selected_accuracy = best->cv_accuracy;
}

FeatureSet with(FeatureSet s, std::size_t f) {
    s.insert(std::upper_bound(s.begin(), s.end(), f), f);
    return s;
}

FeatureSet without(FeatureSet s, std::size_t f) {
    s.erase(std::find(s.begin(), s.end(), f));
    return s;
}

} // namespace

SubsetResult exhaustive_search(const Dataset& ds, const FoldAssignment& folds,
                               const KnnConfig& config, std::size_t max_p) {
    const std::size_t p = ds.p();
    if (p > max_p || p >= 63)
        throw std::invalid_argument("exhaustive_search: p = " + std::to_string(p) +
                                    " exceeds the limit of " + std::to_string(max_p) +
                                    " features");
    auto r = make_result("exhaustive", folds, config);
    const std::uint64_t count = (std::uint64_t{1} << p) - 1;
    r.trace.reserve(count);
    for (std::uint64_t mask = 1; mask <= count; ++mask) {
        FeatureSet s;
        for (std::size_t f = 0; f < p; ++f)
            if (mask >> f & 1U) s.push_back(f);
        const double acc = evaluate_subset(ds, s, folds, config);
        r.trace.push_back({std::move(s), acc});
    }
    select_best(r);
    return r;
}

SubsetResult sfs(const Dataset& ds, const FoldAssignment& folds, const KnnConfig& config,
                 bool run_to_completion) {
    const std::size_t p = ds.p();
    auto r = make_result(run_to_completion ? "run_to_completion" : "first_non_improving", folds,
                         config);
    FeatureSet current;
    double current_acc = -1.0;
    while (current.size() < p) {
        std::size_t best_f = p;
        double best_acc = -1.0;
        // Ascending scan with strict comparison: ties keep the lower index.
        for (std::size_t f = 0; f < p; ++f) {
            if (std::binary_search(current.begin(), current.end(), f)) continue;
            const double acc = evaluate_subset(ds, with(current, f), folds, config);
            if (acc > best_acc) {
                best_acc = acc;
                best_f = f;
            }
        }
        FeatureSet next = with(current, best_f);
        r.trace.push_back({next, best_acc});
        if (!run_to_completion && best_acc <= current_acc) {
            r.selected = current;
            r.selected_accuracy = current_acc;
            return r;
        }
        current = std::move(next);
        current_acc = best_acc;
    }
    select_best(r);
    return r;
}

SubsetResult backward_elimination(const Dataset& ds, const FoldAssignment& folds,
                                  const KnnConfig& config, bool run_to_completion) {
    const std::size_t p = ds.p();
    if (p < 2) throw std::invalid_argument("backward_elimination: needs at least 2 features");
    auto r = make_result(run_to_completion ? "run_to_completion" : "first_non_improving", folds,
                         config);
    FeatureSet current(p);
    std::iota(current.begin(), current.end(), 0);
    double current_acc = evaluate_subset(ds, current, folds, config);
    r.trace.push_back({current, current_acc});

    while (current.size() > 1) {
        std::size_t drop = p;
        double best_acc = -1.0;
        // Descending scan with strict comparison: ties drop the higher index.
        for (auto it = current.rbegin(); it != current.rend(); ++it) {
            const double acc = evaluate_subset(ds, without(current, *it), folds, config);
            if (acc > best_acc) {
                best_acc = acc;
                drop = *it;
            }
        }
        FeatureSet next = without(current, drop);
        r.trace.push_back({next, best_acc});
        if (!run_to_completion && best_acc <= current_acc) {
            r.selected = current;
            r.selected_accuracy = current_acc;
            return r;
        }
        current = std::move(next);
        current_acc = best_acc;
    }
    select_best(r);
    return r;
}

SubsetResult hybrid_filter_wrapper(const Dataset& ds, const FeatureRanking& ranking,
                                   const FoldAssignment& folds, const KnnConfig& config) {
    if (ranking.p() != ds.p())
        throw std::invalid_argument("hybrid_filter_wrapper: ranking covers " +
                                    std::to_string(ranking.p()) + " features, dataset has " +
                                    std::to_string(ds.p()));
    auto r = make_result("best_prefix", folds, config);
    FeatureSet prefix;
    for (std::size_t f : ranking.order) {
        prefix.push_back(f);
        FeatureSet sorted = prefix;
        std::sort(sorted.begin(), sorted.end());
        const double acc = evaluate_subset(ds, sorted, folds, config);
        r.trace.push_back({std::move(sorted), acc});
    }
    // Shortest prefix reaching the maximum.
    std::size_t best = 0;
    for (std::size_t i = 1; i < r.trace.size(); ++i)
        if (r.trace[i].cv_accuracy > r.trace[best].cv_accuracy) best = i;
    r.selected = r.trace[best].subset;
    r.selected_accuracy = r.trace[best].cv_accuracy;
    return r;
}

std::string subset_mask_hex(const FeatureSet& subset, std::size_t p) {
    const std::size_t digits = std::max<std::size_t>(1, (p + 3) / 4);
    std::string hex(digits, '0');
    for (std::size_t f : subset) {
        const std::size_t d = f / 4;
        const int nibble = (hex[digits - 1 - d] <= '9' ? hex[digits - 1 - d] - '0'
                                                        : hex[digits - 1 - d] - 'a' + 10) |
                           (1 << (f % 4));
        hex[digits - 1 - d] = static_cast<char>(nibble < 10 ? '0' + nibble : 'a' + nibble - 10);
    }
    return hex;
}

} // namespace featsel
