#include "featsel/cfs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "featsel/filters.hpp"

namespace featsel {
namespace {

std::size_t code_count(std::span<const std::uint32_t> v) {
    return v.empty() ? 0 : static_cast<std::size_t>(*std::max_element(v.begin(), v.end())) + 1;
}

std::vector<std::uint32_t> to_codes(std::span<const Label> y) {
    return {y.begin(), y.end()};
}

} // namespace

double symmetrical_uncertainty(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("symmetrical_uncertainty: length mismatch");
    const std::size_t na = code_count(a);
    const std::size_t nb = code_count(b);
    std::vector<std::size_t> ca(na, 0), cb(nb, 0), joint(na * nb, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++ca[a[i]];
        ++cb[b[i]];
        ++joint[a[i] * nb + b[i]];
    }
    const double ha = entropy_of_counts(ca);
    const double hb = entropy_of_counts(cb);
    const double denom = ha + hb;
    if (denom <= 0.0) return 0.0;
    const double mi = std::max(0.0, ha + hb - entropy_of_counts(joint));
    return std::clamp(2.0 * mi / denom, 0.0, 1.0);
}

CorrelationCache::CorrelationCache(const DiscretizedView& dv, std::span<const Label> y)
    : dv_(&dv) {
    if (y.size() != dv.n) throw std::invalid_argument("CorrelationCache: label length mismatch");
    const auto codes = to_codes(y);
    r_cf_.resize(dv.p());
    for (std::size_t f = 0; f < dv.p(); ++f) r_cf_[f] = symmetrical_uncertainty(dv.column(f), codes);
    r_ff_.assign(dv.p() * dv.p(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t f = 0; f < dv.p(); ++f) r_ff_[f * dv.p() + f] = 1.0;
    if (dv.p() <= 64) precompute();
}

double CorrelationCache::r_ff(std::size_t a, std::size_t b) const {
    const std::size_t p = r_cf_.size();
    double& slot = r_ff_[a * p + b];
    if (std::isnan(slot)) {
        slot = symmetrical_uncertainty(dv_->column(a), dv_->column(b));
        r_ff_[b * p + a] = slot;
    }
    return slot;
}

void CorrelationCache::precompute() const {
    for (std::size_t a = 0; a < p(); ++a)
        for (std::size_t b = a + 1; b < p(); ++b) r_ff(a, b);
}

double merit_from_means(std::size_t k, double mean_rcf, double mean_rff) {
    const double kd = static_cast<double>(k);
    return kd * mean_rcf / std::sqrt(kd + kd * (kd - 1.0) * mean_rff);
}

double merit(std::span<const std::size_t> subset, const CorrelationCache& cache) {
    if (subset.empty()) throw std::invalid_argument("merit: empty subset");
    const std::size_t k = subset.size();
    double rcf = 0.0;
    for (std::size_t f : subset) rcf += cache.r_cf(f);
    rcf /= static_cast<double>(k);
    double rff = 0.0;
    if (k > 1) {
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) rff += cache.r_ff(subset[i], subset[j]);
        rff /= static_cast<double>(k * (k - 1) / 2);
    }
    return merit_from_means(k, rcf, rff);
}

namespace {

struct OpenOrder {
    bool operator()(const MeritStep& a, const MeritStep& b) const {
        if (a.merit != b.merit) return a.merit > b.merit;
        return a.subset < b.subset;
    }
};

bool improves(const MeritStep& cand, const MeritStep& best) {
    if (cand.merit != best.merit) return cand.merit > best.merit;
    if (cand.subset.size() != best.subset.size()) return cand.subset.size() < best.subset.size();
    return cand.subset < best.subset;
}

} // namespace

MeritTrace cfs_search(const DiscretizedView& dv, std::span<const Label> y, const CfsOptions& opts) {
    const std::size_t p = dv.p();
    if (p == 0) throw std::invalid_argument("cfs_search: no features");
    const CorrelationCache cache(dv, y);
    const std::size_t stall_limit =
        opts.stall_limit == 0 ? std::numeric_limits<std::size_t>::max() : opts.stall_limit;

    MeritTrace trace;
    std::set<MeritStep, OpenOrder> open;
    std::set<FeatureSet> seen;
    MeritStep best{{}, 0.0};  // empty set has merit 0
    open.insert(best);
    seen.insert({});

    std::size_t stalls = 0;
    while (stalls < stall_limit && !open.empty()) {
        const MeritStep head = *open.begin();
        open.erase(open.begin());
        trace.expansions.push_back(head);
        trace.final_subset = head.subset;

        bool improved = false;
        for (std::size_t f = 0; f < p; ++f) {
            if (std::binary_search(head.subset.begin(), head.subset.end(), f)) continue;
            MeritStep child{head.subset, 0.0};
            child.subset.insert(std::upper_bound(child.subset.begin(), child.subset.end(), f), f);
            if (!seen.insert(child.subset).second) continue;
            child.merit = merit(child.subset, cache);
            trace.steps.push_back(child);
            if (improves(child, best)) {
                best = child;
                improved = true;
            }
            open.insert(std::move(child));
        }
        stalls = improved ? 0 : stalls + 1;
    }
    trace.best_subset = best.subset;
    trace.best_merit = best.merit;
    return trace;
}

} // namespace featsel
