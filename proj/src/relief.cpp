#include "featsel/relief.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "featsel/kernels.hpp"
#include "featsel/random.hpp"

namespace featsel {

FeatureRanking ReliefWeights::ranking() const {
    auto r = make_ranking(w, "relieff");
    r.seed = seed;
    return r;
}

void relief_update(std::span<double> w, std::span<const double> x, std::span<const double> hit,
                   std::span<const double> miss) {
    if (x.size() != w.size() || hit.size() != w.size() || miss.size() != w.size())
        throw std::invalid_argument("relief_update: length mismatch");
    for (std::size_t f = 0; f < w.size(); ++f) {
        const double dh = x[f] - hit[f];
        const double dm = x[f] - miss[f];
        w[f] += -dh * dh + dm * dm;
    }
}

Matrix minmax_normalize(const Matrix& x) {
    Matrix out(x.rows(), x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j) {
        double lo = x.rows() ? x(0, j) : 0.0;
        double hi = lo;
        for (std::size_t i = 1; i < x.rows(); ++i) {
            lo = std::min(lo, x(i, j));
            hi = std::max(hi, x(i, j));
        }
        const double span = hi - lo;
        for (std::size_t i = 0; i < x.rows(); ++i)
            out(i, j) = span > 0.0 ? (x(i, j) - lo) / span : 0.0;
    }
    return out;
}

namespace {

std::vector<std::size_t> query_order(std::size_t n, std::size_t iterations, std::uint64_t seed) {
    std::vector<std::size_t> q;
    if (iterations == 0) {
        q.resize(n);
        std::iota(q.begin(), q.end(), 0);
        return q;
    }
    Rng rng(seed);
    if (iterations <= n) {
        q.resize(n);
        std::iota(q.begin(), q.end(), 0);
        shuffle(std::span(q), rng);
        q.resize(iterations);
    } else {
        q.resize(iterations);
        for (auto& i : q) i = uniform_index(rng, n);
    }
    return q;
}

// k nearest members of `candidates` by (distance, index), excluding `self`.
std::vector<std::size_t> nearest(std::span<const std::size_t> candidates,
                                 std::span<const double> dist, std::size_t self, std::size_t k) {
    std::vector<std::size_t> pool;
    pool.reserve(candidates.size());
    for (std::size_t i : candidates)
        if (i != self) pool.push_back(i);
    k = std::min(k, pool.size());
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k), pool.end(),
                      [&](std::size_t a, std::size_t b) {
                          return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
                      });
    pool.resize(k);
    return pool;
}

std::vector<std::vector<std::size_t>> members_by_class(const Dataset& ds) {
    std::vector<std::vector<std::size_t>> by(ds.num_classes());
    for (std::size_t i = 0; i < ds.n(); ++i) by[ds.y()[i]].push_back(i);
    return by;
}

} // namespace

ReliefWeights relieff_weights(const Dataset& ds, const ReliefOptions& opts) {
    const std::size_t k = opts.neighbors;
    if (k < 1) throw std::invalid_argument("relieff: neighbour count must be >= 1");
    const auto by_class = members_by_class(ds);
    for (std::size_t c = 0; c < by_class.size(); ++c)
        if (!by_class[c].empty() && by_class[c].size() < k + 1)
            throw std::invalid_argument("relieff: class '" + ds.class_names()[c] + "' has " +
                                        std::to_string(by_class[c].size()) +
                                        " samples, needs at least k+1 = " + std::to_string(k + 1));

    const std::size_t n = ds.n();
    const std::size_t p = ds.p();
    const Matrix z = minmax_normalize(ds.x());
    const auto queries = query_order(n, opts.iterations, opts.seed);
    const std::size_t m = queries.size();

    std::vector<double> prior(by_class.size());
    for (std::size_t c = 0; c < by_class.size(); ++c)
        prior[c] = static_cast<double>(by_class[c].size()) / static_cast<double>(n);

    std::vector<double> w(p, 0.0);
    std::vector<double> dist(n);
    const double scale = 1.0 / (static_cast<double>(m) * static_cast<double>(k));

    for (std::size_t q : queries) {
        const auto xq = z.row(q);
        kernels::manhattan_rows(xq, z.data(), dist);
        const Label cq = ds.y()[q];

        for (std::size_t h : nearest(by_class[cq], dist, q, k)) {
            const auto xh = z.row(h);
            for (std::size_t f = 0; f < p; ++f) {
                const double d = xq[f] - xh[f];
                w[f] -= d * d * scale;
            }
        }
        const double other_mass = 1.0 - prior[cq];
        for (std::size_t c = 0; c < by_class.size(); ++c) {
            if (c == cq || by_class[c].empty()) continue;
            const double weight = prior[c] / other_mass * scale;
            for (std::size_t mi : nearest(by_class[c], dist, q, k)) {
                const auto xm = z.row(mi);
                for (std::size_t f = 0; f < p; ++f) {
                    const double d = xq[f] - xm[f];
                    w[f] += d * d * weight;
                }
            }
        }
    }
    return {std::move(w), m, k, opts.seed};
}

ReliefWeights relief_basic(const Dataset& ds, std::size_t iterations, std::uint64_t seed) {
    const auto by_class = members_by_class(ds);
    std::size_t present = 0;
    for (const auto& members : by_class) present += !members.empty();
    if (present != 2) throw std::invalid_argument("relief: needs exactly two classes");
    for (const auto& members : by_class)
        if (members.size() == 1) throw std::invalid_argument("relief: class with a single sample");

    const std::size_t n = ds.n();
    const Matrix z = minmax_normalize(ds.x());
    const auto queries = query_order(n, iterations, seed);
    std::vector<double> w(ds.p(), 0.0);
    std::vector<double> dist(n);

    for (std::size_t q : queries) {
        kernels::manhattan_rows(z.row(q), z.data(), dist);
        const Label cq = ds.y()[q];
        std::size_t other = 0;
        while (other == cq || by_class[other].empty()) ++other;
        const std::size_t hit = nearest(by_class[cq], dist, q, 1).front();
        const std::size_t miss = nearest(by_class[other], dist, q, 1).front();
        relief_update(w, z.row(q), z.row(hit), z.row(miss));
    }
    for (double& v : w) v /= static_cast<double>(queries.size());
    return {std::move(w), queries.size(), 1, seed};
}

} // namespace featsel
