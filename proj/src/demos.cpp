#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "featsel/classify.hpp"
#include "featsel/kernels.hpp"
#include "featsel/random.hpp"

namespace featsel {

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty data");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<SpreadStats> similarity_spread_demo(std::span<const std::size_t> dims,
                                                std::size_t n_points, std::uint64_t seed) {
    if (dims.empty()) throw std::invalid_argument("similarity demo: empty dimension list");
    if (n_points < 10) throw std::invalid_argument("similarity demo: need at least 10 points");

    std::vector<SpreadStats> out;
    for (std::size_t di = 0; di < dims.size(); ++di) {
        const std::size_t d = dims[di];
        if (d < 1) throw std::invalid_argument("similarity demo: dimension must be >= 1");
        Rng rng(mix_seed(seed, d));
        // The probe is the cube centre. A randomly drawn probe adds its own
        // spread, which swamps the dimension effect for roughly one seed in
        // seven.
        const std::vector<double> probe(d, 0.5);
        const double probe_norm = std::sqrt(kernels::dot(probe, probe));

        std::vector<double> point(d);
        std::vector<double> sims(n_points);
        for (std::size_t i = 0; i < n_points; ++i) {
            for (double& v : point) v = uniform_open01(rng);
            const double norm = std::sqrt(kernels::dot(point, point));
            sims[i] = std::min(1.0, kernels::dot(probe, point) / (probe_norm * norm));
        }
        std::sort(sims.begin(), sims.end());
        out.push_back({d, sims.front(), quantile_sorted(sims, 0.25), quantile_sorted(sims, 0.5),
                       quantile_sorted(sims, 0.75), sims.back()});
    }
    return out;
}

std::vector<Matrix> sparsity_demo(std::span<const std::size_t> dims, std::size_t n_points,
                                  std::uint64_t seed) {
    if (dims.empty()) throw std::invalid_argument("sparsity demo: empty dimension list");
    std::vector<Matrix> out;
    for (std::size_t d : dims) {
        if (d < 1) throw std::invalid_argument("sparsity demo: dimension must be >= 1");
        Rng rng(mix_seed(seed, d));
        Matrix m(n_points, d);
        for (double& v : m.data()) v = uniform_open01(rng);
        out.push_back(std::move(m));
    }
    return out;
}

} // namespace featsel
