#include "featsel/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace featsel {

FeatureRanking make_ranking(std::vector<double> scores, std::string method) {
    for (double s : scores)
        if (!std::isfinite(s)) throw std::runtime_error(method + ": non-finite feature score");
    FeatureRanking r;
    r.order.resize(scores.size());
    std::iota(r.order.begin(), r.order.end(), 0);
    std::stable_sort(r.order.begin(), r.order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    r.scores = std::move(scores);
    r.method = std::move(method);
    return r;
}

std::vector<std::size_t> FeatureRanking::positions() const {
    std::vector<std::size_t> pos(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    return pos;
}

std::vector<std::size_t> FeatureRanking::top(std::size_t k) const {
    k = std::min(k, order.size());
    return {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k)};
}

} // namespace featsel
