#include "featsel/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "featsel/classify.hpp"
#include "featsel/error.hpp"

namespace featsel {

ForestModel ForestModel::fit(const Dataset& train, const ForestOptions& opts) {
    const std::size_t n = train.n();
    const std::size_t p = train.p();
    if (opts.n_trees < 1) throw std::invalid_argument("rf_fit: n_trees must be >= 1");
    if (opts.mtry > p)
        throw std::invalid_argument("rf_fit: mtry = " + std::to_string(opts.mtry) +
                                    " exceeds p = " + std::to_string(p));
    if (n < 2) throw std::invalid_argument("rf_fit: need at least 2 samples");

    ForestModel m;
    m.mtry_ = opts.mtry != 0
                  ? opts.mtry
                  : std::max<std::size_t>(1, static_cast<std::size_t>(
                                                 std::floor(std::sqrt(static_cast<double>(p)))));
    m.seed_ = opts.seed;
    m.num_classes_ = train.num_classes();
    m.trees_.reserve(opts.n_trees);
    m.in_bag_.reserve(opts.n_trees);

    TreeOptions tree_opts;
    tree_opts.criterion = opts.criterion;
    tree_opts.max_features = m.mtry_;

    std::vector<std::size_t> bag(n);
    for (std::size_t t = 0; t < opts.n_trees; ++t) {
        Rng rng(mix_seed(opts.seed, t));
        std::vector<bool> mask(n, false);
        if (opts.bootstrap) {
            for (std::size_t i = 0; i < n; ++i) {
                bag[i] = uniform_index(rng, n);
                mask[bag[i]] = true;
            }
            std::sort(bag.begin(), bag.end());
        } else {
            std::iota(bag.begin(), bag.end(), 0);
            mask.assign(n, true);
        }
        m.trees_.push_back(TreeModel::fit_indices(train, bag, tree_opts, &rng));
        m.in_bag_.push_back(std::move(mask));
    }
    return m;
}

std::vector<Label> ForestModel::predict(const Matrix& x) const {
    std::vector<Label> out(x.rows());
    std::vector<std::size_t> votes(num_classes_);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        std::fill(votes.begin(), votes.end(), 0);
        for (const auto& tree : trees_) ++votes[tree.predict_one(x.row(i))];
        out[i] = static_cast<Label>(std::max_element(votes.begin(), votes.end()) - votes.begin());
    }
    return out;
}

double ForestModel::oob_fraction() const {
    double sum = 0.0;
    for (const auto& mask : in_bag_)
        sum += static_cast<double>(std::count(mask.begin(), mask.end(), false)) /
               static_cast<double>(mask.size());
    return sum / static_cast<double>(in_bag_.size());
}

std::vector<std::size_t> ForestModel::oob_indices(std::size_t t) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < in_bag_[t].size(); ++i)
        if (!in_bag_[t][i]) out.push_back(i);
    return out;
}

OobReport rf_oob_report(const ForestModel& model, const Dataset& train) {
    const std::size_t n = train.n();
    if (!model.in_bag().empty() && model.in_bag().front().size() != n)
        throw std::invalid_argument("rf_oob_accuracy: dataset does not match the training set");
    std::vector<std::vector<std::size_t>> votes(n, std::vector<std::size_t>(model.num_classes(), 0));
    std::vector<bool> covered(n, false);
    for (std::size_t t = 0; t < model.n_trees(); ++t) {
        for (std::size_t i : model.oob_indices(t)) {
            ++votes[i][model.trees()[t].predict_one(train.x().row(i))];
            covered[i] = true;
        }
    }
    OobReport r;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!covered[i]) {
            ++r.excluded;
            continue;
        }
        ++r.covered;
        const auto& v = votes[i];
        if (static_cast<Label>(std::max_element(v.begin(), v.end()) - v.begin()) == train.y()[i])
            ++correct;
    }
    if (r.covered == 0)
        throw DataError("rf_oob_accuracy: no sample is out-of-bag in any tree; add trees");
    r.accuracy = static_cast<double>(correct) / static_cast<double>(r.covered);
    return r;
}

double rf_oob_accuracy(const ForestModel& model, const Dataset& train) {
    return rf_oob_report(model, train).accuracy;
}

FeatureRanking rf_permutation_importance(const ForestModel& model, const Dataset& train,
                                         std::size_t repeats, std::uint64_t seed) {
    if (repeats < 1) throw std::invalid_argument("rf_permutation_importance: repeats must be >= 1");
    const std::size_t p = train.p();
    std::vector<double> sum(p, 0.0);
    std::size_t used_trees = 0;

    for (std::size_t t = 0; t < model.n_trees(); ++t) {
        const auto oob = model.oob_indices(t);
        if (oob.empty()) continue;
        ++used_trees;
        const TreeModel& tree = model.trees()[t];
        Matrix x = train.x().select_rows(oob);
        const auto truth = [&] {
            std::vector<Label> y(oob.size());
            for (std::size_t i = 0; i < oob.size(); ++i) y[i] = train.y()[oob[i]];
            return y;
        }();
        const double base = accuracy(truth, tree.predict(x));

        for (std::size_t f : tree.used_features()) {
            const std::vector<double> original = x.column(f);
            std::vector<double> col = original;
            double drop = 0.0;
            for (std::size_t r = 0; r < repeats; ++r) {
                Rng rng(mix_seed(mix_seed(seed, t), f * repeats + r));
                col = original;
                shuffle(std::span<double>(col), rng);
                for (std::size_t i = 0; i < oob.size(); ++i) x(i, f) = col[i];
                drop += base - accuracy(truth, tree.predict(x));
            }
            for (std::size_t i = 0; i < oob.size(); ++i) x(i, f) = original[i];
            sum[f] += drop / static_cast<double>(repeats);
        }
    }
    if (used_trees == 0)
        throw DataError("rf_permutation_importance: no tree has out-of-bag samples");
    for (double& s : sum) s /= static_cast<double>(used_trees);
    auto ranking = make_ranking(std::move(sum), "rf");
    ranking.seed = seed;
    return ranking;
}

} // namespace featsel
