#include <doctest.h>

#include <cmath>

#include "featsel/classify.hpp"
#include "featsel/error.hpp"
#include "featsel/forest.hpp"
#include "support/testutil.hpp"

using namespace featsel;
using featsel::test::make_dataset;

namespace {

bool same_structure(const TreeModel& a, const TreeModel& b) {
    if (a.nodes().size() != b.nodes().size()) return false;
    for (std::size_t i = 0; i < a.nodes().size(); ++i) {
        const auto &x = a.nodes()[i], &y = b.nodes()[i];
        if (x.feature != y.feature || x.threshold != y.threshold || x.left != y.left || x.right != y.right ||
            x.class_counts != y.class_counts)
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("a single unbagged tree over all features is plain CART") {
    const Dataset ds = test::blobs(20, {{0, 0, 0}, {2, 1, 0}, {0, 2, 1}}, 1.0, 5);
    const auto f = ForestModel::fit(ds, {.n_trees = 1, .mtry = ds.p(), .bootstrap = false});
    CHECK(same_structure(f.trees()[0], TreeModel::fit(ds)));
    CHECK(f.oob_indices(0).empty());
    CHECK_THROWS_AS(rf_oob_accuracy(f, ds), DataError);
}

TEST_CASE("bagging") {
    const Dataset ds = test::blobs(100, {{0, 0, 0, 0}, {1, 1, 0, 0}, {0, 1, 1, 0}}, 1.0, 6);
    const auto f = ForestModel::fit(ds, {.n_trees = 100, .seed = 3});
    CHECK(f.mtry() == 2);
    CHECK(std::abs(f.oob_fraction() - 0.368) <= 0.02);
    for (std::size_t t = 0; t < f.n_trees(); ++t) {
        const auto oob = f.oob_indices(t);
        for (std::size_t i : oob) CHECK_FALSE(f.in_bag()[t][i]);
        std::size_t in = 0;
        for (bool b : f.in_bag()[t]) in += b ? 1 : 0;
        CHECK(in + oob.size() == ds.n());
    }
    const auto rep = rf_oob_report(f, ds);
    CHECK(rep.covered == ds.n());
    CHECK(rep.excluded == 0);
}

TEST_CASE("single-class data is predicted perfectly out of bag") {
    const Dataset ds = make_dataset(test::random_matrix(50, 3, 2), std::vector<Label>(50, 0));
    CHECK(rf_oob_accuracy(ForestModel::fit(ds, {.n_trees = 20}), ds) == 1.0);
}

TEST_CASE("fixtures") {
    SUBCASE("penguins out-of-bag accuracy") {
        const Dataset ds = test::penguins();
        CHECK(rf_oob_accuracy(ForestModel::fit(ds, {.n_trees = 100, .seed = 42}), ds) >= 0.93);
    }
    SUBCASE("segmentation out-of-bag accuracy tracks the k-NN holdout baseline") {
        const auto [train, test] = split(test::segmentation(), 0.5, 42);
        const double oob = rf_oob_accuracy(ForestModel::fit(train, {.n_trees = 100, .seed = 42}), train);
        const double knn = holdout_accuracy(train, test, {}).accuracy;
        CHECK(std::abs(oob - knn) <= 0.03);
    }
    SUBCASE("segmentation out-of-bag accuracy estimates the forest's own holdout accuracy") {
        const auto [train, test] = split(test::segmentation(), 0.5, 42);
        const auto f = ForestModel::fit(train, {.n_trees = 100, .seed = 42});
        CHECK(std::abs(rf_oob_accuracy(f, train) - accuracy(f.predict(test.x()), test.y())) <= 0.03);
    }
}

TEST_CASE("permutation importance") {
    SUBCASE("pure noise scores about zero") {
        Rng rng(8);
        const Dataset base = test::blobs(60, {{0, 0}, {3, 0}, {0, 3}}, 0.7, 8);
        std::vector<double> noise(base.n());
        for (double& v : noise) v = test::uniform(rng, -2, 2);
        const Dataset ds = test::with_columns(base, {noise});
        const auto f = ForestModel::fit(ds, {.n_trees = 100, .seed = 1});
        const auto imp = rf_permutation_importance(f, ds, 5, 2);
        CHECK(std::abs(imp.scores[2]) < 0.01);
        CHECK(imp.scores[0] > 0.05);
    }
    SUBCASE("a feature no tree uses scores exactly zero") {
        const Dataset base = test::blobs(30, {{0, 0}, {3, 3}}, 0.5, 9);
        const Dataset ds = test::with_columns(base, {std::vector<double>(base.n(), 1.0)});
        const auto f = ForestModel::fit(ds, {.n_trees = 30, .seed = 1});
        CHECK(rf_permutation_importance(f, ds, 3, 2).scores[2] == 0.0);
    }
    SUBCASE("bad arguments") {
        const Dataset ds = test::blobs(10, {{0, 0}, {3, 3}}, 0.5, 9);
        const auto f = ForestModel::fit(ds, {.n_trees = 10});
        CHECK_THROWS_AS(rf_permutation_importance(f, ds, 0, 2), std::invalid_argument);
        CHECK_THROWS_AS(ForestModel::fit(ds, {.mtry = 3}), std::invalid_argument);
        CHECK_THROWS_AS(ForestModel::fit(ds, {.n_trees = 0}), std::invalid_argument);
    }
}

TEST_CASE("forests are reproducible per seed") {
    const Dataset ds = test::blobs(30, {{0, 0, 0}, {2, 1, 0}, {0, 2, 1}}, 1.0, 4);
    const auto a = ForestModel::fit(ds, {.n_trees = 25, .seed = 11});
    const auto b = ForestModel::fit(ds, {.n_trees = 25, .seed = 11});
    for (std::size_t t = 0; t < 25; ++t) {
        CHECK(same_structure(a.trees()[t], b.trees()[t]));
        CHECK(a.in_bag()[t] == b.in_bag()[t]);
    }
    CHECK(rf_permutation_importance(a, ds, 2, 5).scores == rf_permutation_importance(b, ds, 2, 5).scores);
    CHECK(a.predict(ds.x()) == b.predict(ds.x()));
}
