#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "featsel/data.hpp"
#include "featsel/error.hpp"
#include "support/testutil.hpp"

using namespace featsel;
using featsel::test::make_dataset;

TEST_CASE("bundled fixtures load with their published shapes") {
    const Dataset pen = test::penguins();
    CHECK(pen.n() == 333);
    CHECK(pen.p() == 4);
    CHECK(pen.num_classes() == 3);
    const Dataset seg = test::segmentation();
    CHECK(seg.n() == 2310);
    CHECK(seg.p() == 19);
    CHECK(seg.num_classes() == 7);
}

TEST_CASE("csv parsing") {
    SUBCASE("minimal valid input") {
        const Dataset ds = parse_csv("x,label\n1.5,a\n2.5,b\n", "label");
        CHECK(ds.n() == 2);
        CHECK(ds.p() == 1);
        CHECK(ds.num_classes() == 2);
    }
    SUBCASE("label column is removed wherever it sits and feature order is kept") {
        const Dataset ds = parse_csv("a,cls,b\n1,x,2\n3,y,4\n5,x,6\n", "cls");
        CHECK(ds.feature_names() == std::vector<std::string>{"a", "b"});
        CHECK(ds.x()(1, 0) == 3.0);
        CHECK(ds.x()(1, 1) == 4.0);
    }
    SUBCASE("classes are numbered by first appearance") {
        const Dataset ds = parse_csv("v,c\n1,zeta\n2,alpha\n3,zeta\n4,mid\n", "c");
        CHECK(ds.class_names() == std::vector<std::string>{"zeta", "alpha", "mid"});
        CHECK(std::vector<Label>(ds.y().begin(), ds.y().end()) == std::vector<Label>{0, 1, 0, 2});
    }
    SUBCASE("scientific notation") {
        const Dataset ds = parse_csv("v,c\n1e-3,a\n-2.5E+2,b\n", "c");
        CHECK(ds.x()(0, 0) == doctest::Approx(1e-3));
        CHECK(ds.x()(1, 0) == doctest::Approx(-250.0));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(load_csv(test::data_path("does_not_exist.csv"), "class"), DataError);
        CHECK_THROWS_AS(parse_csv("v,c\n1,a\n2,b\n", "label"), DataError);
        CHECK_THROWS_AS(parse_csv("v,c\n1,a\n", "c"), DataError);
        CHECK_THROWS_AS(parse_csv("v,c\n1,a\n2,a\n", "c"), DataError);
        CHECK_THROWS_AS(parse_csv("v,c\n1,a\n2\n", "c"), DataError);
        try {
            parse_csv("v,w,c\n1,2,a\n3,oops,b\n", "c", "t.csv");
            FAIL("expected a DataError");
        } catch (const DataError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("oops") != std::string::npos);
            CHECK(msg.find("line 3") != std::string::npos);
            CHECK(msg.find("'w'") != std::string::npos);
        }
    }
}

TEST_CASE("dataset invariants are enforced") {
    CHECK_THROWS_AS(make_dataset(Matrix{{1.0}, {2.0}}, {0}), DataError);
    CHECK_THROWS_AS(make_dataset(Matrix{{1.0}, {NAN}}, {0, 1}), DataError);
    CHECK_THROWS_AS(Dataset(Matrix{{1.0}, {2.0}}, {0, 2}, {"f"}, {"a", "b"}), DataError);
}

TEST_CASE("split") {
    const Dataset pen = test::penguins();
    SUBCASE("50:50 on penguins gives 166/167") {
        const auto [train, test] = split(pen, 0.5, 42);
        CHECK(train.n() + test.n() == 333);
        CHECK(std::min(train.n(), test.n()) == 166);
    }
    SUBCASE("stratified halves keep each class within one sample of 50%") {
        const auto idx = split_indices(pen, 0.5, 7);
        std::vector<int> train(3, 0), test(3, 0);
        for (auto i : idx.train) ++train[pen.y()[i]];
        for (auto i : idx.test) ++test[pen.y()[i]];
        for (int c = 0; c < 3; ++c) CHECK(std::abs(train[c] - test[c]) <= 1);
    }
    SUBCASE("round trip and determinism for many seeds") {
        for (std::uint64_t seed = 0; seed < 20; ++seed)
            for (bool strat : {true, false}) {
                const auto a = split_indices(pen, 0.3, seed, strat);
                const auto b = split_indices(pen, 0.3, seed, strat);
                CHECK(a.train == b.train);
                CHECK(a.test == b.test);
                std::vector<std::size_t> all = a.train;
                all.insert(all.end(), a.test.begin(), a.test.end());
                std::sort(all.begin(), all.end());
                for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);
            }
    }
    SUBCASE("different seeds give different partitions") {
        CHECK(split_indices(pen, 0.5, 1).test != split_indices(pen, 0.5, 2).test);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(split(pen, 0.0, 1), std::invalid_argument);
        CHECK_THROWS_AS(split(pen, 1.0, 1), std::invalid_argument);
        const Dataset lonely = make_dataset(Matrix{{1}, {2}, {3}, {4}}, {0, 0, 0, 1});
        CHECK_THROWS_AS(split(lonely, 0.5, 1), DataError);
        CHECK_NOTHROW(split(lonely, 0.5, 1, false));
    }
}

TEST_CASE("kfold") {
    SUBCASE("even division") {
        const auto f = kfold(10, 5, 3);
        CHECK(f.fold_sizes() == std::vector<std::size_t>(5, 2));
    }
    SUBCASE("remainder distribution") {
        auto sizes = kfold(11, 5, 3).fold_sizes();
        std::sort(sizes.rbegin(), sizes.rend());
        CHECK(sizes == std::vector<std::size_t>{3, 2, 2, 2, 2});
    }
    SUBCASE("segmentation, 10 stratified folds of 33 per class") {
        const Dataset seg = test::segmentation();
        const auto f = kfold(seg, 10, 42);
        for (std::size_t k = 0; k < 10; ++k) {
            std::vector<int> counts(7, 0);
            for (auto i : f.members(k)) ++counts[seg.y()[i]];
            CHECK(counts == std::vector<int>(7, 33));
        }
    }
    SUBCASE("invariants over random label vectors") {
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            Rng rng(seed);
            const std::size_t n = 20 + uniform_index(rng, 60);
            const std::size_t c = 2 + uniform_index(rng, 3);
            std::vector<Label> y(n);
            for (std::size_t i = 0; i < n; ++i) y[i] = i < c * 6 ? i % c : uniform_index(rng, c);
            const Dataset ds = make_dataset(test::random_matrix(n, 1, seed), y);
            const std::size_t k = 2 + uniform_index(rng, 4);
            const auto f = kfold(ds, k, seed);
            CHECK(f.fold_of == kfold(ds, k, seed).fold_of);
            const auto sizes = f.fold_sizes();
            CHECK(*std::min_element(sizes.begin(), sizes.end()) >= 1);
            CHECK(*std::max_element(sizes.begin(), sizes.end()) -
                      *std::min_element(sizes.begin(), sizes.end()) <=
                  1);
            for (Label cls = 0; cls < c; ++cls) {
                std::vector<int> per(k, 0);
                for (std::size_t i = 0; i < n; ++i)
                    if (y[i] == cls) ++per[f.fold_of[i]];
                CHECK(*std::max_element(per.begin(), per.end()) - *std::min_element(per.begin(), per.end()) <= 1);
            }
            for (std::size_t fold = 0; fold < k; ++fold)
                CHECK(f.members(fold).size() + f.complement(fold).size() == n);
        }
    }
    SUBCASE("small class falls back to plain folds with a warning") {
        const Dataset ds = make_dataset(test::random_matrix(12, 1, 1), {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1});
        test::WarningCapture warnings;
        const auto f = kfold(ds, 5, 1);
        CHECK(!f.stratified);
        CHECK(warnings.messages.size() == 1);
    }
    SUBCASE("K out of range") {
        CHECK_THROWS_AS(kfold(10, 1, 0), std::invalid_argument);
        CHECK_THROWS_AS(kfold(10, 11, 0), std::invalid_argument);
    }
}

TEST_CASE("equal-frequency discretization") {
    SUBCASE("median cut") {
        const auto dv = discretize_equal_frequency(Matrix{{1}, {2}, {3}, {4}}, 2);
        CHECK(dv.bins[0] == std::vector<std::uint32_t>{0, 0, 1, 1});
    }
    SUBCASE("constant column collapses to one bin") {
        const auto dv = discretize_equal_frequency(Matrix(20, 1, 3.5), 10);
        CHECK(dv.bins_per_feature[0] == 1);
        CHECK(std::all_of(dv.bins[0].begin(), dv.bins[0].end(), [](auto b) { return b == 0; }));
    }
    SUBCASE("100 uniform values into 10 bins of 10") {
        const auto dv = discretize_equal_frequency(test::random_matrix(100, 1, 5), 10);
        std::vector<int> pop(10, 0);
        for (auto b : dv.bins[0]) ++pop[b];
        CHECK(pop == std::vector<int>(10, 10));
    }
    SUBCASE("values equal to a cut go to the lower bin") {
        const std::vector<double> edges{1.0, 2.0};
        CHECK(bin_of(edges, 1.0) == 0);
        CHECK(bin_of(edges, 1.5) == 1);
        CHECK(bin_of(edges, 2.0) == 1);
        CHECK(bin_of(edges, 2.5) == 2);
    }
    SUBCASE("invariants on tied and skewed data") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Rng rng(seed);
            Matrix x(80, 3);
            for (std::size_t i = 0; i < 80; ++i) {
                x(i, 0) = test::uniform(rng, 0, 1);
                x(i, 1) = static_cast<double>(uniform_index(rng, 4));        // heavy ties
                x(i, 2) = std::exp(5.0 * test::uniform(rng, 0, 1));          // skew
            }
            const std::size_t bins = 2 + seed % 9;
            const auto dv = discretize_equal_frequency(x, bins);
            CHECK(dv.apply(x) == dv.bins);
            for (std::size_t j = 0; j < 3; ++j) {
                const auto& e = dv.bin_edges[j];
                CHECK(std::adjacent_find(e.begin(), e.end(), std::greater_equal<>()) == e.end());
                CHECK(dv.bins_per_feature[j] == e.size() + 1);
                for (auto b : dv.bins[j]) CHECK(b < dv.bins_per_feature[j]);
            }
            // Re-binning the ids with fresh edges changes nothing.
            Matrix ids(80, 3);
            for (std::size_t i = 0; i < 80; ++i)
                for (std::size_t j = 0; j < 3; ++j) ids(i, j) = dv.bins[j][i];
            const auto again = discretize_equal_frequency(ids, bins);
            for (std::size_t j = 0; j < 3; ++j) {
                std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
                for (std::size_t i = 0; i < 80; ++i) pairs.insert({dv.bins[j][i], again.bins[j][i]});
                std::set<std::uint32_t> firsts;
                for (auto [a, b] : pairs) firsts.insert(a);
                CHECK(firsts.size() == pairs.size());
            }
        }
    }
    SUBCASE("bins < 2 is rejected") {
        CHECK_THROWS_AS(discretize_equal_frequency(Matrix(4, 1, 1.0), 1), std::invalid_argument);
    }
}

TEST_CASE("standardizer") {
    Matrix x = test::random_matrix(50, 3, 9, -10, 40);
    for (std::size_t i = 0; i < 50; ++i) x(i, 1) = 7.0;
    const auto s = Standardizer::fit(x);
    const Matrix z = s.transform(x);
    CHECK(s.constant()[1]);
    CHECK(!s.constant()[0]);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(s.stdevs()[j] >= 0.0);
        double mean = 0, sq = 0;
        for (std::size_t i = 0; i < 50; ++i) mean += z(i, j) / 50;
        for (std::size_t i = 0; i < 50; ++i) sq += (z(i, j) - mean) * (z(i, j) - mean) / 50;
        CHECK(std::abs(mean) < 1e-9);
        CHECK(sq == doctest::Approx(j == 1 ? 0.0 : 1.0));
    }
    std::vector<double> row(3);
    s.transform_row(x.row(4), row);
    for (std::size_t j = 0; j < 3; ++j) CHECK(row[j] == z(4, j));
}

TEST_CASE("dataset views") {
    const Dataset pen = test::penguins();
    const std::vector<Label> keep{pen.class_id("Chinstrap"), pen.class_id("Adelie")};
    const Dataset two = pen.restrict_classes(keep);
    CHECK(two.class_names() == std::vector<std::string>{"Chinstrap", "Adelie"});
    const auto counts = two.class_counts();
    const auto full = pen.class_counts();
    CHECK(counts[0] == full[keep[0]]);
    CHECK(counts[1] == full[keep[1]]);
    CHECK(pen.feature_index("flipper_length") == 2);
    CHECK_THROWS_AS(pen.feature_index("wingspan"), std::invalid_argument);
    CHECK_THROWS_AS(pen.class_id("Emperor"), std::invalid_argument);
    const std::vector<std::size_t> cols{3, 0};
    const Dataset sub = pen.subset_features(cols);
    CHECK(sub.feature_names() == std::vector<std::string>{"body_mass", "bill_length"});
    CHECK(sub.x()(10, 0) == pen.x()(10, 3));
}
