#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "featsel/classify.hpp"
#include "featsel/filters.hpp"
#include "oracles/oracles.hpp"
#include "support/testutil.hpp"

using namespace featsel;
using featsel::test::make_dataset;

namespace {

FeatureRanking ranking_of(std::vector<double> s) { return make_ranking(std::move(s), "test"); }

std::vector<std::uint32_t> codes(std::initializer_list<int> v) { return {v.begin(), v.end()}; }

} // namespace

TEST_CASE("chi-square") {
    SUBCASE("independent table scores 0") {
        // Same handedness proportions in both rows.
        CHECK(chi_square(ContingencyTable::from_counts({{30, 10}, {60, 20}})) == doctest::Approx(0.0));
    }
    SUBCASE("hand-worked 2x2 table") {
        CHECK(chi_square(ContingencyTable::from_counts({{40, 10}, {10, 40}})) == doctest::Approx(36.0));
    }
    SUBCASE("constant feature scores 0") {
        const auto dv = discretize_equal_frequency(Matrix(6, 1, 2.0), 3);
        const std::vector<Label> y{0, 1, 0, 1, 0, 1};
        CHECK(chi_square_score(dv, y, 2, 0) == 0.0);
        CHECK(info_gain_score(dv, y, 2, 0) == 0.0);
    }
    SUBCASE("table marginals") {
        const auto t = ContingencyTable::build(codes({0, 1, 1, 2}), std::vector<Label>{0, 0, 1, 1}, 3, 2);
        CHECK(t.total == 4);
        CHECK(t.row_totals == std::vector<std::size_t>{1, 2, 1});
        CHECK(t.col_totals == std::vector<std::size_t>{2, 2});
    }
}

TEST_CASE("entropy") {
    CHECK(entropy(std::vector<Label>{0, 1, 0, 1}) == doctest::Approx(1.0));
    CHECK(entropy(std::vector<Label>{2, 2, 2}) == 0.0);
    CHECK(entropy(std::vector<Label>{0, 1, 1, 1}) == doctest::Approx(0.811278).epsilon(1e-6));
    CHECK_THROWS_AS(entropy(std::vector<Label>{}), std::invalid_argument);
}

TEST_CASE("information gain") {
    SUBCASE("feature identical to the class earns H(D)") {
        const std::vector<Label> y{0, 1, 2, 0, 1, 2, 2, 2};
        const auto t = ContingencyTable::build(codes({0, 1, 2, 0, 1, 2, 2, 2}), y, 3, 3);
        CHECK(information_gain(t) == doctest::Approx(entropy(y)));
    }
    SUBCASE("bounds hold on random data") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Rng rng(seed);
            std::vector<Label> y(60);
            for (auto& v : y) v = uniform_index(rng, 3);
            y[0] = 0, y[1] = 1, y[2] = 2;
            const Matrix x = test::random_matrix(60, 4, seed);
            const auto dv = discretize_equal_frequency(x, 2 + seed % 6);
            for (std::size_t f = 0; f < 4; ++f) {
                const double ig = info_gain_score(dv, y, 3, f);
                CHECK(ig >= 0.0);
                CHECK(ig <= entropy(y) + 1e-12);
                CHECK(chi_square_score(dv, y, 3, f) >= 0.0);
            }
        }
    }
}

TEST_CASE("scores are invariant to relabelling and sample order") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        const std::size_t n = 40;
        std::vector<std::uint32_t> bins(n);
        std::vector<Label> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            bins[i] = static_cast<std::uint32_t>(uniform_index(rng, 4));
            y[i] = i < 3 ? i : uniform_index(rng, 3);
        }
        const double chi = oracle::chi_square(bins, y);
        const double ig = oracle::info_gain(bins, y);
        const auto t = ContingencyTable::build(bins, y, 4, 3);
        CHECK(chi_square(t) == doctest::Approx(chi).epsilon(1e-12));
        CHECK(information_gain(t) == doctest::Approx(ig).epsilon(1e-12));

        // Bijective relabelling of bins and classes.
        const std::uint32_t bin_map[4] = {2, 0, 3, 1};
        const Label class_map[3] = {1, 2, 0};
        std::vector<std::uint32_t> b2(n);
        std::vector<Label> y2(n);
        for (std::size_t i = 0; i < n; ++i) {
            b2[i] = bin_map[bins[i]];
            y2[i] = class_map[y[i]];
        }
        const auto t2 = ContingencyTable::build(b2, y2, 4, 3);
        CHECK(chi_square(t2) == doctest::Approx(chi).epsilon(1e-12));
        CHECK(information_gain(t2) == doctest::Approx(ig).epsilon(1e-12));

        // Sample order.
        const auto perm = test::random_permutation(n, seed);
        std::vector<std::uint32_t> b3(n);
        std::vector<Label> y3(n);
        for (std::size_t i = 0; i < n; ++i) {
            b3[i] = bins[perm[i]];
            y3[i] = y[perm[i]];
        }
        const auto t3 = ContingencyTable::build(b3, y3, 4, 3);
        CHECK(chi_square(t3) == doctest::Approx(chi).epsilon(1e-12));
        CHECK(information_gain(t3) == doctest::Approx(ig).epsilon(1e-12));
    }
}

TEST_CASE("rank_features") {
    SUBCASE("all-constant features: zero scores, identity order") {
        const Dataset ds = make_dataset(Matrix(10, 3, 1.0), {0, 1, 0, 1, 0, 1, 0, 1, 0, 1});
        for (auto m : {RankMethod::chi2, RankMethod::igain}) {
            const auto r = rank_features(ds, m);
            CHECK(r.scores == std::vector<double>(3, 0.0));
            CHECK(r.order == std::vector<std::size_t>{0, 1, 2});
        }
    }
    SUBCASE("duplicated columns score equally and sit next to each other") {
        const Dataset base = test::blobs(30, {{0, 0, 0}, {2, 0, 1}}, 1.0, 4);
        const Dataset ds = test::with_columns(base, {base.x().column(0)});
        for (auto m : {RankMethod::chi2, RankMethod::igain}) {
            const auto r = rank_features(ds, m);
            CHECK(r.scores[0] == r.scores[3]);
            const auto pos = r.positions();
            CHECK(pos[3] == pos[0] + 1);
        }
    }
    SUBCASE("ranking invariants") {
        const Dataset seg = test::segmentation();
        for (auto m : {RankMethod::chi2, RankMethod::igain}) {
            const auto r = rank_features(seg, m, {.bins = 10});
            CHECK(r.bins == 10);
            CHECK(r.method == rank_method_name(m));
            for (std::size_t i = 0; i + 1 < r.order.size(); ++i) {
                const double a = r.scores[r.order[i]], b = r.scores[r.order[i + 1]];
                CHECK((a > b || (a == b && r.order[i] < r.order[i + 1])));
            }
            for (double s : r.scores) CHECK(s >= 0.0);
        }
    }
    SUBCASE("unknown method") { CHECK_THROWS_AS(parse_rank_method("gainratio"), std::invalid_argument); }
}

TEST_CASE("selection policies") {
    const auto r = ranking_of({4, 3, 2, 1});
    CHECK(apply_policy(r, SelectionPolicy::top_k_of(2)) == FeatureSet{0, 1});
    CHECK(apply_policy(r, SelectionPolicy::top_k_of(9)) == FeatureSet{0, 1, 2, 3});
    CHECK(apply_policy(r, SelectionPolicy::above_half_max()) == FeatureSet{0, 1});
    CHECK(apply_policy(r, SelectionPolicy::top_fraction_of(0.5)) == FeatureSet{0, 1});
    CHECK(apply_policy(ranking_of({1, 0, 0.5, 0}), SelectionPolicy::nonzero()) == FeatureSet{0, 2});
    CHECK(apply_policy(ranking_of({1, 3, 2}), SelectionPolicy::top_k_of(2)) == FeatureSet{1, 2});
    CHECK_THROWS_AS(apply_policy(r, SelectionPolicy::top_k_of(0)), std::invalid_argument);
    CHECK_THROWS_AS(apply_policy(r, SelectionPolicy::top_fraction_of(0.0)), std::invalid_argument);
}

TEST_CASE("rank correlation") {
    const auto a = ranking_of({0.1, 0.5, 0.3, 0.9, 0.7});
    const auto rev = ranking_of({0.9, 0.5, 0.7, 0.1, 0.3});
    CHECK(rank_correlation(a, a, CorrelationKind::pearson) == doctest::Approx(1.0));
    CHECK(rank_correlation(a, a, CorrelationKind::spearman) == doctest::Approx(1.0));
    CHECK(rank_correlation(a, rev, CorrelationKind::spearman) == doctest::Approx(-1.0));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Matrix m = test::random_matrix(2, 8, seed);
        const auto x = ranking_of({m.row(0).begin(), m.row(0).end()});
        const auto y = ranking_of({m.row(1).begin(), m.row(1).end()});
        for (auto k : {CorrelationKind::pearson, CorrelationKind::spearman}) {
            const double r = rank_correlation(x, y, k);
            CHECK(r >= -1.0);
            CHECK(r <= 1.0);
            CHECK(r == doctest::Approx(rank_correlation(y, x, k)).epsilon(1e-14));
        }
    }
    CHECK(average_ranks(std::vector<double>{10, 20, 20, 5}) == std::vector<double>{2, 3.5, 3.5, 1});
    CHECK_THROWS_AS(rank_correlation(a, ranking_of({1, 2}), CorrelationKind::pearson), std::invalid_argument);
    CHECK_THROWS_AS(rank_correlation(a, ranking_of({1, 1, 1, 1, 1}), CorrelationKind::pearson),
                    std::invalid_argument);
}

TEST_CASE("top-10 information gain subset on segmentation stays near the full-feature baseline") {
    const auto [train, test] = split(test::segmentation(), 0.5, 42);
    const auto top = rank_features(train, RankMethod::igain).top(10);
    FeatureSet sorted = top;
    std::sort(sorted.begin(), sorted.end());
    const double sub = holdout_accuracy(train.subset_features(sorted), test.subset_features(sorted), {}).accuracy;
    const double all = holdout_accuracy(train, test, {}).accuracy;
    CHECK(std::abs(sub - all) <= 0.02);
}
