#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "featsel/classify.hpp"
#include "featsel/error.hpp"
#include "featsel/transform.hpp"
#include "oracles/oracles.hpp"
#include "support/testutil.hpp"

using namespace featsel;
using featsel::test::make_dataset;

namespace {

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

// Gram-Schmidt on a random Gaussian p x k matrix.
Matrix random_orthonormal(std::size_t p, std::size_t k, std::uint64_t seed) {
    Rng rng(seed);
    Matrix q(p, k);
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<double> v(p);
        for (double& e : v) e = test::normal(rng);
        for (std::size_t c = 0; c < j; ++c) {
            double d = 0.0;
            for (std::size_t i = 0; i < p; ++i) d += v[i] * q(i, c);
            for (std::size_t i = 0; i < p; ++i) v[i] -= d * q(i, c);
        }
        double norm = 0.0;
        for (double e : v) norm += e * e;
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < p; ++i) q(i, j) = v[i] / norm;
    }
    return q;
}

} // namespace

TEST_CASE("pca on a line") {
    const Matrix x{{0, 0}, {1, 1}, {2, 2}, {3, 3}, {-1, -1}};
    const auto t = pca_fit(x, {.k = 2});
    CHECK(std::abs(t.w(0, 0) - 1 / std::sqrt(2.0)) <= 1e-10);
    CHECK(std::abs(t.w(1, 0) - 1 / std::sqrt(2.0)) <= 1e-10);
    CHECK(std::abs(t.values[1]) <= 1e-10);
    const auto r = explained_variance_ratio(pca_fit(x, {.k = 1}));
    CHECK(r.size() == 1);
    CHECK(r[0] == doctest::Approx(1.0));
}

TEST_CASE("axis-aligned centred data gives the identity basis") {
    const Matrix x{{3, 0.5}, {-3, 0.5}, {3, -0.5}, {-3, -0.5}};
    const auto t = pca_fit(x, {.k = 2});
    CHECK(std::abs(std::abs(t.w(0, 0)) - 1) <= 1e-12);
    CHECK(std::abs(t.w(1, 0)) <= 1e-12);
    CHECK(std::abs(std::abs(t.w(1, 1)) - 1) <= 1e-12);
    CHECK(t.values[0] > t.values[1]);
}

TEST_CASE("pca properties on random data") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Matrix x = test::random_matrix(40, 5, seed);
        for (std::size_t i = 0; i < 40; ++i) x(i, 1) += 2 * x(i, 0);
        const auto t = pca_fit(x, {.k = 5});
        CHECK(max_abs_diff(transpose(t.w) * t.w, Matrix::identity(5)) <= 1e-8);
        CHECK(std::is_sorted(t.values.rbegin(), t.values.rend()));
        for (double v : t.values) CHECK(v >= -1e-12);

        const Matrix z = t.apply(x);
        const Matrix cz = covariance(z);
        double total = 0.0;
        for (double v : t.values) total += v;
        CHECK(std::abs(total - trace(covariance(x))) <= 1e-8);
        for (std::size_t j = 0; j < 5; ++j) {
            double mean = 0.0;
            for (std::size_t i = 0; i < 40; ++i) mean += z(i, j);
            CHECK(std::abs(mean / 40) <= 1e-8);
            CHECK(std::abs(cz(j, j) - t.values[j]) <= 1e-8);
        }
        CHECK(max_abs_offdiag(cz) <= 1e-8);

        // Reconstruction with k = p.
        Matrix back = z * transpose(t.w);
        for (std::size_t i = 0; i < 40; ++i)
            for (std::size_t j = 0; j < 5; ++j) back(i, j) += t.column_means[j];
        CHECK(max_abs_diff(back, x) <= 1e-8);

        const auto r = explained_variance_ratio(t);
        double s = 0.0;
        for (double v : r) s += v;
        CHECK(s == doctest::Approx(1.0));
    }
}

TEST_CASE("isotropic Gaussian splits variance evenly") {
    Rng rng(5);
    Matrix x(5000, 2);
    for (std::size_t i = 0; i < 5000; ++i) x(i, 0) = test::normal(rng), x(i, 1) = test::normal(rng);
    const auto r = explained_variance_ratio(pca_fit(x, {.k = 2}));
    CHECK(std::abs(r[0] - 0.5) <= 0.05);
    CHECK(std::abs(r[1] - 0.5) <= 0.05);
}

TEST_CASE("pca transform geometry") {
    const Matrix x = test::random_matrix(30, 3, 4);
    const auto t = pca_fit(x, {.k = 3});
    Matrix m(1, 3);
    for (std::size_t j = 0; j < 3; ++j) m(0, j) = t.column_means[j];
    const Matrix zm = t.apply(m);
    for (double v : zm.row(0)) CHECK(std::abs(v) <= 1e-12);

    Matrix pair(2, 3);
    for (std::size_t j = 0; j < 3; ++j) {
        pair(0, j) = t.column_means[j] + 0.3 * (j + 1);
        pair(1, j) = t.column_means[j] - 0.3 * (j + 1);
    }
    const Matrix z = t.apply(pair);
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(z(0, j) + z(1, j)) <= 1e-12);
    CHECK_THROWS_AS(t.apply(Matrix(2, 4)), std::invalid_argument);
}

TEST_CASE("pca sample-order invariance and feature-permutation equivariance") {
    const Matrix x = test::random_matrix(25, 4, 12);
    const auto base = pca_fit(x, {.k = 4});

    const auto perm = test::random_permutation(25, 3);
    Matrix shuffled(25, 4);
    for (std::size_t i = 0; i < 25; ++i)
        for (std::size_t j = 0; j < 4; ++j) shuffled(i, j) = x(perm[i], j);
    CHECK(max_abs_diff(pca_fit(shuffled, {.k = 4}).w, base.w) <= 1e-10);

    const std::size_t cols[4] = {2, 0, 3, 1};
    Matrix swapped(25, 4);
    for (std::size_t i = 0; i < 25; ++i)
        for (std::size_t j = 0; j < 4; ++j) swapped(i, j) = x(i, cols[j]);
    const auto t = pca_fit(swapped, {.k = 4});
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t c = 0; c < 4; ++c) CHECK(std::abs(t.w(j, c) - base.w(cols[j], c)) <= 1e-10);
}

TEST_CASE("pca eigenvalues against the characteristic polynomial") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Matrix x = test::random_matrix(20, 3, seed + 300);
        const auto t = pca_fit(x, {.k = 3});
        const Matrix c = oracle::covariance(x);
        std::array<std::array<double, 3>, 3> a{};
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) a[i][j] = c(i, j);
        auto roots = oracle::symmetric3_eigenvalues(a);
        std::sort(roots.rbegin(), roots.rend());
        for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(t.values[j] - roots[j]) <= 1e-8);
    }
}

TEST_CASE("pca component selection and errors") {
    Matrix x = test::random_matrix(50, 4, 2);
    for (std::size_t i = 0; i < 50; ++i) x(i, 0) *= 10;
    const auto t = pca_fit(x, {.variance_threshold = 0.9});
    const auto all = pca_fit(x, {.k = 4});
    double cum = 0.0, total = 0.0;
    for (double v : all.values) total += v;
    for (std::size_t j = 0; j < t.k(); ++j) cum += all.values[j];
    CHECK(cum / total >= 0.9);
    CHECK(t.k() == 1);
    CHECK_THROWS_AS(pca_fit(Matrix(1, 3)), DataError);
    CHECK_THROWS_AS(pca_fit(x, {.k = 5}), std::invalid_argument);
    CHECK_THROWS_AS(explained_variance_ratio(lda_fit(test::blobs(10, {{0, 0}, {2, 2}}, 1.0, 1))),
                    std::invalid_argument);
}

TEST_CASE("lda finds the separating axis") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        // Separation along (1, 1) / sqrt(2).
        const Dataset ds = test::blobs(100, {{0, 0}, {3, 3}}, 1.0, seed);
        const auto t = lda_fit(ds);
        REQUIRE(t.k() == 1);
        const double cosine = (t.w(0, 0) + t.w(1, 0)) / std::sqrt(2.0) / std::hypot(t.w(0, 0), t.w(1, 0));
        CHECK(std::abs(cosine) > 0.99);
    }
}

TEST_CASE("lda on penguins") {
    const Dataset pen = test::penguins();
    CHECK(lda_fit(pen).k() == 2);
    const auto [train, test] = split(pen, 0.5, 42);
    const auto clf = LdaClassifier::fit(train);
    CHECK(accuracy(clf.predict(test.x()), test.y()) >= 0.94);
    double s = 0.0;
    for (double p : clf.priors()) s += p;
    CHECK(s == doctest::Approx(1.0));
}

TEST_CASE("lda maximizes the Fisher ratio") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const Dataset ds = test::blobs(30, {{0, 0, 0, 0}, {2, 1, 0, 0}, {0, 2, 1, 0}}, 1.0, seed);
        const auto t = lda_fit(ds);
        const auto s = scatter_matrices(ds);
        const double best = fisher_ratio(t.w, s);
        int beaten = 0;
        for (std::uint64_t trial = 0; trial < 100; ++trial)
            beaten += fisher_ratio(random_orthonormal(4, t.k(), 1000 * seed + trial), s) < best ? 1 : 0;
        CHECK(beaten == 100);
    }
}

TEST_CASE("lda scatter and errors") {
    const Dataset ds = test::blobs(10, {{0, 0}, {2, 2}}, 1.0, 3);
    const auto s = scatter_matrices(ds);
    const auto w = scatter_matrices(ds, true);
    // Equal class sizes: the weighted form is the plain form times n_c.
    Matrix scaled = s.within;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) scaled(i, j) *= 10.0;
    CHECK(max_abs_diff(w.within, scaled) <= 1e-9);
    CHECK(max_abs_diff(s.between, transpose(s.between)) == 0.0);

    const Dataset one = make_dataset(test::random_matrix(10, 2, 1), std::vector<Label>(10, 0));
    CHECK(max_abs_diff(scatter_matrices(one).between, Matrix(2, 2)) <= 1e-12);
    CHECK_THROWS_AS(lda_fit(one), DataError);

    const Dataset lonely = make_dataset(Matrix{{0, 0}, {1, 0}, {0, 1}, {5, 5}}, {0, 0, 0, 1});
    CHECK_THROWS_AS(lda_fit(lonely), DataError);

    test::WarningCapture cap;
    const auto t = lda_fit(ds, {.k = 2});
    CHECK(t.k() == 2);
    CHECK(cap.messages.size() == 1);
}

TEST_CASE("lda classifier decisions") {
    const Dataset ds = test::blobs(40, {{0, 0, 0}, {3, 0, 1}, {0, 3, 2}}, 1.0, 7);
    SUBCASE("a class mean is classified as that class under equal priors") {
        const auto clf = LdaClassifier::fit(ds, {.priors = std::vector<double>(3, 1.0 / 3)});
        for (std::size_t c = 0; c < 3; ++c) CHECK(clf.predict_projected(clf.class_means()[c]) == c);
    }
    SUBCASE("a dominant prior wins wherever densities are comparable") {
        const auto clf = LdaClassifier::fit(ds, {.priors = std::vector<double>{1e-12, 1.0 - 2e-12, 1e-12}});
        const auto pred = clf.predict(ds.x());
        CHECK(std::count(pred.begin(), pred.end(), Label{1}) >= ds.n() * 9 / 10);
    }
    SUBCASE("per-class covariances are symmetric positive definite") {
        const auto clf = LdaClassifier::fit(ds, {.per_class_covariance = true});
        REQUIRE(clf.covariances().size() == 3);
        for (const auto& c : clf.covariances()) {
            CHECK(max_abs_diff(c, transpose(c)) <= 1e-12);
            CHECK(cholesky(c).has_value());
        }
        CHECK(accuracy(clf.predict(ds.x()), ds.y()) >= 0.9);
    }
    SUBCASE("bad priors") {
        CHECK_THROWS_AS(LdaClassifier::fit(ds, {.priors = std::vector<double>{0.5, 0.5}}), std::invalid_argument);
        CHECK_THROWS_AS(LdaClassifier::fit(ds, {.priors = std::vector<double>{0.5, 0.5, 0.5}}), std::invalid_argument);
    }
}

TEST_CASE("singular within-class scatter is ridged with a warning") {
    // Column 2 duplicates column 0, so S_W is singular.
    const Dataset base = test::blobs(20, {{0, 0}, {2, 1}}, 1.0, 2);
    const Dataset ds = test::with_columns(base, {base.x().column(0)});
    test::WarningCapture cap;
    const auto t = lda_fit(ds);
    CHECK(t.k() == 1);
    REQUIRE(!cap.messages.empty());
    CHECK(cap.messages[0].find("ridge") != std::string::npos);
}
