#include <doctest.h>

#include <cmath>

#include "featsel/classify.hpp"
#include "featsel/kernels.hpp"
#include "featsel/relief.hpp"
#include "support/testutil.hpp"

using namespace featsel;
namespace k = featsel::kernels;

namespace {

// Restores automatic dispatch when a test case ends.
struct IsaGuard {
    ~IsaGuard() { k::reset_isa(); }
};

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

} // namespace

TEST_CASE("scalar reference kernels") {
    const std::vector<double> a{1, 2, 3}, b{4, -2, 0.5};
    CHECK(k::scalar::dot(a.data(), b.data(), 3) == 1.5);
    CHECK(k::scalar::squared_euclidean(a.data(), b.data(), 3) == 9 + 16 + 6.25);
    CHECK(k::scalar::manhattan(a.data(), b.data(), 3) == 3 + 4 + 2.5);
    CHECK(k::scalar::dot(a.data(), b.data(), 0) == 0.0);
}

TEST_CASE("AVX2 kernels match scalar for every length and alignment") {
    if (!k::isa_available(k::Isa::avx2)) {
        MESSAGE("AVX2 unavailable on this machine; equivalence not exercised");
        return;
    }
    Rng rng(3);
    std::vector<double> buf(200);
    for (double& v : buf) v = test::uniform(rng, -100, 100);
    for (std::size_t n = 0; n <= 67; ++n)
        for (std::size_t off = 0; off < 4; ++off) {
            const double* a = buf.data() + off;
            const double* b = buf.data() + 100 + off;
            CHECK(rel(k::avx2::dot(a, b, n), k::scalar::dot(a, b, n)) < 1e-12);
            CHECK(rel(k::avx2::squared_euclidean(a, b, n), k::scalar::squared_euclidean(a, b, n)) < 1e-12);
            CHECK(rel(k::avx2::manhattan(a, b, n), k::scalar::manhattan(a, b, n)) < 1e-12);
        }
}

TEST_CASE("dispatch can be forced and restored") {
    IsaGuard guard;
    CHECK(k::force_isa(k::Isa::scalar) == k::Isa::scalar);
    CHECK(k::active_isa() == k::Isa::scalar);
    const auto chosen = k::force_isa(k::Isa::avx2);
    CHECK(chosen == (k::isa_available(k::Isa::avx2) ? k::Isa::avx2 : k::Isa::scalar));
    k::reset_isa();
    CHECK(k::isa_available(k::active_isa()));
    CHECK(k::isa_name(k::Isa::scalar) == "scalar");
}

TEST_CASE("row kernels agree with the pairwise kernels under each ISA") {
    IsaGuard guard;
    const Matrix rows = test::random_matrix(13, 7, 5);
    const Matrix q = test::random_matrix(1, 7, 6);
    for (auto isa : {k::Isa::scalar, k::Isa::avx2}) {
        k::force_isa(isa);
        std::vector<double> e(13), m(13), d(13);
        k::squared_euclidean_rows(q.row(0), rows.data(), e);
        k::manhattan_rows(q.row(0), rows.data(), m);
        k::dot_rows(q.row(0), rows.data(), d);
        for (std::size_t i = 0; i < 13; ++i) {
            CHECK(rel(e[i], k::scalar::squared_euclidean(q.row(0).data(), rows.row(i).data(), 7)) < 1e-12);
            CHECK(rel(m[i], k::scalar::manhattan(q.row(0).data(), rows.row(i).data(), 7)) < 1e-12);
            CHECK(rel(d[i], k::scalar::dot(q.row(0).data(), rows.row(i).data(), 7)) < 1e-12);
        }
    }
}

TEST_CASE("k-NN and ReliefF give identical answers under each ISA") {
    IsaGuard guard;
    const Dataset seg = test::segmentation();
    const auto [train, test] = split(seg, 0.5, 42);
    k::force_isa(k::Isa::scalar);
    const auto pred_scalar = KnnModel::fit(train, {}).predict(test.x());
    const auto w_scalar = relieff_weights(train, {200, 10, 1}).w;
    k::force_isa(k::Isa::avx2);
    const auto pred_simd = KnnModel::fit(train, {}).predict(test.x());
    const auto w_simd = relieff_weights(train, {200, 10, 1}).w;
    CHECK(pred_scalar == pred_simd);
    for (std::size_t f = 0; f < w_scalar.size(); ++f) CHECK(w_scalar[f] == doctest::Approx(w_simd[f]).epsilon(1e-12));
}
