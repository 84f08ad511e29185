#include "featsel/kernels.hpp"

#include <atomic>
#include <cassert>
#include <cstdlib>
#include <cstring>

namespace featsel::kernels {
namespace {

using PairFn = double (*)(const double*, const double*, std::size_t);

struct Table {
    PairFn dot;
    PairFn sq_euclid;
    PairFn manhattan;
};

constexpr Table scalar_table{scalar::dot, scalar::squared_euclidean, scalar::manhattan};
constexpr Table avx2_table{avx2::dot, avx2::squared_euclidean, avx2::manhattan};

bool cpu_has_avx2() {
#if defined(FEATSEL_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect() {
    // FEATSEL_ISA=scalar pins the reference kernels (useful when comparing
    // outputs across machines).
    if (const char* env = std::getenv("FEATSEL_ISA"); env && std::strcmp(env, "scalar") == 0)
        return Isa::scalar;
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

const Table& table() {
    return current().load(std::memory_order_relaxed) == Isa::avx2 ? avx2_table : scalar_table;
}

template <class Fn>
void rows_apply(Fn fn, std::span<const double> query, std::span<const double> rows,
                std::span<double> out) {
    const std::size_t dim = query.size();
    assert(rows.size() == dim * out.size());
    const double* q = query.data();
    const double* r = rows.data();
    for (std::size_t i = 0; i < out.size(); ++i, r += dim) out[i] = fn(q, r, dim);
}

} // namespace

std::string_view isa_name(Isa isa) {
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

bool isa_available(Isa isa) {
    return isa == Isa::scalar || cpu_has_avx2();
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

Isa force_isa(Isa isa) {
    const Isa chosen = isa_available(isa) ? isa : Isa::scalar;
    current().store(chosen, std::memory_order_relaxed);
    return chosen;
}

void reset_isa() { current().store(detect(), std::memory_order_relaxed); }

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return table().dot(a.data(), b.data(), a.size());
}

double squared_euclidean(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return table().sq_euclid(a.data(), b.data(), a.size());
}

double manhattan(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return table().manhattan(a.data(), b.data(), a.size());
}

void squared_euclidean_rows(std::span<const double> query, std::span<const double> rows,
                            std::span<double> out) {
    rows_apply(table().sq_euclid, query, rows, out);
}

void manhattan_rows(std::span<const double> query, std::span<const double> rows,
                    std::span<double> out) {
    rows_apply(table().manhattan, query, rows, out);
}

void dot_rows(std::span<const double> query, std::span<const double> rows,
              std::span<double> out) {
    rows_apply(table().dot, query, rows, out);
}

} // namespace featsel::kernels
