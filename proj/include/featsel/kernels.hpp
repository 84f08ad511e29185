#pragma once

// Distance kernels used by k-NN, ReliefF and the cosine-similarity demo.
//
// Every kernel has a scalar reference implementation and an AVX2 variant.
// The variant is picked once at runtime from the CPU feature flags; tests
// force each ISA in turn and check that the results agree.

#include <cstddef>
#include <span>
#include <string_view>

namespace featsel::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// True when the running CPU and this build both support `isa`.
bool isa_available(Isa isa);

/// ISA used by the dispatching entry points below.
Isa active_isa();

/// Overrides the dispatch choice (falls back to scalar if unavailable).
/// Returns the ISA actually selected.
Isa force_isa(Isa isa);

/// Restores automatic selection.
void reset_isa();

double dot(std::span<const double> a, std::span<const double> b);
double squared_euclidean(std::span<const double> a, std::span<const double> b);
double manhattan(std::span<const double> a, std::span<const double> b);

/// Squared euclidean distance from `query` to each row of a row-major block
/// of `out.size()` rows, each `query.size()` wide.
void squared_euclidean_rows(std::span<const double> query, std::span<const double> rows,
                            std::span<double> out);

/// Manhattan distance from `query` to each row of a row-major block.
void manhattan_rows(std::span<const double> query, std::span<const double> rows,
                    std::span<double> out);

/// Dot product of `query` with each row of a row-major block.
void dot_rows(std::span<const double> query, std::span<const double> rows,
              std::span<double> out);

// Per-ISA entry points. Exposed for equivalence tests and benchmarks.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double squared_euclidean(const double* a, const double* b, std::size_t n);
double manhattan(const double* a, const double* b, std::size_t n);
} // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double squared_euclidean(const double* a, const double* b, std::size_t n);
double manhattan(const double* a, const double* b, std::size_t n);
} // namespace avx2

} // namespace featsel::kernels
