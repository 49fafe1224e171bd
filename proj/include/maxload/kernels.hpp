#pragma once

// Data-parallel reductions used by the simulator and the limit sampler.
//
// Each kernel has a scalar reference and an AVX2 variant; the active one is
// picked once at runtime from CPUID (override with MAXLOAD_KERNELS=scalar).
// The scalar sum accumulates in four interleaved lanes so that both variants
// round identically: every kernel returns bit-identical results on either
// backend.

#include <cstddef>
#include <cstdint>
#include <span>

namespace maxload::kernels {

enum class Backend { scalar, avx2 };

struct SumMax {
    double sum;
    double max;
};

Backend active_backend();
const char* backend_name(Backend b);

// Largest element; the span must be non-empty.
std::int32_t max_i32(std::span<const std::int32_t> values);

// Lane-ordered sum and maximum; the span must be non-empty.
SumMax sum_max_f64(std::span<const double> values);

// Number of entries with |x| >= threshold.
std::size_t count_abs_ge_f64(std::span<const double> values, double threshold);

namespace scalar {
std::int32_t max_i32(std::span<const std::int32_t> values);
SumMax sum_max_f64(std::span<const double> values);
std::size_t count_abs_ge_f64(std::span<const double> values, double threshold);
}  // namespace scalar

namespace avx2 {
// False when the build or the CPU lacks AVX2; the functions below then must
// not be called.
bool available();
std::int32_t max_i32(std::span<const std::int32_t> values);
SumMax sum_max_f64(std::span<const double> values);
std::size_t count_abs_ge_f64(std::span<const double> values, double threshold);
}  // namespace avx2

}  // namespace maxload::kernels
