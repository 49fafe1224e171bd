// Compiled with -mavx2 when the toolchain supports it.

#include "maxload/kernels.hpp"

#if defined(MAXLOAD_HAVE_AVX2)
#include <immintrin.h>
#endif

namespace maxload::kernels::avx2 {

#if defined(MAXLOAD_HAVE_AVX2)

bool available() { return __builtin_cpu_supports("avx2"); }

std::int32_t max_i32(std::span<const std::int32_t> values) {
    const std::size_t n = values.size();
    const std::int32_t* p = values.data();
    std::int32_t best = p[0];
    std::size_t i = 0;
    if (n >= 8) {
        __m256i acc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
        for (i = 8; i + 8 <= n; i += 8)
            acc = _mm256_max_epi32(acc, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i)));
        __m128i m = _mm_max_epi32(_mm256_castsi256_si128(acc), _mm256_extracti128_si256(acc, 1));
        m = _mm_max_epi32(m, _mm_shuffle_epi32(m, _MM_SHUFFLE(1, 0, 3, 2)));
        m = _mm_max_epi32(m, _mm_shuffle_epi32(m, _MM_SHUFFLE(2, 3, 0, 1)));
        best = _mm_cvtsi128_si32(m);
    }
    for (; i < n; ++i) best = p[i] > best ? p[i] : best;
    return best;
}

SumMax sum_max_f64(std::span<const double> values) {
    const std::size_t n = values.size();
    const double* p = values.data();
    double best = p[0];
    std::size_t i = 0;
    __m256d sum4 = _mm256_setzero_pd();
    __m256d max4 = _mm256_set1_pd(p[0]);
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(p + i);
        sum4 = _mm256_add_pd(sum4, v);
        max4 = _mm256_max_pd(max4, v);
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, sum4);
    double sum = (lane[0] + lane[1]) + (lane[2] + lane[3]);
    _mm256_store_pd(lane, max4);
    for (double m : lane) best = m > best ? m : best;
    for (; i < n; ++i) {
        sum += p[i];
        best = p[i] > best ? p[i] : best;
    }
    return {sum, best};
}

std::size_t count_abs_ge_f64(std::span<const double> values, double threshold) {
    const std::size_t n = values.size();
    const double* p = values.data();
    const __m256d sign = _mm256_set1_pd(-0.0);
    const __m256d t = _mm256_set1_pd(threshold);
    std::size_t hits = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_andnot_pd(sign, _mm256_loadu_pd(p + i));
        const int mask = _mm256_movemask_pd(_mm256_cmp_pd(a, t, _CMP_GE_OQ));
        hits += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
    }
    for (; i < n; ++i) hits += (p[i] >= threshold || -p[i] >= threshold) ? 1 : 0;
    return hits;
}

#else

bool available() { return false; }
std::int32_t max_i32(std::span<const std::int32_t> values) { return scalar::max_i32(values); }
SumMax sum_max_f64(std::span<const double> values) { return scalar::sum_max_f64(values); }
std::size_t count_abs_ge_f64(std::span<const double> values, double threshold) {
    return scalar::count_abs_ge_f64(values, threshold);
}

#endif

}  // namespace maxload::kernels::avx2
