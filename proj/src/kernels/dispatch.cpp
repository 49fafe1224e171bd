#include <cstdlib>
#include <cstring>

#include "maxload/kernels.hpp"

namespace maxload::kernels {
namespace {

Backend detect() {
    if (const char* forced = std::getenv("MAXLOAD_KERNELS"); forced && std::strcmp(forced, "scalar") == 0)
        return Backend::scalar;
    return avx2::available() ? Backend::avx2 : Backend::scalar;
}

}  // namespace

Backend active_backend() {
    static const Backend backend = detect();
    return backend;
}

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

std::int32_t max_i32(std::span<const std::int32_t> values) {
    return active_backend() == Backend::avx2 ? avx2::max_i32(values) : scalar::max_i32(values);
}

SumMax sum_max_f64(std::span<const double> values) {
    return active_backend() == Backend::avx2 ? avx2::sum_max_f64(values) : scalar::sum_max_f64(values);
}

std::size_t count_abs_ge_f64(std::span<const double> values, double threshold) {
    return active_backend() == Backend::avx2 ? avx2::count_abs_ge_f64(values, threshold)
                                             : scalar::count_abs_ge_f64(values, threshold);
}

}  // namespace maxload::kernels
