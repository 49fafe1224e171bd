#include <algorithm>
#include <cmath>

#include "maxload/kernels.hpp"

namespace maxload::kernels::scalar {

std::int32_t max_i32(std::span<const std::int32_t> values) {
    std::int32_t best = values[0];
    for (std::int32_t v : values) best = std::max(best, v);
    return best;
}

SumMax sum_max_f64(std::span<const double> values) {
    const std::size_t n = values.size();
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    double best = values[0];
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        for (std::size_t k = 0; k < 4; ++k) {
            lane[k] += values[i + k];
            best = std::max(best, values[i + k]);
        }
    }
    double sum = (lane[0] + lane[1]) + (lane[2] + lane[3]);
    for (; i < n; ++i) {
        sum += values[i];
        best = std::max(best, values[i]);
    }
    return {sum, best};
}

std::size_t count_abs_ge_f64(std::span<const double> values, double threshold) {
    std::size_t hits = 0;
    for (double v : values) hits += std::fabs(v) >= threshold ? 1 : 0;
    return hits;
}

}  // namespace maxload::kernels::scalar
