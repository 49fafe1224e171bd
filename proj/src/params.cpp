#include "maxload/params.hpp"

#include <limits>

namespace maxload {

std::uint64_t binomial_u64(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 acc = 1;
    for (int i = 1; i <= k; ++i) {
        // acc * (n - k + i) / i stays integral at every step.
        acc = acc * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (acc > std::numeric_limits<std::uint64_t>::max())
            throw CapacityError("binom(" + std::to_string(n) + ", " + std::to_string(k) +
                                ") overflows 64 bits");
    }
    return static_cast<std::uint64_t>(acc);
}

}  // namespace maxload
