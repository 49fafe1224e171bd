#pragma once

#include <cstdint>
#include <string>

#include "maxload/error.hpp"

namespace maxload {

// Process parameters: n bins, r balls per round landing in r distinct bins.
class Params {
public:
    Params(int n, int r) : n_(n), r_(r) {
        if (n < 1) throw ParameterError("n must be >= 1 (got " + std::to_string(n) + ")");
        if (r < 1 || r > n)
            throw ParameterError("r must satisfy 1 <= r <= n (got n=" + std::to_string(n) +
                                 ", r=" + std::to_string(r) + ")");
    }

    int n() const noexcept { return n_; }
    int r() const noexcept { return r_; }

    // r == n: every bin receives a ball each round.
    bool deterministic() const noexcept { return r_ == n_; }

    friend bool operator==(const Params&, const Params&) = default;

private:
    int n_;
    int r_;
};

// binom(n, k) in 64 bits; throws CapacityError on overflow.
std::uint64_t binomial_u64(int n, int k);

}  // namespace maxload
