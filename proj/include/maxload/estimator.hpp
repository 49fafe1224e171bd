#pragma once

// Recovers C_{n,r} from finite-T values of A(n,r;T) = E U - rT/n by fitting
// A ~ c sqrt(T) + b. The intercept is a heuristic: it soaks up the bounded
// part of the correction and markedly improves small-T fits.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "maxload/constants.hpp"
#include "maxload/montecarlo.hpp"
#include "maxload/occupancy_exact.hpp"

namespace maxload {

enum class FitBackend { exact, montecarlo };

std::string_view backend_name(FitBackend b);

struct APoint {
    std::int64_t rounds;
    double value;                     // A(n,r;T)
    double std_error = 0.0;           // 0 for exact values
    std::optional<mpq_class> exact;   // set by the exact backend
};

struct FitResult {
    Params params;
    double c_hat;
    double intercept;
    std::vector<std::int64_t> T_grid;
    double residual_rms;
    FitBackend backend;
    // Propagated from Monte Carlo standard errors; 0 for exact data.
    double c_std_error = 0.0;
    double intercept_std_error = 0.0;
};

// Geometric grid start, 2 start, 4 start, ... up to and including stop.
std::vector<std::int64_t> geometric_grid(std::int64_t start, std::int64_t stop, std::int64_t ratio = 2);

// A at every grid point. The Monte Carlo backend needs `sim` (its rounds
// field is ignored); grid point k runs with seed SplitMix64::mix(seed + k).
std::vector<APoint> collect_A(const Params& params, const std::vector<std::int64_t>& grid,
                              FitBackend backend, const std::optional<SimConfig>& sim = std::nullopt,
                              const ExactConfig& exact_cfg = {});

// Least squares of A on c sqrt(T) + b, weighted by 1/se^2 when every point
// carries a positive standard error.
FitResult fit_cnr(const Params& params, std::span<const APoint> points, FitBackend backend);

CnrValue to_cnr_value(const FitResult& fit);

void write_fit_csv(std::ostream& os, const FitResult& fit);
void write_fit_summary(std::ostream& os, const FitResult& fit);

}  // namespace maxload
