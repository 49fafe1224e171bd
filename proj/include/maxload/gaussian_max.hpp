#pragma once

// Expected maximum of n i.i.d. standard normals, M(n).

#include <cstdint>
#include <string_view>

namespace maxload {

double std_normal_pdf(double x);

// Standard normal CDF via Cody's rational Chebyshev approximations, with the
// exp(-x^2/2) factor split as in ACM TOMS 715 to keep tail accuracy.
double std_normal_cdf(double x);

// log Phi(x), accurate in both tails.
double std_normal_log_cdf(double x);

enum class MaxMethod { closed_form, quadrature, asymptotic };

std::string_view method_name(MaxMethod m);

struct QuadratureConfig {
    double abs_tol = 1e-12;
    double truncation = 12.0;  // integrate over [-L, L]
    int max_refinement_depth = 40;

    void validate() const;
};

struct GaussianMaxValue {
    std::int64_t n;
    double value;
    MaxMethod method;
    double error_bound;
};

// Known closed forms, 1 <= n <= 5; UnsupportedError otherwise.
GaussianMaxValue expected_max_closed_form(std::int64_t n);

// Adaptive Gauss-Kronrod (7/15) of x n phi(x) Phi(x)^(n-1) over [-L, L].
// The bound adds the summed |K15 - G7| estimates to the truncation bound.
// Throws ConvergenceError when an interval at maximum depth still blocks the
// tolerance.
GaussianMaxValue expected_max_quadrature(std::int64_t n, const QuadratureConfig& cfg = {});

// sqrt(2 ln n). Leading order only: at n = 2 it gives 1.18 against the true
// 0.56, and the ratio approaches 1 slowly.
double expected_max_asymptotic(std::int64_t n);

struct QuadratureResult {
    double value;
    double error_bound;
};

// Integral of x^power n phi(x) Phi(x)^(n-1): power 0 gives the mass of the
// density of the maximum, 1 the mean, 2 the second moment.
QuadratureResult max_moment(std::int64_t n, int power, const QuadratureConfig& cfg = {});

}  // namespace maxload
