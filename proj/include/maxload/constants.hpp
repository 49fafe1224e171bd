#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "maxload/gaussian_max.hpp"
#include "maxload/params.hpp"

namespace maxload {

// Exchangeable covariance: one diagonal and one off-diagonal value.
struct CovarianceMatrix {
    int n;
    mpq_class diagonal;
    mpq_class off_diagonal;

    const mpq_class& entry(int i, int j) const { return i == j ? diagonal : off_diagonal; }
    mpq_class row_sum() const { return diagonal + (n - 1) * off_diagonal; }

    friend bool operator==(const CovarianceMatrix& a, const CovarianceMatrix& b) {
        return a.n == b.n && a.diagonal == b.diagonal && a.off_diagonal == b.off_diagonal;
    }
};

CovarianceMatrix operator*(const mpq_class& factor, const CovarianceMatrix& m);

// Covariance of the per-round indicator vector: r(n-r)/n^2 on the diagonal,
// -r(n-r)/(n^2 (n-1)) off it. For n = 1 the 1x1 zero matrix.
CovarianceMatrix covariance_gamma(const Params& params);

// n/(n-1) on the diagonal, -n/(n-1)^2 off it; n >= 2.
CovarianceMatrix covariance_gamma_tilde(int n);

// r(n-r)(n-1)/n^3, the factor with covariance_gamma = factor * covariance_gamma_tilde.
mpq_class gamma_scale(const Params& params);

enum class CnrMethod { closed_form, quadrature, asymptotic, extrapolated };

std::string_view method_name(CnrMethod m);

struct CnrValue {
    Params params;
    double value;
    CnrMethod method;
    double error_bound;  // +inf for the asymptotic method
};

// sqrt(r(n-r) / (n(n-1))), the factor relating C_{n,r} to M(n); 0 when r = n.
double cnr_prefactor(const Params& params);

// C_{n,r} = cnr_prefactor * M(n) with M(n) from the requested method. The
// extrapolated method comes from the estimator, not from here.
CnrValue c_nr(const Params& params, CnrMethod method, const QuadratureConfig& cfg = {});

// sqrt(2 r (n-r) ln n / n^2); n >= 2.
double asymptotic_cnr(const Params& params);

struct LogConcavityResult {
    bool holds;
    std::vector<int> witnesses;  // r values violating the inequality
};

// Checks r^2 (n-r)^2 >= (r^2 - 1)((n-r)^2 - 1) exactly for 2 <= r <= n-2,
// which is C_{n,r}^2 >= C_{n,r-1} C_{n,r+1} with the common M(n) divided out.
LogConcavityResult log_concavity_check(int n);

struct TableRow {
    std::string quantity;
    double computed;
    double paper_value;
    double abs_error;
    bool pass;
};

struct TableReport {
    std::vector<TableRow> rows;
    double tolerance;

    bool all_pass() const;
};

// Recomputes M(1..5) by quadrature against their closed forms and the four
// tabulated constants C_{2,1}, C_{3,1}, C_{4,1}, C_{4,2} against the printed
// decimals.
TableReport verify_tables(double tolerance = 1e-4);

void write_report_text(std::ostream& os, const TableReport& report);
void write_report_csv(std::ostream& os, const TableReport& report);

}  // namespace maxload
