#include "maxload/constants.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "maxload/format.hpp"

namespace maxload {

CovarianceMatrix operator*(const mpq_class& factor, const CovarianceMatrix& m) {
    return {m.n, factor * m.diagonal, factor * m.off_diagonal};
}

CovarianceMatrix covariance_gamma(const Params& params) {
    const int n = params.n();
    const int r = params.r();
    mpq_class diagonal(mpz_class(r) * (n - r), mpz_class(n) * n);
    diagonal.canonicalize();
    if (n == 1) return {1, diagonal, 0};
    mpq_class off(-mpz_class(r) * (n - r), mpz_class(n) * n * (n - 1));
    off.canonicalize();
    return {n, diagonal, off};
}

CovarianceMatrix covariance_gamma_tilde(int n) {
    if (n < 2) throw ParameterError("covariance_gamma_tilde needs n >= 2 (got " + std::to_string(n) + ")");
    mpq_class diagonal(n, n - 1);
    diagonal.canonicalize();
    mpq_class off(-mpz_class(n), mpz_class(n - 1) * (n - 1));
    off.canonicalize();
    return {n, diagonal, off};
}

mpq_class gamma_scale(const Params& params) {
    const int n = params.n();
    const int r = params.r();
    mpq_class s(mpz_class(r) * (n - r) * (n - 1), mpz_class(n) * n * n);
    s.canonicalize();
    return s;
}

std::string_view method_name(CnrMethod m) {
    switch (m) {
        case CnrMethod::closed_form: return "closed_form";
        case CnrMethod::quadrature: return "quadrature";
        case CnrMethod::asymptotic: return "asymptotic";
        case CnrMethod::extrapolated: return "extrapolated";
    }
    return "unknown";
}

double cnr_prefactor(const Params& params) {
    if (params.deterministic()) return 0.0;
    const double n = params.n();
    const double r = params.r();
    return std::sqrt(r * (n - r) / (n * (n - 1.0)));
}

CnrValue c_nr(const Params& params, CnrMethod method, const QuadratureConfig& cfg) {
    if (params.deterministic()) return {params, 0.0, method, 0.0};
    const double factor = cnr_prefactor(params);
    switch (method) {
        case CnrMethod::closed_form: {
            const GaussianMaxValue m = expected_max_closed_form(params.n());
            return {params, factor * m.value, method, factor * m.error_bound};
        }
        case CnrMethod::quadrature: {
            const GaussianMaxValue m = expected_max_quadrature(params.n(), cfg);
            return {params, factor * m.value, method, factor * m.error_bound};
        }
        case CnrMethod::asymptotic:
            return {params, factor * expected_max_asymptotic(params.n()), method,
                    std::numeric_limits<double>::infinity()};
        case CnrMethod::extrapolated:
            break;
    }
    throw UnsupportedError("extrapolated C_{n,r} values come from the estimator (fit_cnr)");
}

double asymptotic_cnr(const Params& params) {
    if (params.n() < 2) throw ParameterError("asymptotic_cnr needs n >= 2");
    const double n = params.n();
    const double r = params.r();
    return std::sqrt(2.0 * r * (n - r) * std::log(n) / (n * n));
}

LogConcavityResult log_concavity_check(int n) {
    if (n < 3) throw ParameterError("log-concavity check needs n >= 3 (got " + std::to_string(n) + ")");
    LogConcavityResult result{true, {}};
    for (int r = 2; r <= n - 2; ++r) {
        const mpz_class a = mpz_class(r) * r;
        const mpz_class b = mpz_class(n - r) * (n - r);
        if (a * b < (a - 1) * (b - 1)) {
            result.holds = false;
            result.witnesses.push_back(r);
        }
    }
    return result;
}

bool TableReport::all_pass() const {
    for (const auto& row : rows)
        if (!row.pass) return false;
    return true;
}

TableReport verify_tables(double tolerance) {
    TableReport report{{}, tolerance};
    auto add = [&](std::string name, double computed, double paper) {
        const double err = std::fabs(computed - paper);
        report.rows.push_back({std::move(name), computed, paper, err, err < tolerance});
    };

    for (int n = 1; n <= 5; ++n)
        add("M(" + std::to_string(n) + ")", expected_max_quadrature(n).value,
            expected_max_closed_form(n).value);

    struct Printed {
        int n, r;
        double value;
    };
    static constexpr Printed printed[] = {
        {2, 1, 0.39894}, {3, 1, 0.48860}, {4, 1, 0.51469}, {4, 2, 0.59431}};
    for (const auto& p : printed)
        add("C(" + std::to_string(p.n) + "," + std::to_string(p.r) + ")",
            c_nr(Params(p.n, p.r), CnrMethod::closed_form).value, p.value);
    return report;
}

void write_report_text(std::ostream& os, const TableReport& report) {
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %20s %20s %12s  %s\n", "quantity", "computed", "paper_value",
                  "abs_error", "pass");
    os << line;
    for (const auto& row : report.rows) {
        std::snprintf(line, sizeof line, "%-10s %20s %20s %12.3e  %s\n", row.quantity.c_str(),
                      format_decimal(row.computed).c_str(), format_decimal(row.paper_value).c_str(),
                      row.abs_error, row.pass ? "PASS" : "FAIL");
        os << line;
    }
    os << (report.all_pass() ? "all rows pass" : "verification FAILED") << " (tolerance "
       << format_decimal(report.tolerance) << ")\n";
}

void write_report_csv(std::ostream& os, const TableReport& report) {
    os << "quantity,computed,paper_value,abs_error,pass\n";
    for (const auto& row : report.rows) {
        char err[32];
        std::snprintf(err, sizeof err, "%.3e", row.abs_error);
        os << '"' << row.quantity << "\"," << format_decimal(row.computed) << ','
           << format_decimal(row.paper_value) << ',' << err << ',' << (row.pass ? "true" : "false")
           << '\n';
    }
}

}  // namespace maxload
