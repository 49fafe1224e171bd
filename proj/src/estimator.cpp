#include "maxload/estimator.hpp"

#include <cmath>
#include <ostream>

#include "maxload/format.hpp"

namespace maxload {

std::string_view backend_name(FitBackend b) {
    return b == FitBackend::exact ? "exact" : "montecarlo";
}

std::vector<std::int64_t> geometric_grid(std::int64_t start, std::int64_t stop, std::int64_t ratio) {
    if (start < 1 || stop < start || ratio < 2)
        throw ParameterError("geometric grid needs 1 <= start <= stop and ratio >= 2");
    std::vector<std::int64_t> grid;
    for (std::int64_t t = start; t <= stop; t *= ratio) grid.push_back(t);
    return grid;
}

std::vector<APoint> collect_A(const Params& params, const std::vector<std::int64_t>& grid,
                              FitBackend backend, const std::optional<SimConfig>& sim,
                              const ExactConfig& exact_cfg) {
    if (grid.empty()) throw ParameterError("T grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 1) throw ParameterError("T grid entries must be >= 1");
        if (i > 0 && grid[i] <= grid[i - 1]) throw ParameterError("T grid must be strictly increasing");
    }

    std::vector<APoint> points;
    points.reserve(grid.size());
    if (backend == FitBackend::exact) {
        const auto expectations = exact_max_expectation_series(params, grid, exact_cfg);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            mpq_class drift(mpz_class(params.r()) * grid[i], params.n());
            drift.canonicalize();
            mpq_class a = expectations[i] - drift;
            points.push_back({grid[i], a.get_d(), 0.0, a});
        }
        return points;
    }

    if (!sim) throw ParameterError("the montecarlo backend needs a simulation config");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        SimConfig cfg = *sim;
        cfg.params = params;
        cfg.rounds = grid[k];
        cfg.seed = SplitMix64::mix(sim->seed + k);
        const SampleBatch batch = sample_batch(cfg);
        const double root_t = std::sqrt(static_cast<double>(grid[k]));
        points.push_back({grid[k], root_t * batch.mean(), root_t * batch.std_error(), std::nullopt});
    }
    return points;
}

FitResult fit_cnr(const Params& params, std::span<const APoint> points, FitBackend backend) {
    if (points.size() < 3) throw ParameterError("fit needs at least 3 (T, A) pairs");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].rounds <= points[i - 1].rounds)
            throw ParameterError("fit needs strictly increasing, distinct T values");

    bool weighted = true;
    for (const auto& p : points) weighted = weighted && p.std_error > 0.0;

    std::vector<double> s(points.size()), w(points.size());
    double sw = 0.0, ss = 0.0, sa = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        s[i] = std::sqrt(static_cast<double>(points[i].rounds));
        w[i] = weighted ? 1.0 / (points[i].std_error * points[i].std_error) : 1.0;
        sw += w[i];
        ss += w[i] * s[i];
        sa += w[i] * points[i].value;
    }
    const double s_bar = ss / sw;
    const double a_bar = sa / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        sxx += w[i] * (s[i] - s_bar) * (s[i] - s_bar);
        sxy += w[i] * (s[i] - s_bar) * (points[i].value - a_bar);
    }
    if (!(sxx > 0.0)) throw ParameterError("degenerate design: all T values coincide");

    FitResult fit{params, sxy / sxx, 0.0, {}, 0.0, backend};
    fit.intercept = a_bar - fit.c_hat * s_bar;
    double rss = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        fit.T_grid.push_back(points[i].rounds);
        const double resid = points[i].value - (fit.c_hat * s[i] + fit.intercept);
        rss += resid * resid;
    }
    fit.residual_rms = std::sqrt(rss / static_cast<double>(points.size()));
    if (weighted) {
        fit.c_std_error = std::sqrt(1.0 / sxx);
        fit.intercept_std_error = std::sqrt(1.0 / sw + s_bar * s_bar / sxx);
    }
    return fit;
}

CnrValue to_cnr_value(const FitResult& fit) {
    return {fit.params, fit.c_hat, CnrMethod::extrapolated, fit.c_std_error};
}

void write_fit_csv(std::ostream& os, const FitResult& fit) {
    os << "n,r,backend,c_hat,c_std_error,intercept,intercept_std_error,residual_rms,T_grid\n";
    os << fit.params.n() << ',' << fit.params.r() << ',' << backend_name(fit.backend) << ','
       << format_decimal(fit.c_hat) << ',' << format_decimal(fit.c_std_error) << ','
       << format_decimal(fit.intercept) << ',' << format_decimal(fit.intercept_std_error) << ','
       << format_decimal(fit.residual_rms) << ",\"";
    for (std::size_t i = 0; i < fit.T_grid.size(); ++i) os << (i ? " " : "") << fit.T_grid[i];
    os << "\"\n";
}

void write_fit_summary(std::ostream& os, const FitResult& fit) {
    os << "C(" << fit.params.n() << "," << fit.params.r() << ") fit, backend " << backend_name(fit.backend)
       << "\n  T grid:       ";
    for (std::size_t i = 0; i < fit.T_grid.size(); ++i) os << (i ? " " : "") << fit.T_grid[i];
    os << "\n  c_hat:        " << format_decimal(fit.c_hat);
    if (fit.c_std_error > 0.0) os << " +/- " << format_decimal(fit.c_std_error);
    os << "\n  intercept:    " << format_decimal(fit.intercept);
    if (fit.intercept_std_error > 0.0) os << " +/- " << format_decimal(fit.intercept_std_error);
    os << "\n  residual rms: " << format_decimal(fit.residual_rms) << '\n';
}

}  // namespace maxload
