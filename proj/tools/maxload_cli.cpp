// maxload: command-line front end for the max-load constant toolkit.
//
// Exit codes: 0 success, 1 usage error, 2 capacity/convergence error,
// 3 verification failure.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "maxload/constants.hpp"
#include "maxload/estimator.hpp"
#include "maxload/format.hpp"
#include "maxload/gaussian_max.hpp"
#include "maxload/montecarlo.hpp"
#include "maxload/occupancy_exact.hpp"

namespace {

using maxload::format_decimal;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCapacity = 2;
constexpr int kExitVerify = 3;

// What every command prints: its parameters and a table of results.
struct Envelope {
    std::string command;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;  // text format only
};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void render(std::ostream& os, const Envelope& env, const std::string& format) {
    if (format == "csv") {
        std::vector<std::string> header;
        for (const auto& p : env.parameters) header.push_back(p.first);
        header.insert(header.end(), env.columns.begin(), env.columns.end());
        for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << csv_field(header[i]);
        os << '\n';
        for (const auto& row : env.rows) {
            std::size_t i = 0;
            for (const auto& p : env.parameters) os << (i++ ? "," : "") << csv_field(p.second);
            for (const auto& cell : row) os << (i++ ? "," : "") << csv_field(cell);
            os << '\n';
        }
        return;
    }
    if (format == "json") {
        nlohmann::ordered_json j;
        j["command"] = env.command;
        j["parameters"] = nlohmann::ordered_json::object();
        for (const auto& p : env.parameters) j["parameters"][p.first] = p.second;
        j["results"] = nlohmann::ordered_json::array();
        for (const auto& row : env.rows) {
            nlohmann::ordered_json r;
            for (std::size_t i = 0; i < env.columns.size(); ++i) r[env.columns[i]] = row[i];
            j["results"].push_back(std::move(r));
        }
        os << j.dump(2) << '\n';
        return;
    }
    os << "command: " << env.command << '\n';
    os << "parameters:";
    for (const auto& p : env.parameters) os << ' ' << p.first << '=' << p.second;
    os << '\n';
    std::vector<std::size_t> width(env.columns.size());
    for (std::size_t i = 0; i < env.columns.size(); ++i) width[i] = env.columns[i].size();
    for (const auto& row : env.rows)
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    auto line = [&](const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            s += cells[i];
            if (i + 1 < cells.size()) s += std::string(width[i] - cells[i].size() + 2, ' ');
        }
        os << s << '\n';
    };
    line(env.columns);
    for (const auto& row : env.rows) line(row);
    for (const auto& note : env.notes) os << note << '\n';
}

unsigned default_workers() {
    if (const char* env = std::getenv("MAXLOAD_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return 1;
}

std::vector<std::int64_t> parse_grid(const std::string& spec) {
    std::vector<std::int64_t> grid;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            grid.push_back(std::stoll(item));
        } catch (const std::exception&) {
            throw maxload::ParameterError("bad T grid entry '" + item + "'");
        }
    }
    return grid;
}

struct Options {
    std::string format = "text";
    int n = 0;
    int r = 0;
    std::int64_t rounds = 0;
    bool dist = false;
    std::size_t max_classes = maxload::ExactConfig{}.max_classes;
    std::uint64_t reps = 0;
    std::optional<std::uint64_t> seed;
    unsigned workers = default_workers();
    std::string emit_samples;
    std::string method;
    double abs_tol = maxload::QuadratureConfig{}.abs_tol;
    double truncation = maxload::QuadratureConfig{}.truncation;
    double tolerance = 1e-4;
    std::string backend = "exact";
    std::string grid;
    std::int64_t t_min = 25;
    std::int64_t t_max = 400;
    int n_max = 0;
    std::string csv_path;
};

int cmd_exact(const Options& o) {
    const maxload::Params params(o.n, o.r);
    const maxload::ExactConfig cfg{o.max_classes};
    const auto dist = maxload::distribution_after(params, o.rounds, cfg);
    const mpq_class e = dist.expected_max();
    mpq_class drift(mpz_class(o.r) * o.rounds, o.n);
    drift.canonicalize();

    Envelope env{"exact",
                 {{"n", std::to_string(o.n)},
                  {"r", std::to_string(o.r)},
                  {"T", std::to_string(o.rounds)},
                  {"max_classes", std::to_string(o.max_classes)}},
                 {"quantity", "exact", "decimal"},
                 {}};
    env.rows.push_back({"E[U]", maxload::format_rational(e), format_decimal(e.get_d())});
    const mpq_class a = e - drift;
    env.rows.push_back({"A", maxload::format_rational(a), format_decimal(a.get_d())});
    env.rows.push_back({"classes", std::to_string(dist.classes().size()), ""});
    if (o.dist)
        for (const auto& [u, p] : dist.max_pmf())
            env.rows.push_back({"P(U=" + std::to_string(u) + ")", maxload::rational_string(p),
                                format_decimal(p.get_d())});
    render(std::cout, env, o.format);
    return kExitOk;
}

int cmd_simulate(const Options& o) {
    const maxload::SimConfig cfg{maxload::Params(o.n, o.r), o.rounds, o.reps, *o.seed, o.workers};
    const auto batch = maxload::sample_batch(cfg);
    Envelope env{"simulate",
                 {{"n", std::to_string(o.n)},
                  {"r", std::to_string(o.r)},
                  {"T", std::to_string(o.rounds)},
                  {"reps", std::to_string(o.reps)},
                  {"seed", std::to_string(*o.seed)},
                  {"workers", std::to_string(o.workers)}},
                 {"quantity", "value"},
                 {}};
    env.rows.push_back({"mean_normalized_max", format_decimal(batch.mean())});
    env.rows.push_back({"std_error", format_decimal(batch.std_error())});
    env.rows.push_back({"std_dev", format_decimal(std::sqrt(batch.variance()))});
    if (!o.emit_samples.empty()) {
        std::ofstream csv(o.emit_samples);
        std::ofstream meta(o.emit_samples + ".meta");
        if (!csv || !meta) throw maxload::ParameterError("cannot write samples to " + o.emit_samples);
        maxload::write_batch_csv(csv, batch);
        maxload::write_batch_metadata(meta, cfg);
        env.notes.push_back("samples written to " + o.emit_samples + " (metadata in " + o.emit_samples +
                            ".meta)");
    }
    render(std::cout, env, o.format);
    return kExitOk;
}

maxload::CnrMethod parse_method(const std::string& m, int n) {
    if (m.empty()) return n <= 5 ? maxload::CnrMethod::closed_form : maxload::CnrMethod::quadrature;
    if (m == "closed") return maxload::CnrMethod::closed_form;
    if (m == "quad") return maxload::CnrMethod::quadrature;
    return maxload::CnrMethod::asymptotic;
}

int cmd_constant(const Options& o) {
    const maxload::Params params(o.n, o.r);
    const auto method = parse_method(o.method, o.n);
    maxload::QuadratureConfig qcfg;
    qcfg.abs_tol = o.abs_tol;
    qcfg.truncation = o.truncation;
    const auto c = maxload::c_nr(params, method, qcfg);
    Envelope env{"constant",
                 {{"n", std::to_string(o.n)},
                  {"r", std::to_string(o.r)},
                  {"method", std::string(maxload::method_name(method))},
                  {"abs_tol", format_decimal(o.abs_tol)},
                  {"truncation", format_decimal(o.truncation)}},
                 {"quantity", "value"},
                 {}};
    env.rows.push_back({"C", format_decimal(c.value)});
    env.rows.push_back({"error_bound", format_decimal(c.error_bound)});
    env.rows.push_back({"prefactor", format_decimal(maxload::cnr_prefactor(params))});
    if (o.n >= 2) env.rows.push_back({"asymptotic_C", format_decimal(maxload::asymptotic_cnr(params))});
    render(std::cout, env, o.format);
    return kExitOk;
}

int cmd_verify(const Options& o) {
    const auto report = maxload::verify_tables(o.tolerance);
    if (o.format == "text") {
        std::cout << "command: verify\nparameters: tolerance=" << format_decimal(o.tolerance) << '\n';
        maxload::write_report_text(std::cout, report);
    } else if (o.format == "csv") {
        maxload::write_report_csv(std::cout, report);
    } else {
        Envelope env{"verify", {{"tolerance", format_decimal(o.tolerance)}},
                     {"quantity", "computed", "paper_value", "abs_error", "pass"}, {}};
        for (const auto& row : report.rows)
            env.rows.push_back({row.quantity, format_decimal(row.computed), format_decimal(row.paper_value),
                                format_decimal(row.abs_error, 3), row.pass ? "true" : "false"});
        render(std::cout, env, o.format);
    }
    return report.all_pass() ? kExitOk : kExitVerify;
}

int cmd_estimate(const Options& o) {
    const maxload::Params params(o.n, o.r);
    const bool mc = o.backend == "mc";
    if (mc && !o.seed) throw maxload::ParameterError("--seed is required with --backend mc");
    if (mc && o.reps < 1) throw maxload::ParameterError("--reps is required with --backend mc");
    const auto grid = o.grid.empty() ? maxload::geometric_grid(o.t_min, o.t_max) : parse_grid(o.grid);

    std::optional<maxload::SimConfig> sim;
    if (mc) sim = maxload::SimConfig{params, 1, o.reps, *o.seed, o.workers};
    const auto backend = mc ? maxload::FitBackend::montecarlo : maxload::FitBackend::exact;
    const auto points = maxload::collect_A(params, grid, backend, sim, maxload::ExactConfig{o.max_classes});
    const auto fit = maxload::fit_cnr(params, points, backend);

    Envelope env{"estimate",
                 {{"n", std::to_string(o.n)},
                  {"r", std::to_string(o.r)},
                  {"backend", std::string(maxload::backend_name(backend))},
                  {"grid", [&] {
                       std::string g;
                       for (auto t : grid) g += (g.empty() ? "" : " ") + std::to_string(t);
                       return g;
                   }()}},
                 {"quantity", "value", "std_error"},
                 {}};
    if (mc) {
        env.parameters.push_back({"reps", std::to_string(o.reps)});
        env.parameters.push_back({"seed", std::to_string(*o.seed)});
        env.parameters.push_back({"workers", std::to_string(o.workers)});
    }
    env.rows.push_back({"c_hat", format_decimal(fit.c_hat), format_decimal(fit.c_std_error)});
    env.rows.push_back({"intercept", format_decimal(fit.intercept), format_decimal(fit.intercept_std_error)});
    env.rows.push_back({"residual_rms", format_decimal(fit.residual_rms), ""});
    if (o.n >= 2 && !params.deterministic())
        env.rows.push_back({"C_quadrature",
                            format_decimal(maxload::c_nr(params, maxload::CnrMethod::quadrature).value), ""});
    for (const auto& p : points)
        env.rows.push_back({"A(" + std::to_string(p.rounds) + ")",
                            format_decimal(p.value),
                            format_decimal(p.std_error)});
    render(std::cout, env, o.format);
    return kExitOk;
}

int cmd_sweep(const Options& o) {
    if (o.n_max < 2) throw maxload::ParameterError("--n-max must be >= 2");
    Envelope env{"sweep", {{"n_max", std::to_string(o.n_max)}, {"method", "quadrature"}},
                 {"n", "r", "C", "error_bound", "asymptotic_C", "ratio"}, {}};
    for (int n = 2; n <= o.n_max; ++n) {
        const auto m = maxload::expected_max_quadrature(n);
        for (int r = 1; r <= n - 1; ++r) {
            const maxload::Params params(n, r);
            const double pre = maxload::cnr_prefactor(params);
            const double c = pre * m.value;
            const double asym = maxload::asymptotic_cnr(params);
            env.rows.push_back({std::to_string(n), std::to_string(r), format_decimal(c),
                                format_decimal(pre * m.error_bound), format_decimal(asym),
                                format_decimal(c / asym)});
        }
    }
    if (!o.csv_path.empty()) {
        std::ofstream csv(o.csv_path);
        if (!csv) throw maxload::ParameterError("cannot write " + o.csv_path);
        render(csv, env, "csv");
        env.notes.push_back("csv written to " + o.csv_path);
    }
    render(std::cout, env, o.format);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"maxload: the sqrt(T) constant of the maximum bin load when r balls go into r distinct of n bins per round"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"text", "csv", "json"}))
        ->capture_default_str();

    auto add_nr = [&](CLI::App* sub) {
        sub->add_option("-n", o.n, "Number of bins")->required();
        sub->add_option("-r", o.r, "Balls per round (distinct bins)")->required();
    };
    auto add_sim = [&](CLI::App* sub, bool seed_required) {
        sub->add_option("--reps", o.reps, "Monte Carlo replicates");
        auto* seed = sub->add_option("--seed", o.seed, "RNG seed (no default: runs are reproducible)");
        if (seed_required) seed->required();
        sub->add_option("--workers", o.workers, "Worker threads (default $MAXLOAD_WORKERS or 1)")
            ->check(CLI::PositiveNumber);
    };

    auto* exact = app.add_subcommand("exact", "Exact E[U] by the occupancy-class DP");
    add_nr(exact);
    exact->add_option("-T", o.rounds, "Rounds")->required()->check(CLI::NonNegativeNumber);
    exact->add_flag("--dist", o.dist, "Also print the exact PMF of the maximum");
    exact->add_option("--max-classes", o.max_classes, "Class-count cap")->capture_default_str();

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo mean of (U - rT/n)/sqrt(T)");
    add_nr(simulate);
    simulate->add_option("-T", o.rounds, "Rounds per replicate")->required()->check(CLI::PositiveNumber);
    add_sim(simulate, true);
    simulate->get_option("--reps")->required();
    simulate->add_option("--emit-samples", o.emit_samples, "Write samples as CSV (plus PATH.meta)");

    auto* constant = app.add_subcommand("constant", "C_{n,r} from the Gaussian-maximum formula");
    add_nr(constant);
    constant->add_option("--method", o.method, "closed | quad | asym (default closed for n <= 5, else quad)")
        ->check(CLI::IsMember({"closed", "quad", "asym"}));
    constant->add_option("--abs-tol", o.abs_tol, "Quadrature absolute tolerance")->capture_default_str();
    constant->add_option("--truncation", o.truncation, "Quadrature truncation L")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Check the tabulated M(n) and C_{n,r} values");
    verify->add_option("--tolerance", o.tolerance, "Absolute tolerance")->capture_default_str();

    auto* estimate = app.add_subcommand("estimate", "Fit A(n,r;T) = c sqrt(T) + b over a T grid");
    add_nr(estimate);
    estimate->add_option("--backend", o.backend, "exact | mc")
        ->check(CLI::IsMember({"exact", "mc"}))
        ->capture_default_str();
    estimate->add_option("--grid", o.grid, "Comma-separated T values (overrides --t-min/--t-max)");
    estimate->add_option("--t-min", o.t_min, "Geometric grid start")->capture_default_str();
    estimate->add_option("--t-max", o.t_max, "Geometric grid end (ratio 2)")->capture_default_str();
    estimate->add_option("--max-classes", o.max_classes, "Class-count cap")->capture_default_str();
    add_sim(estimate, false);

    auto* sweep = app.add_subcommand("sweep", "C_{n,r} for 2 <= n <= n_max, 1 <= r < n (quadrature)");
    sweep->add_option("--n-max", o.n_max, "Largest n")->required();
    sweep->add_option("--csv", o.csv_path, "Also write the grid as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*exact) return cmd_exact(o);
        if (*simulate) return cmd_simulate(o);
        if (*constant) return cmd_constant(o);
        if (*verify) return cmd_verify(o);
        if (*estimate) return cmd_estimate(o);
        if (*sweep) return cmd_sweep(o);
    } catch (const maxload::CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const maxload::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const maxload::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
