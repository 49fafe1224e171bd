#include "maxload/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <thread>

#include "maxload/kernels.hpp"

namespace maxload {

void SimConfig::validate() const {
    if (rounds < 1) throw ParameterError("T must be >= 1");
    if (replicates < 1) throw ParameterError("replicates must be >= 1");
    if (workers < 1) throw ParameterError("workers must be >= 1");
}

double SampleBatch::mean() const {
    if (values.empty()) return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double SampleBatch::variance() const {
    if (values.size() < 2) return 0.0;
    const double m = mean();
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return ss / static_cast<double>(values.size() - 1);
}

double SampleBatch::std_error() const {
    if (values.empty()) return 0.0;
    return std::sqrt(variance() / static_cast<double>(values.size()));
}

SubsetSampler::SubsetSampler(int n) : index_(static_cast<std::size_t>(n)) {
    std::iota(index_.begin(), index_.end(), 0u);
}

std::vector<std::uint32_t> sample_round_subset(int n, int r, Xoshiro256pp& rng) {
    Params params(n, r);  // validates
    SubsetSampler sampler(params.n());
    auto picked = sampler.draw(rng, params.r());
    std::vector<std::uint32_t> out(picked.begin(), picked.end());
    std::sort(out.begin(), out.end());
    return out;
}

Simulator::Simulator(const Params& params)
    : params_(params),
      sampler_(params.n()),
      hits_(static_cast<std::size_t>(params.n()), 0),
      complement_(2 * params.r() > params.n()) {}

std::int64_t Simulator::run(std::int64_t rounds, Xoshiro256pp& rng) {
    if (rounds < 0) throw ParameterError("rounds must be >= 0");
    if (params_.deterministic()) return rounds;
    std::fill(hits_.begin(), hits_.end(), 0);
    if (!complement_) {
        const int k = params_.r();
        for (std::int64_t t = 0; t < rounds; ++t)
            for (std::uint32_t b : sampler_.draw(rng, k)) ++hits_[b];
        return kernels::max_i32(hits_);
    }
    // More than half the bins are hit each round: draw the n - r missed bins
    // instead, on top of a baseline of one ball per bin per round.
    const int k = params_.n() - params_.r();
    for (std::int64_t t = 0; t < rounds; ++t)
        for (std::uint32_t b : sampler_.draw(rng, k)) --hits_[b];
    return rounds + kernels::max_i32(hits_);
}

std::int64_t simulate_max(const Params& params, std::int64_t rounds, Xoshiro256pp& rng) {
    Simulator sim(params);
    return sim.run(rounds, rng);
}

SampleBatch sample_batch(const SimConfig& config) {
    config.validate();
    const auto m = config.replicates;
    const auto workers = static_cast<std::uint64_t>(config.workers);
    const std::int64_t n = config.params.n();
    const std::int64_t drift_num = static_cast<std::int64_t>(config.params.r()) * config.rounds;
    const double scale = 1.0 / (static_cast<double>(n) * std::sqrt(static_cast<double>(config.rounds)));

    SampleBatch batch{std::vector<double>(m), config};

    auto work = [&](std::uint64_t w) {
        const std::uint64_t begin = m * w / workers;
        const std::uint64_t end = m * (w + 1) / workers;
        Simulator sim(config.params);
        for (std::uint64_t i = begin; i < end; ++i) {
            auto rng = Xoshiro256pp::substream(config.seed, i);
            const std::int64_t u = sim.run(config.rounds, rng);
            // n U - r T is an exact integer, so r = n gives exactly 0.
            batch.values[i] = static_cast<double>(n * u - drift_num) * scale;
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    return batch;
}

LimitDraws sample_limit_max(const Params& params, std::size_t count, Xoshiro256pp& rng) {
    const int n = params.n();
    const int r = params.r();
    LimitDraws out;
    out.values.assign(count, 0.0);
    if (static_cast<std::int64_t>(r) * (n - r) == 0) {
        out.degenerate = true;
        return out;
    }
    const double nd = n;
    const double scale = std::sqrt(static_cast<double>(r) * (n - r) * (n - 1) / (nd * nd * nd));
    NormalPolar normal;
    std::vector<double> z(static_cast<std::size_t>(n));
    for (double& value : out.values) {
        for (double& zj : z) zj = normal(rng);
        const kernels::SumMax sm = kernels::sum_max_f64(z);
        // max_j W_j = -S/(n-1) + n/(n-1) max_j Z_j
        value = scale * (nd * sm.max - sm.sum) / (nd - 1.0);
    }
    return out;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw ParameterError("KS test needs two non-empty samples");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return d;
}

double ks_threshold(std::size_t m1, std::size_t m2, double c_alpha) {
    const double a = static_cast<double>(m1);
    const double b = static_cast<double>(m2);
    return c_alpha * std::sqrt((a + b) / (a * b));
}

bool TailReport::within_bound() const {
    for (std::size_t i = 0; i < empirical_tail.size(); ++i)
        if (empirical_tail[i] > hoeffding_bound[i]) return false;
    return true;
}

TailReport tail_check(const SampleBatch& batch, std::span<const double> lambda_grid) {
    if (batch.values.empty()) throw ParameterError("tail check needs a non-empty batch");
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        if (!(lambda_grid[i] > 0.0)) throw ParameterError("lambda grid must be positive");
        if (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1]))
            throw ParameterError("lambda grid must be strictly increasing");
    }
    TailReport report;
    report.lambda_grid.assign(lambda_grid.begin(), lambda_grid.end());
    const double m = static_cast<double>(batch.values.size());
    const double n = batch.config.params.n();
    for (double lambda : lambda_grid) {
        report.empirical_tail.push_back(
            static_cast<double>(kernels::count_abs_ge_f64(batch.values, lambda)) / m);
        report.hoeffding_bound.push_back(2.0 * n * std::exp(-2.0 * lambda * lambda));
    }
    return report;
}

void write_batch_csv(std::ostream& os, const SampleBatch& batch) {
    const auto old_precision = os.precision(17);
    os << "value\n";
    for (double v : batch.values) os << v << '\n';
    os.precision(old_precision);
}

void write_batch_metadata(std::ostream& os, const SimConfig& config) {
    os << "n: " << config.params.n() << '\n'
       << "r: " << config.params.r() << '\n'
       << "T: " << config.rounds << '\n'
       << "replicates: " << config.replicates << '\n'
       << "seed: " << config.seed << '\n'
       << "workers: " << config.workers << '\n';
}

}  // namespace maxload
