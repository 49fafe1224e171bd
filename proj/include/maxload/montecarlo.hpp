#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "maxload/params.hpp"
#include "maxload/rng.hpp"

namespace maxload {

struct SimConfig {
    Params params;
    std::int64_t rounds = 1;        // T
    std::uint64_t replicates = 1;
    std::uint64_t seed = 0;
    unsigned workers = 1;

    void validate() const;
};

// Normalized statistics (U - rT/n) / sqrt(T), one per replicate, in
// replicate order.
struct SampleBatch {
    std::vector<double> values;
    SimConfig config;

    double mean() const;
    double variance() const;  // unbiased; 0 for a single value
    double std_error() const;
};

// Draws uniform k-subsets of {0..n-1} by a partial Fisher-Yates shuffle of a
// persistent index buffer. Any starting permutation of the buffer yields a
// uniform subset, so the buffer is never reset.
class SubsetSampler {
public:
    explicit SubsetSampler(int n);

    template <class Rng>
    std::span<const std::uint32_t> draw(Rng& rng, int k) {
        const std::uint64_t n = index_.size();
        for (int i = 0; i < k; ++i) {
            const auto j = static_cast<std::size_t>(i) + uniform_below(rng, n - static_cast<std::uint64_t>(i));
            std::swap(index_[static_cast<std::size_t>(i)], index_[j]);
        }
        return {index_.data(), static_cast<std::size_t>(k)};
    }

private:
    std::vector<std::uint32_t> index_;
};

// One round's bins, sorted ascending.
std::vector<std::uint32_t> sample_round_subset(int n, int r, Xoshiro256pp& rng);

// Runs the process for `rounds` rounds and returns the maximum occupancy.
// Reuses its buffers across calls.
class Simulator {
public:
    explicit Simulator(const Params& params);

    std::int64_t run(std::int64_t rounds, Xoshiro256pp& rng);

private:
    Params params_;
    SubsetSampler sampler_;
    std::vector<std::int32_t> hits_;
    bool complement_;
};

std::int64_t simulate_max(const Params& params, std::int64_t rounds, Xoshiro256pp& rng);

// Replicate i draws from Xoshiro256pp::substream(seed, i). Replicates are
// split into contiguous per-worker ranges and concatenated in worker order.
SampleBatch sample_batch(const SimConfig& config);

struct LimitDraws {
    std::vector<double> values;
    bool degenerate = false;  // r(n - r) == 0: the limit law is a point mass at 0
};

// i.i.d. draws of max(Y_1..Y_n), Y ~ N(0, Gamma), built from n i.i.d. standard
// normals Z as sqrt(r(n-r)(n-1)/n^3) * (n max Z - sum Z) / (n - 1).
LimitDraws sample_limit_max(const Params& params, std::size_t count, Xoshiro256pp& rng);

// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

// Asymptotic rejection threshold c_alpha * sqrt((m1 + m2) / (m1 m2)).
double ks_threshold(std::size_t m1, std::size_t m2, double c_alpha = 1.63);

struct TailReport {
    std::vector<double> lambda_grid;
    std::vector<double> empirical_tail;   // fraction with |value| >= lambda
    std::vector<double> hoeffding_bound;  // 2 n exp(-2 lambda^2)

    bool within_bound() const;
};

TailReport tail_check(const SampleBatch& batch, std::span<const double> lambda_grid);

// CSV with header "value", one sample per line.
void write_batch_csv(std::ostream& os, const SampleBatch& batch);
// key: value lines describing the batch configuration.
void write_batch_metadata(std::ostream& os, const SimConfig& config);

}  // namespace maxload
