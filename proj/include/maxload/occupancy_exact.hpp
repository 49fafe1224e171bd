#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "maxload/params.hpp"

namespace maxload {

// Bin occupancies up to relabeling: counts sorted non-increasing. The mass is
// an integer numerator over the owning distribution's common denominator.
struct OccupancyClass {
    std::vector<std::uint32_t> counts;
    mpz_class mass;
};

// Exact law of the occupancy vector after `rounds` rounds, reduced modulo
// bin permutations. Class probabilities are mass / denominator, where the
// denominator is binom(n, r)^rounds.
class ExactDistribution {
public:
    const Params& params() const noexcept { return params_; }
    std::int64_t rounds() const noexcept { return rounds_; }
    const std::vector<OccupancyClass>& classes() const noexcept { return classes_; }
    const mpz_class& denominator() const noexcept { return denominator_; }

    // Reduced probability of class i.
    mpq_class weight(std::size_t i) const;

    // Sum of all weights; exactly 1 for every reachable distribution.
    mpq_class total_weight() const;

    // E[max occupancy] = sum of weight * counts[0].
    mpq_class expected_max() const;

    // P(U = u) for each attained u.
    std::map<std::uint32_t, mpq_class> max_pmf() const;

private:
    friend ExactDistribution initial_distribution(const Params&);
    friend ExactDistribution step(const ExactDistribution&, std::size_t);
    friend ExactDistribution parse_distribution(const Params&, std::int64_t, std::istream&);

    ExactDistribution(Params params, std::int64_t rounds, std::vector<OccupancyClass> classes,
                      mpz_class denominator)
        : params_(params), rounds_(rounds), classes_(std::move(classes)),
          denominator_(std::move(denominator)) {}

    Params params_;
    std::int64_t rounds_;
    std::vector<OccupancyClass> classes_;  // sorted by counts, descending lexicographic
    mpz_class denominator_;
};

struct ExactConfig {
    std::size_t max_classes = 5'000'000;
};

ExactDistribution initial_distribution(const Params& params);

// One round: every class splits according to how many chosen bins fall in
// each run of equal counts, with multiplicity prod binom(m_v, k_v).
// Throws CapacityError when the result has more than max_classes classes.
ExactDistribution step(const ExactDistribution& dist,
                       std::size_t max_classes = ExactConfig{}.max_classes);

ExactDistribution distribution_after(const Params& params, std::int64_t rounds,
                                     const ExactConfig& cfg = {});

mpq_class exact_max_expectation(const Params& params, std::int64_t rounds,
                                const ExactConfig& cfg = {});

// E[U] - rT/n.
mpq_class exact_A(const Params& params, std::int64_t rounds, const ExactConfig& cfg = {});

// exact_max_expectation at every entry of a strictly increasing grid, from
// one forward pass of the DP.
std::vector<mpq_class> exact_max_expectation_series(const Params& params,
                                                    const std::vector<std::int64_t>& grid,
                                                    const ExactConfig& cfg = {});

inline constexpr std::uint64_t kDefaultBruteForceCap = 10'000'000;

// Enumerates all binom(n,r)^T equally likely round sequences. Independent of
// the class DP; used as its oracle.
mpq_class brute_force_max_expectation(const Params& params, std::int64_t rounds,
                                      std::uint64_t max_sequences = kDefaultBruteForceCap);

// Text form: one class per line, "c0,c1,...<TAB>num/den".
void write_distribution(std::ostream& os, const ExactDistribution& dist);
std::string to_text(const ExactDistribution& dist);
ExactDistribution parse_distribution(const Params& params, std::int64_t rounds, std::istream& is);

}  // namespace maxload
