#include "maxload/occupancy_exact.hpp"

#include <algorithm>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace maxload {
namespace {

struct CountsHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (std::uint32_t c : v) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

struct Run {
    std::uint32_t value;
    int multiplicity;
};

void sort_classes(std::vector<OccupancyClass>& classes) {
    std::sort(classes.begin(), classes.end(),
              [](const OccupancyClass& a, const OccupancyClass& b) { return a.counts > b.counts; });
}

std::string cap_message(std::size_t cap, std::int64_t rounds) {
    return "occupancy class count exceeds cap max_classes=" + std::to_string(cap) +
           " at round " + std::to_string(rounds);
}

void check_grid(const std::vector<std::int64_t>& grid) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0) throw ParameterError("rounds must be >= 0");
        if (i > 0 && grid[i] <= grid[i - 1])
            throw ParameterError("round grid must be strictly increasing");
    }
}

}  // namespace

mpq_class ExactDistribution::weight(std::size_t i) const {
    mpq_class w(classes_.at(i).mass, denominator_);
    w.canonicalize();
    return w;
}

mpq_class ExactDistribution::total_weight() const {
    mpz_class sum = 0;
    for (const auto& c : classes_) sum += c.mass;
    mpq_class w(sum, denominator_);
    w.canonicalize();
    return w;
}

mpq_class ExactDistribution::expected_max() const {
    mpz_class sum = 0;
    for (const auto& c : classes_) mpz_addmul_ui(sum.get_mpz_t(), c.mass.get_mpz_t(), c.counts.front());
    mpq_class e(sum, denominator_);
    e.canonicalize();
    return e;
}

std::map<std::uint32_t, mpq_class> ExactDistribution::max_pmf() const {
    std::map<std::uint32_t, mpz_class> mass;
    for (const auto& c : classes_) mass[c.counts.front()] += c.mass;
    std::map<std::uint32_t, mpq_class> pmf;
    for (auto& [u, m] : mass) {
        mpq_class p(m, denominator_);
        p.canonicalize();
        pmf.emplace(u, std::move(p));
    }
    return pmf;
}

ExactDistribution initial_distribution(const Params& params) {
    std::vector<OccupancyClass> classes;
    classes.push_back({std::vector<std::uint32_t>(static_cast<std::size_t>(params.n()), 0u), 1});
    return ExactDistribution(params, 0, std::move(classes), 1);
}

ExactDistribution step(const ExactDistribution& dist, std::size_t max_classes) {
    const Params& params = dist.params();
    const int n = params.n();
    const int r = params.r();
    const std::uint64_t subsets = binomial_u64(n, r);

    std::unordered_map<std::vector<std::uint32_t>, mpz_class, CountsHash> next;
    next.reserve(dist.classes().size() * 2 + 1);

    std::vector<Run> runs;
    std::vector<int> take;
    std::vector<int> tail_capacity;  // bins available in runs[i..]
    std::vector<std::uint32_t> key(static_cast<std::size_t>(n));

    for (const OccupancyClass& cls : dist.classes()) {
        runs.clear();
        for (std::uint32_t c : cls.counts) {
            if (!runs.empty() && runs.back().value == c)
                ++runs.back().multiplicity;
            else
                runs.push_back({c, 1});
        }
        take.assign(runs.size(), 0);
        tail_capacity.assign(runs.size() + 1, 0);
        for (std::size_t i = runs.size(); i-- > 0;)
            tail_capacity[i] = tail_capacity[i + 1] + runs[i].multiplicity;

        auto emit = [&](std::uint64_t multiplier) {
            std::size_t pos = 0;
            for (std::size_t i = 0; i < runs.size(); ++i) {
                for (int j = 0; j < take[i]; ++j) key[pos++] = runs[i].value + 1;
                for (int j = take[i]; j < runs[i].multiplicity; ++j) key[pos++] = runs[i].value;
            }
            mpz_class& slot = next[key];
            mpz_addmul_ui(slot.get_mpz_t(), cls.mass.get_mpz_t(), multiplier);
            if (next.size() > max_classes) throw CapacityError(cap_message(max_classes, dist.rounds() + 1));
        };

        std::function<void(std::size_t, int, std::uint64_t)> choose =
            [&](std::size_t idx, int remaining, std::uint64_t multiplier) {
                if (remaining == 0) {
                    for (std::size_t i = idx; i < runs.size(); ++i) take[i] = 0;
                    emit(multiplier);
                    return;
                }
                if (idx == runs.size() || remaining > tail_capacity[idx]) return;
                const int m = runs[idx].multiplicity;
                for (int k = std::min(m, remaining); k >= 0; --k) {
                    take[idx] = k;
                    choose(idx + 1, remaining - k, multiplier * binomial_u64(m, k));
                }
            };
        choose(0, r, 1);
    }

    std::vector<OccupancyClass> classes;
    classes.reserve(next.size());
    for (auto& [counts, mass] : next) classes.push_back({counts, std::move(mass)});
    sort_classes(classes);

    mpz_class denominator = dist.denominator() * mpz_class(static_cast<unsigned long>(subsets));
    return ExactDistribution(params, dist.rounds() + 1, std::move(classes), std::move(denominator));
}

ExactDistribution distribution_after(const Params& params, std::int64_t rounds,
                                     const ExactConfig& cfg) {
    if (rounds < 0) throw ParameterError("rounds must be >= 0");
    ExactDistribution dist = initial_distribution(params);
    for (std::int64_t t = 0; t < rounds; ++t) dist = step(dist, cfg.max_classes);
    return dist;
}

mpq_class exact_max_expectation(const Params& params, std::int64_t rounds, const ExactConfig& cfg) {
    if (rounds < 0) throw ParameterError("rounds must be >= 0");
    if (params.deterministic()) return mpq_class(rounds);
    return distribution_after(params, rounds, cfg).expected_max();
}

mpq_class exact_A(const Params& params, std::int64_t rounds, const ExactConfig& cfg) {
    mpq_class drift(mpz_class(params.r()) * rounds, params.n());
    drift.canonicalize();
    return exact_max_expectation(params, rounds, cfg) - drift;
}

std::vector<mpq_class> exact_max_expectation_series(const Params& params,
                                                    const std::vector<std::int64_t>& grid,
                                                    const ExactConfig& cfg) {
    check_grid(grid);
    std::vector<mpq_class> out;
    out.reserve(grid.size());
    if (params.deterministic()) {
        for (std::int64_t t : grid) out.emplace_back(t);
        return out;
    }
    ExactDistribution dist = initial_distribution(params);
    for (std::int64_t t : grid) {
        while (dist.rounds() < t) dist = step(dist, cfg.max_classes);
        out.push_back(dist.expected_max());
    }
    return out;
}

mpq_class brute_force_max_expectation(const Params& params, std::int64_t rounds,
                                      std::uint64_t max_sequences) {
    if (rounds < 0) throw ParameterError("rounds must be >= 0");
    const int n = params.n();
    const int r = params.r();
    const std::uint64_t per_round = binomial_u64(n, r);

    std::uint64_t total = 1;
    for (std::int64_t t = 0; t < rounds; ++t) {
        if (total > max_sequences / per_round)
            throw CapacityError("brute force needs binom(" + std::to_string(n) + "," +
                                std::to_string(r) + ")^" + std::to_string(rounds) +
                                " sequences, above cap " + std::to_string(max_sequences));
        total *= per_round;
    }

    // All r-subsets of {0..n-1}.
    std::vector<std::vector<int>> subsets;
    std::vector<int> pick(static_cast<std::size_t>(r));
    std::function<void(int, int)> gen = [&](int start, int depth) {
        if (depth == r) {
            subsets.push_back(pick);
            return;
        }
        for (int b = start; b <= n - (r - depth); ++b) {
            pick[static_cast<std::size_t>(depth)] = b;
            gen(b + 1, depth + 1);
        }
    };
    gen(0, 0);

    std::vector<std::uint32_t> counts(static_cast<std::size_t>(n), 0);
    std::vector<std::uint64_t> hist(static_cast<std::size_t>(rounds) + 1, 0);
    std::function<void(std::int64_t)> walk = [&](std::int64_t depth) {
        if (depth == rounds) {
            ++hist[*std::max_element(counts.begin(), counts.end())];
            return;
        }
        for (const auto& s : subsets) {
            for (int b : s) ++counts[static_cast<std::size_t>(b)];
            walk(depth + 1);
            for (int b : s) --counts[static_cast<std::size_t>(b)];
        }
    };
    walk(0);

    mpz_class weighted = 0;
    for (std::size_t u = 0; u < hist.size(); ++u)
        weighted += mpz_class(static_cast<unsigned long>(hist[u])) * static_cast<unsigned long>(u);
    mpq_class e(weighted, mpz_class(static_cast<unsigned long>(total)));
    e.canonicalize();
    return e;
}

void write_distribution(std::ostream& os, const ExactDistribution& dist) {
    for (std::size_t i = 0; i < dist.classes().size(); ++i) {
        const auto& counts = dist.classes()[i].counts;
        for (std::size_t j = 0; j < counts.size(); ++j) os << (j ? "," : "") << counts[j];
        const mpq_class w = dist.weight(i);
        os << '\t' << w.get_num() << '/' << w.get_den() << '\n';
    }
}

std::string to_text(const ExactDistribution& dist) {
    std::ostringstream os;
    write_distribution(os, dist);
    return os.str();
}

ExactDistribution parse_distribution(const Params& params, std::int64_t rounds, std::istream& is) {
    if (rounds < 0) throw ParameterError("rounds must be >= 0");
    mpz_class denominator = 1;
    const mpz_class per_round(static_cast<unsigned long>(binomial_u64(params.n(), params.r())));
    for (std::int64_t t = 0; t < rounds; ++t) denominator *= per_round;

    std::vector<OccupancyClass> classes;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParameterError("missing TAB in distribution line: " + line);
        OccupancyClass cls;
        std::istringstream counts(line.substr(0, tab));
        std::string field;
        while (std::getline(counts, field, ','))
            cls.counts.push_back(static_cast<std::uint32_t>(std::stoul(field)));
        if (cls.counts.size() != static_cast<std::size_t>(params.n()))
            throw ParameterError("count vector length differs from n: " + line);
        if (!std::is_sorted(cls.counts.rbegin(), cls.counts.rend()))
            throw ParameterError("count vector is not non-increasing: " + line);
        mpq_class w(line.substr(tab + 1));
        w.canonicalize();
        mpq_class scaled = w * denominator;
        if (scaled.get_den() != 1) throw ParameterError("weight is not a multiple of 1/binom(n,r)^T: " + line);
        cls.mass = scaled.get_num();
        classes.push_back(std::move(cls));
    }
    sort_classes(classes);
    return ExactDistribution(params, rounds, std::move(classes), std::move(denominator));
}

}  // namespace maxload
