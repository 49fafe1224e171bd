#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "maxload/gaussian_max.hpp"
#include "maxload/montecarlo.hpp"
#include "maxload/occupancy_exact.hpp"

using namespace maxload;

namespace {

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double var_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

// (2,1), T = 10^4, 10^5 replicates; shared by the mean and tail tests.
const SampleBatch& two_bin_batch() {
    static const SampleBatch batch = sample_batch({Params(2, 1), 10'000, 100'000, 11, 4});
    return batch;
}

}  // namespace

TEST_CASE("degenerate subsets") {
    Xoshiro256pp rng(1);
    for (int i = 0; i < 10; ++i) {
        CHECK(sample_round_subset(1, 1, rng) == std::vector<std::uint32_t>{0});
        CHECK(sample_round_subset(5, 5, rng) == std::vector<std::uint32_t>{0, 1, 2, 3, 4});
    }
    CHECK_THROWS_AS(sample_round_subset(3, 4, rng), ParameterError);
    CHECK_THROWS_AS(sample_round_subset(3, 0, rng), ParameterError);
}

TEST_CASE("subsets of 4 choose 2 are uniform") {
    Xoshiro256pp rng(99);
    SubsetSampler sampler(4);
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> freq;
    const int draws = 600'000;
    for (int i = 0; i < draws; ++i) {
        auto s = sampler.draw(rng, 2);
        auto a = std::min(s[0], s[1]), b = std::max(s[0], s[1]);
        CHECK_FALSE(a == b);
        ++freq[{a, b}];
    }
    REQUIRE(freq.size() == 6);
    const double p = 1.0 / 6.0;
    const double sigma = std::sqrt(p * (1 - p) / draws);
    double chi2 = 0.0;
    for (const auto& [k, c] : freq) {
        const double f = static_cast<double>(c) / draws;
        CHECK(std::fabs(f - p) <= 5.0 * sigma);
        chi2 += (c - draws * p) * (c - draws * p) / (draws * p);
    }
    // 5 degrees of freedom; 20.5 is the 0.999 quantile.
    CHECK(chi2 < 20.5);
}

TEST_CASE("simulate_max basics and range") {
    Xoshiro256pp rng(5);
    CHECK(simulate_max(Params(3, 3), 9, rng) == 9);
    CHECK(simulate_max(Params(2, 1), 1, rng) == 1);
    CHECK(simulate_max(Params(4, 2), 0, rng) == 0);
    for (int n = 1; n <= 9; ++n)
        for (int r = 1; r <= n; ++r)
            for (std::int64_t t : {1, 2, 7, 50}) {
                const auto u = simulate_max(Params(n, r), t, rng);
                CAPTURE(n);
                CAPTURE(r);
                CAPTURE(t);
                CHECK(u <= t);
                CHECK(u * n >= r * t);  // u >= ceil(rT/n)
            }
}

TEST_CASE("simulated mean matches the exact engine") {
    // Covers both sampling paths: direct (r <= n/2) and complement (r > n/2).
    struct Case {
        int n, r;
        std::int64_t t;
    };
    for (const auto& c : {Case{2, 1, 200}, Case{5, 2, 30}, Case{5, 4, 30}, Case{4, 3, 40}}) {
        const Params p(c.n, c.r);
        const double exact = exact_max_expectation(p, c.t).get_d();
        const auto batch = sample_batch({p, c.t, 10'000, 3, 2});
        const double drift = static_cast<double>(c.r) * c.t / c.n;
        const double root_t = std::sqrt(static_cast<double>(c.t));
        const double mean_u = drift + root_t * batch.mean();
        const double se_u = root_t * batch.std_error();
        CAPTURE(c.n);
        CAPTURE(c.r);
        CHECK(std::fabs(mean_u - exact) <= 3.0 * se_u);
    }
}

TEST_CASE("two-bin maximum at T = 10^4") {
    const auto batch = sample_batch({Params(2, 1), 10'000, 10'000, 21, 2});
    const double mean_u = 5000.0 + 100.0 * batch.mean();
    const double se_u = 100.0 * batch.std_error();
    CHECK(std::fabs(mean_u - (5000.0 + 0.39894 * 100.0)) <= 4.0 * se_u);

    CHECK(std::fabs(two_bin_batch().mean() - 0.3989) <= 0.01);
}

TEST_CASE("batch contract") {
    SUBCASE("r = n is identically zero") {
        const auto batch = sample_batch({Params(3, 3), 100, 50, 123, 3});
        for (double v : batch.values) CHECK(v == 0.0);
        CHECK(batch.mean() == 0.0);
        CHECK(batch.std_error() == 0.0);
    }
    SUBCASE("independent of worker count and repeatable") {
        const SimConfig one{Params(5, 2), 300, 257, 77, 1};
        SimConfig eight = one;
        eight.workers = 8;
        const auto a = sample_batch(one);
        CHECK(a.values == sample_batch(one).values);
        CHECK(a.values == sample_batch(eight).values);
        SimConfig other_seed = one;
        other_seed.seed = 78;
        CHECK(a.values != sample_batch(other_seed).values);
    }
    SUBCASE("values are finite and bounded by sqrt(T)") {
        for (auto [n, r] : {std::pair{2, 1}, {6, 5}, {7, 3}}) {
            const std::int64_t t = 64;
            const auto batch = sample_batch({Params(n, r), t, 500, 9, 2});
            CHECK(batch.values.size() == 500);
            for (double v : batch.values) {
                CHECK(std::isfinite(v));
                CHECK(std::fabs(v) <= std::sqrt(static_cast<double>(t)));
            }
        }
    }
    SUBCASE("invalid configs") {
        CHECK_THROWS_AS(sample_batch({Params(2, 1), 0, 10, 1, 1}), ParameterError);
        CHECK_THROWS_AS(sample_batch({Params(2, 1), 10, 0, 1, 1}), ParameterError);
        CHECK_THROWS_AS(sample_batch({Params(2, 1), 10, 10, 1, 0}), ParameterError);
    }
}

TEST_CASE("limit sampler means") {
    Xoshiro256pp rng(2718);
    const auto two = sample_limit_max(Params(2, 1), 1'000'000, rng);
    CHECK_FALSE(two.degenerate);
    CHECK(std::fabs(mean_of(two.values) - 0.39894) <= 0.002);
    const auto four = sample_limit_max(Params(4, 2), 1'000'000, rng);
    CHECK(std::fabs(mean_of(four.values) - 0.59431) <= 0.003);
}

TEST_CASE("limit sampler mean and variance within 4 sigma of the analytic values") {
    // max W = (n max Z - S) / (n - 1) with Cov(S, max Z) = 1, so
    // Var(max W) = (n^2 Var(max Z) - n) / (n - 1)^2.
    Xoshiro256pp rng(314);
    for (auto [n, r] : {std::pair{3, 1}, {5, 2}, {8, 3}}) {
        const double nd = n;
        const double m1 = expected_max_quadrature(n).value;
        const double var_z = max_moment(n, 2).value - m1 * m1;
        const double scale2 = r * (nd - r) * (nd - 1) / (nd * nd * nd);
        const double mean = std::sqrt(scale2) * nd / (nd - 1) * m1;
        const double var = scale2 * (nd * nd * var_z - nd) / ((nd - 1) * (nd - 1));

        const std::size_t m = 400'000;
        const auto draws = sample_limit_max(Params(n, r), m, rng).values;
        const double sample_mean = mean_of(draws);
        const double sample_var = var_of(draws);
        double m4 = 0.0;
        for (double x : draws) m4 += std::pow(x - sample_mean, 4);
        m4 /= static_cast<double>(m);
        CAPTURE(n);
        CAPTURE(r);
        CHECK(std::fabs(sample_mean - mean) <= 4.0 * std::sqrt(var / m));
        CHECK(std::fabs(sample_var - var) <= 4.0 * std::sqrt((m4 - var * var) / m));
    }
}

TEST_CASE("limit sampler degenerate cases") {
    Xoshiro256pp rng(1);
    const auto full = sample_limit_max(Params(2, 2), 100, rng);
    CHECK(full.degenerate);
    for (double v : full.values) CHECK(v == 0.0);
    const auto single = sample_limit_max(Params(1, 1), 10, rng);
    CHECK(single.degenerate);
    CHECK(single.values == std::vector<double>(10, 0.0));
}

TEST_CASE("KS statistic") {
    const std::vector<double> x{0.3, -1.2, 2.2, 0.7};
    CHECK(ks_two_sample(x, x) == 0.0);
    CHECK(ks_two_sample(std::vector<double>{0.0}, std::vector<double>{1.0}) == 1.0);
    const std::vector<double> a{1, 2, 3}, b{2.5};
    CHECK(ks_two_sample(a, b) == doctest::Approx(2.0 / 3.0));
    CHECK(ks_two_sample(b, a) == ks_two_sample(a, b));
    const std::vector<double> ta{1, 1, 2}, tb{1, 2, 2};
    CHECK(ks_two_sample(ta, tb) == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(ks_two_sample(std::vector<double>{}, x), ParameterError);
    CHECK(ks_threshold(5000, 5000) == doctest::Approx(1.63 * std::sqrt(2.0 / 5000)));
}

TEST_CASE("KS symmetry on random samples") {
    Xoshiro256pp rng(8);
    NormalPolar normal;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> a(1 + uniform_below(rng, 50)), b(1 + uniform_below(rng, 50));
        for (auto& v : a) v = normal(rng);
        for (auto& v : b) v = std::round(normal(rng) * 4) / 4;
        const double d = ks_two_sample(a, b);
        CHECK(d == ks_two_sample(b, a));
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
    }
}

TEST_CASE("simulation matches the limit law at large T") {
    const std::size_t m = 5000;
    const auto batch = sample_batch({Params(4, 2), 10'000, m, 4242, 4});
    Xoshiro256pp rng(4243);
    const auto limit = sample_limit_max(Params(4, 2), m, rng);
    CHECK(ks_two_sample(batch.values, limit.values) < ks_threshold(m, m));
}

TEST_CASE("tail check") {
    const std::vector<double> grid{0.5, 1.0, 1.5, 2.0, 2.5};
    SUBCASE("deterministic batch") {
        const auto batch = sample_batch({Params(4, 4), 10, 100, 1, 1});
        const auto report = tail_check(batch, grid);
        for (double t : report.empirical_tail) CHECK(t == 0.0);
        CHECK(report.within_bound());
    }
    SUBCASE("two bins at lambda = 2") {
        const std::vector<double> lam{2.0};
        const auto report = tail_check(two_bin_batch(), lam);
        CHECK(report.hoeffding_bound[0] == doctest::Approx(4.0 * std::exp(-8.0)));
        CHECK(report.empirical_tail[0] <= report.hoeffding_bound[0]);
    }
    SUBCASE("small lambda: the bound exceeds 1") {
        const std::vector<double> lam{1e-9};
        const auto report = tail_check(two_bin_batch(), lam);
        CHECK(report.empirical_tail[0] <= 1.0);
        CHECK(report.hoeffding_bound[0] >= 1.0);
    }
    SUBCASE("empirical tail is non-increasing") {
        const auto report = tail_check(two_bin_batch(), grid);
        for (std::size_t i = 1; i < grid.size(); ++i)
            CHECK(report.empirical_tail[i] <= report.empirical_tail[i - 1]);
        CHECK(report.within_bound());
    }
    SUBCASE("bad grids") {
        const std::vector<double> dec{1.0, 0.5}, flat{1.0, 1.0}, neg{-1.0, 1.0};
        CHECK_THROWS_AS(tail_check(two_bin_batch(), dec), ParameterError);
        CHECK_THROWS_AS(tail_check(two_bin_batch(), flat), ParameterError);
        CHECK_THROWS_AS(tail_check(two_bin_batch(), neg), ParameterError);
    }
}

TEST_CASE("batch export") {
    const auto batch = sample_batch({Params(3, 1), 16, 3, 5, 1});
    std::ostringstream csv, meta;
    write_batch_csv(csv, batch);
    write_batch_metadata(meta, batch.config);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "value");
    std::vector<double> back;
    while (std::getline(in, line)) back.push_back(std::stod(line));
    CHECK(back == batch.values);
    CHECK(meta.str() == "n: 3\nr: 1\nT: 16\nreplicates: 3\nseed: 5\nworkers: 1\n");
}
