#include <doctest.h>

#include <sstream>

#include "maxload/occupancy_exact.hpp"

using namespace maxload;

namespace {

mpq_class q(const char* s) {
    mpq_class v(s);
    v.canonicalize();
    return v;
}

}  // namespace

TEST_CASE("params validation") {
    CHECK_THROWS_AS(Params(3, 4), ParameterError);
    CHECK_THROWS_AS(Params(3, 0), ParameterError);
    CHECK_THROWS_AS(Params(0, 0), ParameterError);
    CHECK_NOTHROW(Params(1, 1));
}

TEST_CASE("initial distribution is the empty process") {
    for (auto [n, r] : {std::pair{3, 1}, {4, 2}, {1, 1}}) {
        const auto d = initial_distribution(Params(n, r));
        CHECK(d.rounds() == 0);
        REQUIRE(d.classes().size() == 1);
        CHECK(d.classes()[0].counts == std::vector<std::uint32_t>(static_cast<std::size_t>(n), 0));
        CHECK(d.weight(0) == 1);
    }
}

TEST_CASE("single steps") {
    const Params p21(2, 1);
    auto d = step(initial_distribution(p21));
    CHECK(to_text(d) == "1,0\t1/1\n");
    d = step(d);
    CHECK(d.rounds() == 2);
    CHECK(to_text(d) == "2,0\t1/2\n1,1\t1/2\n");

    const auto d42 = step(initial_distribution(Params(4, 2)));
    CHECK(to_text(d42) == "1,1,0,0\t1/1\n");
}

TEST_CASE("expected maximum examples") {
    CHECK(exact_max_expectation(Params(2, 1), 2) == q("3/2"));
    CHECK(exact_max_expectation(Params(2, 1), 3) == q("9/4"));
    CHECK(exact_max_expectation(Params(3, 3), 5) == 5);
    CHECK(exact_max_expectation(Params(2, 1), 0) == 0);
    // Frozen from an independent Python enumeration of all round sequences.
    CHECK(exact_max_expectation(Params(3, 1), 3) == q("17/9"));
    CHECK(exact_max_expectation(Params(4, 2), 3) == q("89/36"));
    CHECK(exact_max_expectation(Params(4, 1), 4) == q("17/8"));
    CHECK(exact_max_expectation(Params(3, 2), 4) == q("32/9"));
    CHECK(exact_max_expectation(Params(3, 2), 2) == 2);
}

TEST_CASE("exact_A") {
    CHECK(exact_A(Params(2, 1), 2) == q("1/2"));
    CHECK(exact_A(Params(3, 3), 7) == 0);
    CHECK(exact_A(Params(2, 1), 0) == 0);
    CHECK(exact_A(Params(5, 2), 0) == 0);
}

TEST_CASE("brute force examples") {
    CHECK(brute_force_max_expectation(Params(2, 1), 2) == q("3/2"));
    CHECK(brute_force_max_expectation(Params(4, 2), 1) == 1);
    CHECK(brute_force_max_expectation(Params(3, 2), 2) == 2);
    CHECK_THROWS_AS(brute_force_max_expectation(Params(4, 2), 10), CapacityError);
    CHECK_THROWS_AS(brute_force_max_expectation(Params(2, 1), 3, 7), CapacityError);
}

TEST_CASE("DP equals brute force on small instances") {
    for (int n = 1; n <= 5; ++n)
        for (int r = 1; r <= n; ++r)
            for (int t = 0; t <= 5; ++t) {
                const Params p(n, r);
                if (t > 3 && n == 5) continue;
                CAPTURE(n);
                CAPTURE(r);
                CAPTURE(t);
                CHECK(exact_max_expectation(p, t) == brute_force_max_expectation(p, t));
            }
}

TEST_CASE("distribution invariants along the trajectory") {
    for (auto [n, r] : {std::pair{2, 1}, {3, 1}, {4, 2}, {5, 2}, {6, 4}, {3, 3}}) {
        const Params p(n, r);
        auto d = initial_distribution(p);
        mpq_class prev_e = 0;
        for (int t = 1; t <= 12; ++t) {
            d = step(d);
            CAPTURE(n);
            CAPTURE(r);
            CAPTURE(t);
            CHECK(d.total_weight() == 1);
            for (std::size_t i = 0; i < d.classes().size(); ++i) {
                const auto& c = d.classes()[i];
                std::uint64_t sum = 0;
                for (std::size_t j = 0; j < c.counts.size(); ++j) {
                    sum += c.counts[j];
                    if (j > 0) CHECK(c.counts[j - 1] >= c.counts[j]);
                }
                CHECK(sum == static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(t));
                CHECK(d.weight(i) > 0);
                CHECK(d.weight(i) <= 1);
                if (i > 0) CHECK(d.classes()[i - 1].counts != c.counts);
            }
            const mpq_class e = d.expected_max();
            CHECK(e >= prev_e);
            CHECK(e >= prev_e + mpq_class(r, n) - 1);
            if (r == n) CHECK(e == t);
            prev_e = e;
        }
    }
}

TEST_CASE("series matches pointwise queries") {
    const Params p(3, 1);
    const std::vector<std::int64_t> grid{0, 1, 4, 9};
    const auto series = exact_max_expectation_series(p, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(series[i] == exact_max_expectation(p, grid[i]));
    CHECK_THROWS_AS(exact_max_expectation_series(p, {3, 3}), ParameterError);
    CHECK_THROWS_AS(exact_max_expectation_series(p, {-1, 2}), ParameterError);
}

TEST_CASE("max pmf sums to one and reproduces the mean") {
    const auto d = distribution_after(Params(4, 1), 6);
    mpq_class total = 0, mean = 0;
    for (const auto& [u, pu] : d.max_pmf()) {
        total += pu;
        mean += pu * u;
    }
    CHECK(total == 1);
    CHECK(mean == d.expected_max());
}

TEST_CASE("capacity cap is a hard error naming the cap") {
    ExactConfig cfg;
    cfg.max_classes = 10;
    try {
        (void)exact_max_expectation(Params(4, 1), 20, cfg);
        FAIL("expected CapacityError");
    } catch (const CapacityError& e) {
        CHECK(std::string(e.what()).find("max_classes=10") != std::string::npos);
    }
}

TEST_CASE("text serialization round-trips") {
    for (auto [n, r, t] : {std::tuple{2, 1, 5}, {4, 2, 4}, {5, 3, 3}}) {
        const Params p(n, r);
        const auto d = distribution_after(p, t);
        std::istringstream in(to_text(d));
        const auto back = parse_distribution(p, t, in);
        CHECK(to_text(back) == to_text(d));
        CHECK(back.expected_max() == d.expected_max());
    }
    std::istringstream bad("1,0 1/2\n");
    CHECK_THROWS_AS(parse_distribution(Params(2, 1), 1, bad), ParameterError);
}

TEST_CASE("golden text for three bins, one ball, three rounds") {
    // 27 equally likely sequences: 3 put every ball in one bin, 6 spread them,
    // the remaining 18 give a (2,1,0) split.
    CHECK(to_text(distribution_after(Params(3, 1), 3)) == "3,0,0\t1/9\n2,1,0\t2/3\n1,1,1\t2/9\n");
}
