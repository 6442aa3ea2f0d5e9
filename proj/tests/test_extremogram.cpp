#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "exto/extremogram.hpp"
#include "exto/indicator.hpp"
#include "exto/rng.hpp"

using namespace exto;

namespace {

IndicatorSeries from_bits(const std::vector<bool>& bits,
                          const std::string& id = "x") {
    return IndicatorSeries(id, TailSet::absolute_upper(0.0), 0.0,
                           BitVec(bits));
}

IndicatorSeries random_bits(std::size_t n, double density, std::uint64_t seed,
                            const std::string& id = "x") {
    CounterRng rng = CounterRng::substream(seed, 0);
    std::vector<bool> bits(n);
    for (std::size_t i = 0; i < n; ++i)
        bits[i] = rng.next_double() < density;
    return from_bits(bits, id);
}

} // namespace

TEST_CASE("BitVec joint_count matches a manual loop") {
    CounterRng rng = CounterRng::substream(5, 0);
    for (std::size_t n : {1u, 63u, 64u, 65u, 200u, 1000u}) {
        std::vector<bool> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.next_below(3) == 0;
            b[i] = rng.next_below(3) == 0;
        }
        BitVec ba(a), bb(b);
        for (std::size_t h = 0; h < n; h += (n > 50 ? 7 : 1)) {
            std::size_t expect = 0;
            for (std::size_t t = 0; t + h < n; ++t)
                if (a[t] && b[t + h]) ++expect;
            CHECK(ba.joint_count(bb, h) == expect);
        }
    }
}

TEST_CASE("make_indicator strict inequality and tails") {
    const PriceSeries s("s", 0, 1800, {100, 300, 301, -500, 250});
    SECTION("upper strict") {
        const auto ind = make_indicator(s, TailSet::absolute_upper(300));
        CHECK(ind.exceed_count() == 1);
        CHECK(ind.bit(2));
        CHECK_FALSE(ind.bit(1)); // exactly at threshold excluded
    }
    SECTION("lower strict") {
        const auto ind = make_indicator(s, TailSet::absolute_lower(100));
        CHECK(ind.exceed_count() == 1);
        CHECK(ind.bit(3));
    }
    SECTION("threshold above max gives all-false") {
        const auto ind = make_indicator(s, TailSet::absolute_upper(1e12));
        CHECK(ind.exceed_count() == 0);
    }
    SECTION("missing values never exceed") {
        const PriceSeries m("m", 0, 1800, {1000, 1000}, {false, true});
        const auto ind = make_indicator(m, TailSet::absolute_upper(300));
        CHECK(ind.exceed_count() == 1);
    }
    SECTION("quantile tail records resolved threshold") {
        // rank ceil(0.8 * 5) = 4 of sorted {-500, 100, 250, 300, 301}
        const auto ind = make_indicator(s, TailSet::quantile_upper(0.8));
        CHECK(ind.threshold() == 300.0);
        CHECK(ind.exceed_count() == 1);
    }
}

TEST_CASE("alternating bits closed form") {
    const std::size_t n = 101;
    std::vector<bool> bits(n);
    for (std::size_t i = 0; i < n; ++i) bits[i] = (i % 2 == 0);
    const auto ind = from_bits(bits);
    const std::size_t ones = (n + 1) / 2;
    const auto c = extremogram(ind, 2, 1);
    CHECK(c.value_at_lag(1) == 0.0);
    CHECK(c.value_at_lag(2) ==
          Catch::Approx(static_cast<double>(ones - 1) /
                        static_cast<double>(ones)));
}

TEST_CASE("univariate lag 0 is identically 1") {
    const auto ind = random_bits(500, 0.1, 42);
    const auto c = extremogram(ind, 10, 0);
    CHECK(c.value_at_lag(0) == 1.0);
}

TEST_CASE("all-true bits give (n-h)/n") {
    const std::size_t n = 100;
    const auto ind = from_bits(std::vector<bool>(n, true));
    const auto c = extremogram(ind, 10, 1);
    for (std::size_t h = 1; h <= 10; ++h)
        CHECK(c.value_at_lag(h) ==
              Catch::Approx(static_cast<double>(n - h) / n));
}

TEST_CASE("zero exceedances is an error, not silent zeros") {
    const auto ind = from_bits(std::vector<bool>(50, false));
    CHECK_THROWS_AS(extremogram(ind, 5, 1), data_error);
}

TEST_CASE("kernel agrees bit-exactly with brute force") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const double density = 0.001 + 0.5 * (seed / 20.0);
        const auto ind = random_bits(1000, density, seed * 31 + 1);
        if (ind.exceed_count() == 0) continue;
        const auto fast = extremogram(ind, 100, 1);
        const auto slow = extremogram_bruteforce(ind, 100, 1);
        CHECK(fast.values == slow.values);
    }
}

TEST_CASE("curve invariants") {
    const auto ind = random_bits(2000, 0.05, 17);
    const auto c = extremogram(ind, 200, 1);
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        CHECK(c.values[i] >= 0.0);
        CHECK(c.values[i] <= 1.0);
        // numerator recoverability
        const double num =
            c.values[i] * static_cast<double>(ind.exceed_count());
        CHECK(std::abs(num - std::round(num)) < 1e-9);
        if (i > 0) CHECK(c.lags[i] == c.lags[i - 1] + 1);
    }
}

TEST_CASE("raising an upper threshold never increases exceed_count") {
    CounterRng rng = CounterRng::substream(23, 0);
    std::vector<double> v(1000);
    for (auto& x : v) x = rng.next_double() * 1000.0;
    const PriceSeries s("s", 0, 1800, v);
    std::size_t prev = s.size() + 1;
    for (double thr : {100.0, 300.0, 500.0, 900.0, 999.0}) {
        const auto c =
            make_indicator(s, TailSet::absolute_upper(thr)).exceed_count();
        CHECK(c <= prev);
        prev = c;
    }
}

TEST_CASE("self-cross equals univariate exactly") {
    const auto ind = random_bits(3000, 0.02, 3);
    const auto uni = extremogram(ind, 50, 1);
    const auto cross = cross_extremogram(ind, ind, 50, 1);
    CHECK(uni.values == cross.values);
}

TEST_CASE("cross with all-false target is all zeros") {
    const auto x = random_bits(500, 0.1, 9, "x");
    const auto y = from_bits(std::vector<bool>(500, false), "y");
    const auto c = cross_extremogram(x, y, 20, 0);
    for (double v : c.values) CHECK(v == 0.0);
}

TEST_CASE("cross detects a pure 2-step delay") {
    const std::size_t n = 5000;
    auto xs = random_bits(n, 0.05, 77, "x");
    std::vector<bool> ybits(n, false);
    for (std::size_t t = 0; t + 2 < n; ++t)
        if (xs.bit(t)) ybits[t + 2] = true;
    const auto ys = from_bits(ybits, "y");
    const auto c = cross_extremogram(xs, ys, 5, 0);
    // brute-force oracle on the constructed pair
    const auto oracle = extremogram_bruteforce(xs, ys, 5, 0);
    CHECK(c.values == oracle.values);
    CHECK(c.value_at_lag(2) > 0.99);
    CHECK(c.value_at_lag(0) < 0.1);
}

TEST_CASE("cross preconditions") {
    const auto x = random_bits(100, 0.1, 1, "x");
    const auto y = random_bits(99, 0.1, 2, "y");
    CHECK_THROWS_AS(cross_extremogram(x, y, 5, 0), data_error);
    const auto zero = from_bits(std::vector<bool>(100, false));
    CHECK_THROWS_AS(cross_extremogram(zero, x, 5, 0), data_error);
    // all-false target is fine; conditioning side is what matters
    CHECK_NOTHROW(cross_extremogram(x, zero, 5, 0));
}

TEST_CASE("bruteforce size guard") {
    const auto big = from_bits(std::vector<bool>(10001, true));
    CHECK_THROWS_AS(extremogram_bruteforce(big, 5, 1), data_error);
}

TEST_CASE("IID indicator extremogram converges to density") {
    const std::size_t n = 100000;
    const double p = 0.03;
    const auto ind = random_bits(n, p, 1234);
    const double actual_p =
        static_cast<double>(ind.exceed_count()) / static_cast<double>(n);
    const auto c = extremogram(ind, 50, 1);
    double mean = 0.0;
    for (double v : c.values) mean += v;
    mean /= static_cast<double>(c.values.size());
    const double tol =
        3.0 * std::sqrt(p / (static_cast<double>(n) * p));
    CHECK(mean == Catch::Approx(actual_p).margin(tol));
}

TEST_CASE("curve serialization schemas") {
    const auto ind = random_bits(200, 0.2, 8);
    const auto c = extremogram(ind, 5, 1);
    std::ostringstream csv;
    curve_to_csv(c, csv);
    CHECK(csv.str().rfind("lag,value,defined\n", 0) == 0);
    const auto j = curve_to_json(c);
    CHECK(j["meta"]["n"] == 200);
    CHECK(j["lags"].size() == 5);
}
