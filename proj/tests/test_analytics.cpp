#include <catch_amalgamated.hpp>

#include <cmath>

#include "exto/analytics.hpp"
#include "exto/synthetic.hpp"

using namespace exto;

TEST_CASE("spike_run_stats arithmetic") {
    SECTION("six consecutive spikes in one half hour") {
        std::vector<double> v(48, 100.0); // 4 hours of 5-min data
        for (int i = 6; i < 12; ++i) v[i] = 6000.0;
        const PriceSeries s("s", 0, minutes(5), v);
        const auto stats =
            spike_run_stats(s, TailSet::absolute_upper(5000), minutes(30));
        CHECK(stats.spike_count == 6);
        CHECK(stats.agg_intervals == 1);
        CHECK(stats.spikes_per_interval == 6.0);
        CHECK(stats.agg_factor == 6);
    }
    SECTION("15 spikes across 7 half-hour intervals") {
        std::vector<double> v(48 * 6, 100.0); // one day of 5-min data
        // intervals 0..6 get 3,3,3,2,2,1,1 spikes
        const int per_interval[] = {3, 3, 3, 2, 2, 1, 1};
        for (int iv = 0; iv < 7; ++iv)
            for (int j = 0; j < per_interval[iv]; ++j)
                v[iv * 6 + j] = 5500.0;
        const PriceSeries s("s", 0, minutes(5), v);
        const auto stats =
            spike_run_stats(s, TailSet::absolute_upper(5000), minutes(30));
        CHECK(stats.spike_count == 15);
        CHECK(stats.agg_intervals == 7);
        CHECK(stats.spikes_per_interval == Catch::Approx(15.0 / 7.0));
    }
    SECTION("sc equals the indicator's exceed count") {
        ProcessSpec spec;
        spec.kind = ProcessSpec::Kind::markov_regime;
        spec.n = 4320; // divisible by 6
        spec.seed = 9;
        const auto s = generate(spec, 0, minutes(5));
        const auto tail = TailSet::absolute_upper(spec.state_threshold());
        const auto stats = spike_run_stats(s, tail, minutes(30));
        CHECK(stats.spike_count == make_indicator(s, tail).exceed_count());
        CHECK(stats.agg_intervals <= stats.spike_count);
        CHECK(stats.spikes_per_interval >= 1.0);
    }
    SECTION("misaligned agg step errors") {
        const PriceSeries s("s", 0, minutes(5),
                            std::vector<double>(100, 100.0));
        CHECK_THROWS_AS(
            spike_run_stats(s, TailSet::absolute_upper(50), minutes(7)),
            data_error);
    }
    SECTION("no spikes errors") {
        const PriceSeries s("s", 0, minutes(5),
                            std::vector<double>(60, 100.0));
        CHECK_THROWS_AS(
            spike_run_stats(s, TailSet::absolute_upper(5000), minutes(30)),
            data_error);
    }
    SECTION("hh invariant to within-interval reordering") {
        std::vector<double> a(12, 100.0), b(12, 100.0);
        a[0] = 6000.0; a[1] = 6000.0;  // both in interval 0
        b[4] = 6000.0; b[5] = 6000.0;  // same interval, different slots
        const auto sa = spike_run_stats(PriceSeries("a", 0, minutes(5), a),
                                        TailSet::absolute_upper(5000),
                                        minutes(30));
        const auto sb = spike_run_stats(PriceSeries("b", 0, minutes(5), b),
                                        TailSet::absolute_upper(5000),
                                        minutes(30));
        CHECK(sa.agg_intervals == sb.agg_intervals);
    }
}

namespace {

PriceSeries quarter_series(double fill, int year = 2016, int q = 3) {
    const Quarter quarter{year, q};
    const auto n = static_cast<std::size_t>(
        (quarter.end() - quarter.start()) / 1800);
    return PriceSeries("q", quarter.start(), 1800,
                       std::vector<double>(n, fill));
}

} // namespace

TEST_CASE("cap_settlement") {
    SECTION("no price above cap settles to zero") {
        const auto s = quarter_series(100.0);
        const auto r = cap_settlement(s, Quarter{2016, 3});
        CHECK(r.C == 0.0);
        CHECK(r.D == 0);
        CHECK(r.settlement == 0.0);
    }
    SECTION("one 6000 print among 4416 intervals") {
        // Q1 2015: 90 days * 48 = 4320... use a synthetic 92-day quarter:
        // Q3 2016 has 92 days = 4416 half-hour intervals
        auto vals = quarter_series(100.0).values();
        REQUIRE(vals.size() == 4416);
        vals[1000] = 6000.0;
        const Quarter q{2016, 3};
        const PriceSeries s("q", q.start(), 1800, vals);
        const auto r = cap_settlement(s, q);
        CHECK(r.D == 1);
        CHECK(r.E == 4416);
        CHECK(r.settlement == Catch::Approx(5700.0 / 4416.0).epsilon(1e-15));
    }
    SECTION("price exactly at the cap is excluded") {
        auto vals = quarter_series(100.0).values();
        vals[0] = 300.0;
        const Quarter q{2016, 3};
        const PriceSeries s("q", q.start(), 1800, vals);
        const auto r = cap_settlement(s, q);
        CHECK(r.D == 0);
        CHECK(r.settlement == 0.0);
    }
    SECTION("one extra exceedance adds (v - cap)/E exactly") {
        auto vals = quarter_series(100.0).values();
        vals[10] = 1000.0;
        const Quarter q{2016, 3};
        const auto base =
            cap_settlement(PriceSeries("q", q.start(), 1800, vals), q);
        vals[20] = 2000.0;
        const auto more =
            cap_settlement(PriceSeries("q", q.start(), 1800, vals), q);
        CHECK(more.settlement - base.settlement ==
              Catch::Approx((2000.0 - 300.0) / 4416.0).epsilon(1e-12));
    }
    SECTION("missing values count toward E only") {
        auto vals = quarter_series(100.0).values();
        vals[5] = 9000.0;
        std::vector<bool> missing(vals.size(), false);
        missing[5] = true; // the spike is a gap; must not enter C or D
        const Quarter q{2016, 3};
        const PriceSeries s("q", q.start(), 1800, vals, missing);
        const auto r = cap_settlement(s, q);
        CHECK(r.D == 0);
        CHECK(r.E == 4416);
    }
    SECTION("quarter not covered errors") {
        const auto s = quarter_series(100.0, 2016, 3);
        CHECK_THROWS_AS(cap_settlement(s, Quarter{2016, 4}), data_error);
    }
}

TEST_CASE("descriptive_stats") {
    SECTION("hand arithmetic on [1,2,3,4]") {
        const PriceSeries s("s", 0, 1800, {1, 2, 3, 4});
        const auto d = descriptive_stats(s);
        CHECK(d.mean == 2.5);
        CHECK(d.median == 2.0); // nearest rank
        CHECK(d.min == 1.0);
        CHECK(d.max == 4.0);
        CHECK(d.std_dev == Catch::Approx(std::sqrt(5.0 / 3.0)));
    }
    SECTION("constant series flags undefined shape") {
        const PriceSeries s("s", 0, 1800, std::vector<double>(10, 7.0));
        const auto d = descriptive_stats(s);
        CHECK(d.std_dev == 0.0);
        CHECK_FALSE(d.shape_defined);
    }
    SECTION("spike rows at default thresholds") {
        std::vector<double> v(1000, 50.0);
        v[0] = 200.0;
        v[1] = 400.0;
        v[2] = 6000.0;
        const PriceSeries s("s", 0, 1800, v);
        const auto d = descriptive_stats(s);
        REQUIRE(d.spikes.size() == 3);
        CHECK(d.spikes[0].threshold == 150.0);
        CHECK(d.spikes[0].count == 3);
        CHECK(d.spikes[1].count == 2); // > 300
        CHECK(d.spikes[2].count == 1); // > 5000
        CHECK(d.spikes[2].percentage == Catch::Approx(0.1));
    }
    SECTION("insufficient data errors") {
        const PriceSeries s("s", 0, 1800, {1.0, 2.0}, {false, true});
        CHECK_THROWS_AS(descriptive_stats(s), data_error);
    }
    SECTION("kurtosis reported raw and excess") {
        CounterRng rng = CounterRng::substream(2, 0);
        std::vector<double> v(5000);
        for (auto& x : v) x = rng.next_double();
        const auto d = descriptive_stats(PriceSeries("s", 0, 1800, v));
        CHECK(d.kurtosis_excess == Catch::Approx(d.kurtosis_raw - 3.0));
        // uniform distribution: excess kurtosis -1.2
        CHECK(d.kurtosis_excess == Catch::Approx(-1.2).margin(0.1));
    }
}

TEST_CASE("event_window_compare") {
    PermutationConfig quick;
    quick.replicates = 200;
    quick.alpha = 0.01;
    quick.threads = 1;

    SECTION("regime change raises post-window persistence") {
        // p_stay 0.3 before the event, 0.9 after
        ProcessSpec pre_spec, post_spec;
        pre_spec.kind = post_spec.kind = ProcessSpec::Kind::markov_regime;
        pre_spec.p_stay = 0.3;
        post_spec.p_stay = 0.9;
        pre_spec.p_enter = post_spec.p_enter = 0.02;
        pre_spec.n = post_spec.n = 48 * 365;
        pre_spec.seed = 100;
        post_spec.seed = 101;
        const auto pre = generate(pre_spec, 0, 1800);
        const auto post = generate(post_spec, 0, 1800);
        std::vector<double> vals = pre.values();
        vals.insert(vals.end(), post.values().begin(), post.values().end());
        const PriceSeries joined("j", 0, 1800, vals);
        const Timestamp event = joined.time_at(pre_spec.n);

        EventAnalysisConfig cfg;
        cfg.threshold = TailSet::absolute_upper(pre_spec.state_threshold());
        cfg.max_lag = 30;
        cfg.permutation = quick;
        cfg.spike_agg_step = hours(3);
        const auto cmp = event_window_compare(joined, event,
                                              1800LL * pre_spec.n, cfg);
        REQUIRE(cmp.both_defined);
        CHECK(cmp.lag1_post > cmp.lag1_pre);
        CHECK(cmp.post.first_insignificant_lag >
              cmp.pre.first_insignificant_lag);
        CHECK(cmp.pre.run_stats.has_value());
    }
    SECTION("window outside series errors") {
        const PriceSeries s("s", 0, 1800, std::vector<double>(100, 1.0));
        EventAnalysisConfig cfg;
        cfg.permutation = quick;
        CHECK_THROWS_AS(
            event_window_compare(s, s.time_at(10), 1800 * 50, cfg),
            data_error);
    }
    SECTION("spike-free window reported, not fatal") {
        std::vector<double> v(2000, 10.0);
        for (std::size_t i = 1200; i < 1400; i += 10) v[i] = 1000.0;
        const PriceSeries s("s", 0, 1800, v);
        EventAnalysisConfig cfg;
        cfg.threshold = TailSet::absolute_upper(300);
        cfg.max_lag = 20;
        cfg.permutation = quick;
        const auto cmp =
            event_window_compare(s, s.time_at(1000), 1800 * 1000, cfg);
        CHECK_FALSE(cmp.pre.curve.has_value());
        CHECK(cmp.post.curve.has_value());
        CHECK_FALSE(cmp.both_defined);
        CHECK(cmp.pre.exceed_count == 0);
    }
}
