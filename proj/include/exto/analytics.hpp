#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "exto/errors.hpp"
#include "exto/extremogram.hpp"
#include "exto/indicator.hpp"
#include "exto/permutation.hpp"
#include "exto/series.hpp"
#include "exto/time.hpp"

namespace exto {

/// Spike clustering summary over coarse aggregation intervals: total
/// fine-step spikes, spiky intervals, and the mean spikes per spiky
/// interval. Low ratios mean isolated spikes.
struct SpikeRunStats {
    std::size_t spike_count = 0;   // sc
    std::size_t agg_intervals = 0; // hh: aggregation intervals with >= 1 spike
    double spikes_per_interval = 0.0;
    std::size_t agg_factor = 1; // fine steps per aggregation interval
};

inline SpikeRunStats spike_run_stats(const PriceSeries& series,
                                     const TailSet& threshold,
                                     Duration agg_step) {
    if (agg_step <= 0 || agg_step % series.step() != 0)
        throw data_error(
            "spike_run_stats: agg_step must be a positive multiple of the "
            "series step");
    if (series.start() % agg_step != 0)
        throw data_error(
            "spike_run_stats: window start not aligned to clock aggregation "
            "boundaries");
    const auto factor =
        static_cast<std::size_t>(agg_step / series.step());
    const IndicatorSeries ind = make_indicator(series, threshold);
    SpikeRunStats out;
    out.agg_factor = factor;
    out.spike_count = ind.exceed_count();
    for (std::size_t i0 = 0; i0 < ind.n(); i0 += factor) {
        const std::size_t i1 = std::min(i0 + factor, ind.n());
        for (std::size_t i = i0; i < i1; ++i) {
            if (ind.bit(i)) {
                ++out.agg_intervals;
                break;
            }
        }
    }
    if (out.agg_intervals == 0)
        throw data_error("spike_run_stats: no spikes in window");
    out.spikes_per_interval = static_cast<double>(out.spike_count) /
                              static_cast<double>(out.agg_intervals);
    return out;
}

/// Quarterly cap-product settlement: C is the sum of spot prices strictly
/// above the cap, D their count, E the total half-hourly intervals in the
/// quarter. Settlement is (C - cap*D)/E. Missing values count toward E but
/// contribute nothing to C or D; E is contract-fixed by the grid.
struct CapSettlement {
    double cap_level = 300.0;
    double C = 0.0;
    std::size_t D = 0;
    std::size_t E = 0;
    double settlement = 0.0;
};

inline CapSettlement cap_settlement(const PriceSeries& series,
                                    const Quarter& quarter,
                                    double cap_level = 300.0) {
    const Timestamp q0 = quarter.start();
    const Timestamp q1 = quarter.end();
    if (q0 < series.start() || q1 > series.end())
        throw data_error("cap_settlement: series does not cover quarter " +
                         std::to_string(quarter.year) + "Q" +
                         std::to_string(quarter.index));
    const PriceSeries q = slice_window(series, q0, q1);
    CapSettlement out;
    out.cap_level = cap_level;
    out.E = q.size();
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q.is_missing(i)) continue;
        const double v = q.value(i);
        if (v > cap_level) {
            out.C += v;
            ++out.D;
        }
    }
    out.settlement = (out.C - cap_level * static_cast<double>(out.D)) /
                     static_cast<double>(out.E);
    return out;
}

/// Moment summary plus spike counts at a set of thresholds. Skewness and
/// kurtosis are conventional moment ratios; kurtosis is reported both raw
/// and excess since reference tables rarely say which they use.
struct DescriptiveStats {
    std::size_t n_effective = 0;
    double mean = 0.0;
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;
    double std_dev = 0.0;
    bool shape_defined = false; // false for (near-)constant series
    double skewness = 0.0;
    double kurtosis_raw = 0.0;
    double kurtosis_excess = 0.0;
    struct SpikeRow {
        double threshold;
        std::size_t count;
        double percentage;
    };
    std::vector<SpikeRow> spikes;
};

inline DescriptiveStats descriptive_stats(
    const PriceSeries& series,
    const std::vector<double>& spike_thresholds = {150.0, 300.0, 5000.0}) {
    const auto v = series.non_missing_values();
    if (v.size() < 2)
        throw data_error("descriptive_stats: need >= 2 non-missing values");
    DescriptiveStats out;
    out.n_effective = v.size();
    const double n = static_cast<double>(v.size());
    double sum = 0.0;
    out.min = v.front();
    out.max = v.front();
    for (double x : v) {
        sum += x;
        out.min = std::min(out.min, x);
        out.max = std::max(out.max, x);
    }
    out.mean = sum / n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : v) {
        const double d = x - out.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    out.std_dev = std::sqrt(m2 * n / (n - 1.0));
    if (m2 > 0.0) {
        out.shape_defined = true;
        out.skewness = m3 / std::pow(m2, 1.5);
        out.kurtosis_raw = m4 / (m2 * m2);
        out.kurtosis_excess = out.kurtosis_raw - 3.0;
    }
    out.median = empirical_quantile(series, 0.5);
    for (double thr : spike_thresholds) {
        const auto ind = make_indicator(series, TailSet::absolute_upper(thr));
        out.spikes.push_back(
            {thr, ind.exceed_count(),
             100.0 * static_cast<double>(ind.exceed_count()) / n});
    }
    return out;
}

inline nlohmann::json descriptive_stats_to_json(const DescriptiveStats& s) {
    nlohmann::json spikes = nlohmann::json::array();
    for (const auto& row : s.spikes)
        spikes.push_back({{"threshold", row.threshold},
                          {"count", row.count},
                          {"percentage", row.percentage}});
    nlohmann::json j = {{"n_effective", s.n_effective},
                        {"mean", s.mean},
                        {"median", s.median},
                        {"min", s.min},
                        {"max", s.max},
                        {"std_dev", s.std_dev},
                        {"shape_defined", s.shape_defined},
                        {"spikes", spikes}};
    if (s.shape_defined) {
        j["skewness"] = s.skewness;
        j["kurtosis_raw"] = s.kurtosis_raw;
        j["kurtosis_excess"] = s.kurtosis_excess;
    }
    return j;
}

/// Analysis recipe shared by the two sides of an event comparison.
struct EventAnalysisConfig {
    TailSet threshold = TailSet::absolute_upper(300.0);
    std::size_t max_lag = 100;
    std::size_t min_lag = 1;
    PermutationConfig permutation;
    std::optional<Duration> spike_agg_step; // enables SpikeRunStats when set
};

/// One side of an event-window comparison.
struct WindowAnalysis {
    Timestamp window_start = 0;
    Timestamp window_end = 0;
    std::size_t exceed_count = 0;
    std::optional<ExtremogramCurve> curve; // absent when the window has no spikes
    std::optional<PermutationBands> bands;
    std::optional<SignificanceReport> significance;
    std::optional<SpikeRunStats> run_stats;
    std::size_t first_insignificant_lag = 0;
};

struct EventComparison {
    WindowAnalysis pre;
    WindowAnalysis post;
    bool both_defined = false;
    // rho(min_lag) difference and persistence shift, defined when both
    // windows have spikes
    double lag1_pre = 0.0;
    double lag1_post = 0.0;
};

namespace analyticsdetail {

inline WindowAnalysis analyze_window(const PriceSeries& window,
                                     const EventAnalysisConfig& cfg,
                                     std::uint64_t seed_offset) {
    WindowAnalysis out;
    out.window_start = window.start();
    out.window_end = window.end();
    const IndicatorSeries ind = make_indicator(window, cfg.threshold);
    out.exceed_count = ind.exceed_count();
    if (ind.exceed_count() == 0) return out; // reported, not fatal
    out.curve = extremogram(ind, cfg.max_lag, cfg.min_lag);
    PermutationConfig pcfg = cfg.permutation;
    pcfg.mode = PermutationMode::univariate;
    pcfg.seed += seed_offset;
    out.bands = permutation_bands(ind, cfg.max_lag, cfg.min_lag, pcfg);
    out.significance = significance_report(*out.curve, *out.bands);
    out.first_insignificant_lag = out.significance->first_insignificant_lag();
    if (cfg.spike_agg_step) {
        try {
            out.run_stats =
                spike_run_stats(window, cfg.threshold, *cfg.spike_agg_step);
        } catch (const data_error&) {
            // no spikes at the aggregation threshold; stats stay unavailable
        }
    }
    return out;
}

} // namespace analyticsdetail

/// Runs identical analyses on [event - window_len, event) and
/// [event, event + window_len) and pairs the results.
inline EventComparison event_window_compare(const PriceSeries& series,
                                            Timestamp event_time,
                                            Duration window_len,
                                            const EventAnalysisConfig& cfg) {
    if (window_len < series.step())
        throw data_error("event window shorter than one step");
    const Timestamp pre0 = event_time - window_len;
    const Timestamp post1 = event_time + window_len;
    if (pre0 < series.start() || post1 > series.end())
        throw data_error(
            "event window does not fit inside the series range on both "
            "sides of " + format_timestamp(event_time));
    EventComparison out;
    out.pre = analyticsdetail::analyze_window(
        slice_window(series, pre0, event_time), cfg, 1);
    out.post = analyticsdetail::analyze_window(
        slice_window(series, event_time, post1), cfg, 2);
    out.both_defined = out.pre.curve && out.post.curve;
    if (out.both_defined) {
        out.lag1_pre = out.pre.curve->values.front();
        out.lag1_post = out.post.curve->values.front();
    }
    return out;
}

inline nlohmann::json window_analysis_to_json(const WindowAnalysis& w) {
    nlohmann::json j = {{"window_start", format_timestamp(w.window_start)},
                        {"window_end", format_timestamp(w.window_end)},
                        {"exceed_count", w.exceed_count},
                        {"defined", static_cast<bool>(w.curve)}};
    if (w.curve) {
        j["curve"] = curve_to_json(*w.curve);
        j["bands"] = bands_to_json(*w.bands);
        j["first_insignificant_lag"] = w.first_insignificant_lag;
    }
    if (w.run_stats) {
        j["spike_run_stats"] = {
            {"spike_count", w.run_stats->spike_count},
            {"agg_intervals", w.run_stats->agg_intervals},
            {"spikes_per_interval", w.run_stats->spikes_per_interval},
            {"agg_factor", w.run_stats->agg_factor}};
    }
    return j;
}

} // namespace exto
