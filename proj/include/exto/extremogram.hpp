#pragma once

#include <cstddef>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "exto/errors.hpp"
#include "exto/indicator.hpp"

namespace exto {

/// Estimated extremogram values indexed by lag, with the metadata needed to
/// reproduce the estimate.
struct ExtremogramCurve {
    struct Meta {
        std::string series_x;
        std::string series_y; // equals series_x for univariate curves
        double threshold_x = 0.0;
        double threshold_y = 0.0;
        std::size_t n = 0;
        std::size_t exceed_x = 0;
        std::size_t exceed_y = 0;
        std::size_t max_lag = 0;
        std::size_t min_lag = 0;
    };

    std::vector<std::size_t> lags;
    std::vector<double> values;
    Meta meta;

    double value_at_lag(std::size_t h) const {
        if (h < meta.min_lag || h > meta.max_lag)
            throw data_error("lag " + std::to_string(h) + " outside curve range");
        return values[h - meta.min_lag];
    }
};

namespace detail {

inline ExtremogramCurve curve_from_counts(
    const std::vector<std::size_t>& joint, std::size_t denom,
    ExtremogramCurve::Meta meta) {
    ExtremogramCurve c;
    c.meta = meta;
    c.lags.reserve(joint.size());
    c.values.reserve(joint.size());
    for (std::size_t i = 0; i < joint.size(); ++i) {
        c.lags.push_back(meta.min_lag + i);
        c.values.push_back(static_cast<double>(joint[i]) /
                           static_cast<double>(denom));
    }
    return c;
}

} // namespace detail

/// Empirical univariate extremogram: value(h) is the count of t in [1, n-h]
/// with exceedances at both t and t+h, divided by the total exceedance
/// count over all n. The denominator deliberately stays at n while the
/// numerator window shrinks with h; no boundary renormalization.
inline ExtremogramCurve extremogram(const IndicatorSeries& ind,
                                    std::size_t max_lag,
                                    std::size_t min_lag = 1) {
    if (max_lag >= ind.n())
        throw data_error("max_lag must be smaller than series length");
    if (min_lag > max_lag) throw data_error("min_lag exceeds max_lag");
    if (ind.exceed_count() == 0)
        throw data_error("extremogram undefined: zero exceedances in '" +
                         ind.source_id() + "'");
    std::vector<std::size_t> joint;
    joint.reserve(max_lag - min_lag + 1);
    for (std::size_t h = min_lag; h <= max_lag; ++h)
        joint.push_back(ind.bits().joint_count(ind.bits(), h));
    ExtremogramCurve::Meta meta;
    meta.series_x = meta.series_y = ind.source_id();
    meta.threshold_x = meta.threshold_y = ind.threshold();
    meta.n = ind.n();
    meta.exceed_x = meta.exceed_y = ind.exceed_count();
    meta.max_lag = max_lag;
    meta.min_lag = min_lag;
    return detail::curve_from_counts(joint, ind.exceed_count(), meta);
}

/// Cross-extremogram: conditions on an exceedance in X at t and counts
/// exceedances in Y at t+h. Thresholds need not be equal. Lag 0 reads as
/// contemporaneous co-exceedance.
inline ExtremogramCurve cross_extremogram(const IndicatorSeries& ind_x,
                                          const IndicatorSeries& ind_y,
                                          std::size_t max_lag,
                                          std::size_t min_lag = 0) {
    if (ind_x.n() != ind_y.n())
        throw data_error("cross_extremogram: length mismatch (" +
                         std::to_string(ind_x.n()) + " vs " +
                         std::to_string(ind_y.n()) + ")");
    if (max_lag >= ind_x.n())
        throw data_error("max_lag must be smaller than series length");
    if (min_lag > max_lag) throw data_error("min_lag exceeds max_lag");
    if (ind_x.exceed_count() == 0)
        throw data_error(
            "cross_extremogram undefined: zero exceedances in conditioning "
            "series '" + ind_x.source_id() + "'");
    std::vector<std::size_t> joint;
    joint.reserve(max_lag - min_lag + 1);
    for (std::size_t h = min_lag; h <= max_lag; ++h)
        joint.push_back(ind_x.bits().joint_count(ind_y.bits(), h));
    ExtremogramCurve::Meta meta;
    meta.series_x = ind_x.source_id();
    meta.series_y = ind_y.source_id();
    meta.threshold_x = ind_x.threshold();
    meta.threshold_y = ind_y.threshold();
    meta.n = ind_x.n();
    meta.exceed_x = ind_x.exceed_count();
    meta.exceed_y = ind_y.exceed_count();
    meta.max_lag = max_lag;
    meta.min_lag = min_lag;
    return detail::curve_from_counts(joint, ind_x.exceed_count(), meta);
}

/// Naive O(n*H) double-loop oracle with the identical contract, kept
/// independent of the bit kernel for equivalence testing. Guarded against
/// accidental use on large inputs.
inline ExtremogramCurve extremogram_bruteforce(const IndicatorSeries& ind_x,
                                               const IndicatorSeries& ind_y,
                                               std::size_t max_lag,
                                               std::size_t min_lag = 0) {
    if (ind_x.n() > 10000)
        throw data_error("extremogram_bruteforce: n > 10000");
    if (ind_x.n() != ind_y.n())
        throw data_error("extremogram_bruteforce: length mismatch");
    if (max_lag >= ind_x.n())
        throw data_error("max_lag must be smaller than series length");
    std::size_t denom = 0;
    const std::size_t n = ind_x.n();
    for (std::size_t t = 0; t < n; ++t)
        if (ind_x.bit(t)) ++denom;
    if (denom == 0)
        throw data_error("extremogram_bruteforce: zero exceedances");
    std::vector<std::size_t> joint;
    for (std::size_t h = min_lag; h <= max_lag; ++h) {
        std::size_t c = 0;
        for (std::size_t t = 0; t + h < n; ++t)
            if (ind_x.bit(t) && ind_y.bit(t + h)) ++c;
        joint.push_back(c);
    }
    ExtremogramCurve::Meta meta;
    meta.series_x = ind_x.source_id();
    meta.series_y = ind_y.source_id();
    meta.threshold_x = ind_x.threshold();
    meta.threshold_y = ind_y.threshold();
    meta.n = n;
    meta.exceed_x = denom;
    meta.exceed_y = ind_y.exceed_count();
    meta.max_lag = max_lag;
    meta.min_lag = min_lag;
    return detail::curve_from_counts(joint, denom, meta);
}

inline ExtremogramCurve extremogram_bruteforce(const IndicatorSeries& ind,
                                               std::size_t max_lag,
                                               std::size_t min_lag = 1) {
    return extremogram_bruteforce(ind, ind, max_lag, min_lag);
}

inline nlohmann::json curve_meta_to_json(const ExtremogramCurve::Meta& m) {
    return {{"series_x", m.series_x},
            {"series_y", m.series_y},
            {"threshold_x", m.threshold_x},
            {"threshold_y", m.threshold_y},
            {"n", m.n},
            {"exceed_x", m.exceed_x},
            {"exceed_y", m.exceed_y},
            {"max_lag", m.max_lag},
            {"min_lag", m.min_lag}};
}

inline nlohmann::json curve_to_json(const ExtremogramCurve& c) {
    nlohmann::json j;
    j["meta"] = curve_meta_to_json(c.meta);
    j["lags"] = c.lags;
    j["values"] = c.values;
    return j;
}

inline void curve_to_csv(const ExtremogramCurve& c, std::ostream& out) {
    out << "lag,value,defined\n";
    out.precision(17);
    for (std::size_t i = 0; i < c.lags.size(); ++i)
        out << c.lags[i] << ',' << c.values[i] << ",1\n";
}

inline void curve_to_csv_file(const ExtremogramCurve& c,
                              const std::string& path) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write file: " + path);
    curve_to_csv(c, out);
}

} // namespace exto
