#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "exto/errors.hpp"
#include "exto/time.hpp"

namespace exto {

/// A regularly-sampled price series. Timestamps are implied by
/// (start, step, index); gaps in the source data become missing entries,
/// never index gaps. Immutable after construction.
class PriceSeries {
public:
    PriceSeries(std::string id, Timestamp start, Duration step,
                std::vector<double> values, std::vector<bool> missing)
        : id_(std::move(id)),
          start_(start),
          step_(step),
          values_(std::move(values)),
          missing_(std::move(missing)) {
        if (step_ <= 0) throw data_error("series step must be positive");
        if (values_.empty()) throw data_error("series must be non-empty");
        if (missing_.empty()) missing_.assign(values_.size(), false);
        if (missing_.size() != values_.size())
            throw data_error("missing mask length mismatch");
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!missing_[i] && !std::isfinite(values_[i]))
                throw data_error("non-finite value at index " +
                                 std::to_string(i));
        }
    }

    PriceSeries(std::string id, Timestamp start, Duration step,
                std::vector<double> values)
        : PriceSeries(std::move(id), start, step, std::move(values),
                      {}) {}

    const std::string& id() const noexcept { return id_; }
    Timestamp start() const noexcept { return start_; }
    Duration step() const noexcept { return step_; }
    std::size_t size() const noexcept { return values_.size(); }
    double value(std::size_t i) const { return values_[i]; }
    bool is_missing(std::size_t i) const { return missing_[i]; }
    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<bool>& missing_mask() const noexcept { return missing_; }

    Timestamp time_at(std::size_t i) const {
        return start_ + static_cast<Timestamp>(i) * step_;
    }
    Timestamp end() const { return time_at(size()); }

    std::size_t missing_count() const {
        return static_cast<std::size_t>(
            std::count(missing_.begin(), missing_.end(), true));
    }

    std::vector<double> non_missing_values() const {
        std::vector<double> out;
        out.reserve(values_.size());
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (!missing_[i]) out.push_back(values_[i]);
        return out;
    }

private:
    std::string id_;
    Timestamp start_;
    Duration step_;
    std::vector<double> values_;
    std::vector<bool> missing_;
};

/// Threshold specification realizing the tail sets: an absolute price level
/// or an empirical quantile, upper or lower tail. Exceedance is strict
/// (value > u for upper, value < l for lower).
struct TailSet {
    enum class Kind { absolute_upper, absolute_lower, quantile_upper, quantile_lower };

    Kind kind;
    double level = 0.0; // price level for absolute kinds
    double q = 0.0;     // probability for quantile kinds

    static TailSet absolute_upper(double u) {
        return {Kind::absolute_upper, u, 0.0};
    }
    static TailSet absolute_lower(double l) {
        return {Kind::absolute_lower, l, 0.0};
    }
    static TailSet quantile_upper(double q) {
        check_q(q);
        return {Kind::quantile_upper, 0.0, q};
    }
    static TailSet quantile_lower(double q) {
        check_q(q);
        return {Kind::quantile_lower, 0.0, q};
    }

    bool is_upper() const {
        return kind == Kind::absolute_upper || kind == Kind::quantile_upper;
    }
    bool is_quantile() const {
        return kind == Kind::quantile_upper || kind == Kind::quantile_lower;
    }

private:
    static void check_q(double q) {
        if (!(q > 0.0 && q < 1.0))
            throw data_error("quantile tail set requires 0 < q < 1");
    }
};

/// Nearest-rank empirical quantile over non-missing values: the value at
/// rank ceil(q * n_eff), so the result is always an observed value.
inline double empirical_quantile(const PriceSeries& series, double q) {
    if (!(q > 0.0 && q < 1.0))
        throw data_error("quantile probability must be in (0, 1)");
    std::vector<double> v = series.non_missing_values();
    if (v.empty()) throw data_error("quantile of all-missing series");
    const auto n = v.size();
    auto rank = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(n)));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    std::nth_element(v.begin(), v.begin() + (rank - 1), v.end());
    return v[rank - 1];
}

/// Resolves a TailSet to a concrete threshold price on a series.
inline double resolve_threshold(const PriceSeries& series, const TailSet& ts) {
    switch (ts.kind) {
        case TailSet::Kind::absolute_upper:
        case TailSet::Kind::absolute_lower:
            return ts.level;
        case TailSet::Kind::quantile_upper:
            return empirical_quantile(series, ts.q);
        case TailSet::Kind::quantile_lower:
            return empirical_quantile(series, ts.q);
    }
    throw data_error("unknown tail set kind");
}

/// Contiguous sub-series covering [from, to). Both endpoints must lie on
/// grid boundaries within the series range.
inline PriceSeries slice_window(const PriceSeries& s, Timestamp from,
                                Timestamp to) {
    if (from >= to) throw data_error("slice window must satisfy from < to");
    if ((from - s.start()) % s.step() != 0 || (to - s.start()) % s.step() != 0)
        throw data_error("slice window endpoints must lie on the series grid");
    if (from < s.start() || to > s.end())
        throw data_error("slice window [" + format_timestamp(from) + ", " +
                         format_timestamp(to) + ") outside series range [" +
                         format_timestamp(s.start()) + ", " +
                         format_timestamp(s.end()) + ")");
    const auto i0 = static_cast<std::size_t>((from - s.start()) / s.step());
    const auto i1 = static_cast<std::size_t>((to - s.start()) / s.step());
    std::vector<double> vals(s.values().begin() + i0, s.values().begin() + i1);
    std::vector<bool> miss(s.missing_mask().begin() + i0,
                           s.missing_mask().begin() + i1);
    return PriceSeries(s.id(), from, s.step(), std::move(vals),
                       std::move(miss));
}

/// A set of index-aligned series sharing (start, step, length); holds the
/// bivariate and regional panels. Indices where any member is missing are
/// panel-missing.
class SeriesPanel {
public:
    explicit SeriesPanel(std::vector<PriceSeries> members)
        : members_(std::move(members)) {
        if (members_.empty()) throw data_error("panel must be non-empty");
        for (const auto& m : members_) {
            if (m.step() != members_.front().step() ||
                m.start() != members_.front().start() ||
                m.size() != members_.front().size())
                throw data_error("panel members must be index-aligned");
        }
        panel_missing_.assign(members_.front().size(), false);
        for (const auto& m : members_)
            for (std::size_t i = 0; i < panel_missing_.size(); ++i)
                if (m.is_missing(i)) panel_missing_[i] = true;
    }

    std::size_t size() const { return members_.front().size(); }
    std::size_t member_count() const { return members_.size(); }
    const PriceSeries& member(std::size_t i) const { return members_.at(i); }
    const PriceSeries* find(const std::string& id) const {
        for (const auto& m : members_)
            if (m.id() == id) return &m;
        return nullptr;
    }
    const std::vector<bool>& panel_missing() const { return panel_missing_; }

private:
    std::vector<PriceSeries> members_;
    std::vector<bool> panel_missing_;
};

/// Trims a collection of same-step series to their common overlapping index
/// range and builds a panel.
inline SeriesPanel align_panel(const std::vector<PriceSeries>& series_list) {
    if (series_list.empty()) throw data_error("align_panel: empty input");
    const Duration step = series_list.front().step();
    Timestamp lo = series_list.front().start();
    Timestamp hi = series_list.front().end();
    for (const auto& s : series_list) {
        if (s.step() != step)
            throw data_error("align_panel: mismatched steps");
        if ((s.start() - series_list.front().start()) % step != 0)
            throw data_error("align_panel: series grids are offset");
        lo = std::max(lo, s.start());
        hi = std::min(hi, s.end());
    }
    if (lo >= hi) throw data_error("align_panel: empty overlap");
    std::vector<PriceSeries> trimmed;
    trimmed.reserve(series_list.size());
    for (const auto& s : series_list)
        trimmed.push_back(slice_window(s, lo, hi));
    return SeriesPanel(std::move(trimmed));
}

} // namespace exto
