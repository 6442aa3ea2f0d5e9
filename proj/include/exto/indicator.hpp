#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "exto/bitvec.hpp"
#include "exto/series.hpp"

namespace exto {

/// Exceedance indicator sequence for one series under one resolved tail
/// set. The concrete threshold price is recorded so results reproduce
/// without re-deriving quantiles. Missing observations are "not in the
/// tail" for both numerator and denominator purposes.
class IndicatorSeries {
public:
    IndicatorSeries(std::string source_id, TailSet tailset,
                    double resolved_threshold, BitVec bits)
        : source_id_(std::move(source_id)),
          tailset_(tailset),
          threshold_(resolved_threshold),
          bits_(std::move(bits)),
          exceed_count_(bits_.count()) {}

    const std::string& source_id() const noexcept { return source_id_; }
    const TailSet& tailset() const noexcept { return tailset_; }
    double threshold() const noexcept { return threshold_; }
    const BitVec& bits() const noexcept { return bits_; }
    std::size_t n() const noexcept { return bits_.size(); }
    std::size_t exceed_count() const noexcept { return exceed_count_; }

    bool bit(std::size_t i) const { return bits_.test(i); }

    /// Indices of set bits, ascending.
    std::vector<std::uint32_t> positions() const {
        std::vector<std::uint32_t> out;
        out.reserve(exceed_count_);
        for (std::size_t i = 0; i < n(); ++i)
            if (bits_.test(i)) out.push_back(static_cast<std::uint32_t>(i));
        return out;
    }

private:
    std::string source_id_;
    TailSet tailset_;
    double threshold_;
    BitVec bits_;
    std::size_t exceed_count_;
};

/// Bit t is set iff the non-missing value at t lies strictly beyond the
/// resolved threshold (upper: value > u, lower: value < l).
inline IndicatorSeries make_indicator(const PriceSeries& series,
                                      const TailSet& tailset) {
    const double thr = resolve_threshold(series, tailset);
    BitVec bits(series.size());
    const bool upper = tailset.is_upper();
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series.is_missing(i)) continue;
        const double v = series.value(i);
        if (upper ? (v > thr) : (v < thr)) bits.set(i);
    }
    return IndicatorSeries(series.id(), tailset, thr, std::move(bits));
}

} // namespace exto
