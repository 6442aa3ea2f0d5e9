#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "exto/errors.hpp"
#include "exto/extremogram.hpp"
#include "exto/indicator.hpp"
#include "exto/rng.hpp"

namespace exto {

enum class PermutationMode { univariate, cross_joint, cross_independent };
enum class BandConvention { per_lag, lag1_flat };

/// Resampling configuration; identical config + inputs give identical
/// bands, bit for bit, independent of thread count.
struct PermutationConfig {
    std::size_t replicates = 1000;
    double alpha = 0.01;
    std::uint64_t seed = 0;
    PermutationMode mode = PermutationMode::univariate;
    BandConvention band_convention = BandConvention::lag1_flat;
    unsigned threads = 0; // 0 = hardware concurrency

    void validate() const {
        if (replicates < 100)
            throw config_error("permutation.replicates", "must be >= 100");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw config_error("permutation.alpha", "must be in (0, 1)");
    }
};

/// Empirical confidence bounds from the permutation distribution: per-lag
/// (alpha/2, 1-alpha/2) nearest-rank quantiles, plus the flat bounds read
/// off at lag 1.
struct PermutationBands {
    std::vector<std::size_t> lags;
    std::vector<double> lower;
    std::vector<double> upper;
    double flat_lower = 0.0;
    double flat_upper = 0.0;
    PermutationConfig config;

    double upper_at_lag(std::size_t h) const {
        return upper.at(index_of(h));
    }
    double lower_at_lag(std::size_t h) const {
        return lower.at(index_of(h));
    }

private:
    std::size_t index_of(std::size_t h) const {
        if (lags.empty() || h < lags.front() || h > lags.back())
            throw data_error("lag outside band range");
        return h - lags.front();
    }
};

/// Uniformly random permutation of bit positions (Fisher-Yates); the
/// exceedance count is preserved exactly.
inline IndicatorSeries permute_series(const IndicatorSeries& ind,
                                      CounterRng& rng) {
    std::vector<bool> bits = ind.bits().to_bools();
    for (std::size_t i = bits.size() - 1; i > 0; --i) {
        const std::size_t j = rng.next_below(i + 1);
        const bool tmp = bits[i];
        bits[i] = bits[j];
        bits[j] = tmp;
    }
    return IndicatorSeries(ind.source_id(), ind.tailset(), ind.threshold(),
                           BitVec(bits));
}

namespace permdetail {

// Uniform k-subset of [0, n) by Floyd's algorithm, returned sorted.
inline std::vector<std::uint32_t> sample_subset(std::size_t n, std::size_t k,
                                                CounterRng& rng) {
    std::unordered_set<std::uint32_t> chosen;
    chosen.reserve(k * 2);
    for (std::size_t j = n - k; j < n; ++j) {
        const auto t = static_cast<std::uint32_t>(rng.next_below(j + 1));
        if (!chosen.insert(t).second)
            chosen.insert(static_cast<std::uint32_t>(j));
    }
    std::vector<std::uint32_t> out(chosen.begin(), chosen.end());
    std::sort(out.begin(), out.end());
    return out;
}

// Uniform ordered arrangement of m distinct positions from [0, n).
inline std::vector<std::uint32_t> sample_arrangement(std::size_t n,
                                                     std::size_t m,
                                                     CounterRng& rng) {
    std::vector<std::uint32_t> out = sample_subset(n, m, rng);
    for (std::size_t i = m; i > 1; --i)
        std::swap(out[i - 1], out[rng.next_below(i)]);
    return out;
}

// Per-lag joint counts for sorted exceedance positions of one series:
// counts[d - min_lag] = number of position pairs at distance d.
inline void pair_counts_self(const std::vector<std::uint32_t>& pos,
                             std::size_t min_lag, std::size_t max_lag,
                             std::vector<std::size_t>& counts) {
    std::fill(counts.begin(), counts.end(), 0);
    if (min_lag == 0) counts[0] = pos.size();
    for (std::size_t i = 0; i < pos.size(); ++i) {
        for (std::size_t j = i + 1; j < pos.size(); ++j) {
            const std::size_t d = pos[j] - pos[i];
            if (d > max_lag) break;
            if (d >= min_lag) ++counts[d - min_lag];
        }
    }
}

// Cross pair counts: for every x position p, count y positions in
// [p + min_lag, p + max_lag] with a sliding window.
inline void pair_counts_cross(const std::vector<std::uint32_t>& px,
                              const std::vector<std::uint32_t>& py,
                              std::size_t min_lag, std::size_t max_lag,
                              std::vector<std::size_t>& counts) {
    std::fill(counts.begin(), counts.end(), 0);
    std::size_t lo = 0, hi = 0;
    for (const auto p : px) {
        while (lo < py.size() && py[lo] < p + min_lag) ++lo;
        if (hi < lo) hi = lo;
        while (hi < py.size() && py[hi] <= p + max_lag) ++hi;
        for (std::size_t j = lo; j < hi; ++j)
            ++counts[py[j] - p - min_lag];
    }
}

struct PairInputs {
    std::size_t n = 0;
    std::size_t k_x = 0; // conditioning exceedances (the denominator)
    // cross modes: category counts of the contemporaneous pair sequence
    std::size_t c_both = 0;
    std::size_t c_xonly = 0;
    std::size_t c_yonly = 0;
};

// One permutation replicate: fills counts with per-lag joint counts of the
// permuted indicator(s). Pure function of (inputs, rng substream).
inline void replicate_counts(const PairInputs& in, PermutationMode mode,
                             std::size_t min_lag, std::size_t max_lag,
                             CounterRng& rng,
                             std::vector<std::size_t>& counts,
                             std::vector<std::uint32_t>& scratch_x,
                             std::vector<std::uint32_t>& scratch_y) {
    switch (mode) {
        case PermutationMode::univariate: {
            scratch_x = sample_subset(in.n, in.k_x, rng);
            pair_counts_self(scratch_x, min_lag, max_lag, counts);
            return;
        }
        case PermutationMode::cross_independent: {
            scratch_x = sample_subset(in.n, in.c_both + in.c_xonly, rng);
            scratch_y = sample_subset(in.n, in.c_both + in.c_yonly, rng);
            pair_counts_cross(scratch_x, scratch_y, min_lag, max_lag, counts);
            return;
        }
        case PermutationMode::cross_joint: {
            // One permutation applied to both series: permute the multiset
            // of contemporaneous pair categories. Assign a uniformly random
            // arrangement of distinct positions to the non-null categories
            // in blocks.
            const std::size_t m = in.c_both + in.c_xonly + in.c_yonly;
            const auto arr = sample_arrangement(in.n, m, rng);
            scratch_x.assign(arr.begin(), arr.begin() + in.c_both + in.c_xonly);
            scratch_y.assign(arr.begin(), arr.begin() + in.c_both);
            scratch_y.insert(scratch_y.end(),
                             arr.begin() + in.c_both + in.c_xonly, arr.end());
            std::sort(scratch_x.begin(), scratch_x.end());
            std::sort(scratch_y.begin(), scratch_y.end());
            pair_counts_cross(scratch_x, scratch_y, min_lag, max_lag, counts);
            return;
        }
    }
}

inline double nearest_rank(std::vector<double>& v, double p) {
    const auto n = v.size();
    auto rank = static_cast<std::size_t>(
        std::ceil(p * static_cast<double>(n)));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    std::nth_element(v.begin(), v.begin() + (rank - 1), v.end());
    return v[rank - 1];
}

inline PermutationBands bands_from_samples(
    std::vector<std::vector<double>>& samples, std::size_t min_lag,
    std::size_t max_lag, const PermutationConfig& cfg) {
    PermutationBands bands;
    bands.config = cfg;
    const std::size_t nlags = max_lag - min_lag + 1;
    bands.lags.resize(nlags);
    bands.lower.resize(nlags);
    bands.upper.resize(nlags);
    for (std::size_t i = 0; i < nlags; ++i) {
        bands.lags[i] = min_lag + i;
        bands.lower[i] = nearest_rank(samples[i], cfg.alpha / 2.0);
        bands.upper[i] = nearest_rank(samples[i], 1.0 - cfg.alpha / 2.0);
    }
    // Flat bounds per the lag-1 convention; fall back to the first lag when
    // the range starts above 1.
    const std::size_t flat_lag =
        (min_lag <= 1 && max_lag >= 1) ? 1 : min_lag;
    bands.flat_lower = bands.lower[flat_lag - min_lag];
    bands.flat_upper = bands.upper[flat_lag - min_lag];
    return bands;
}

inline PermutationBands run_bands(const PairInputs& in, std::size_t min_lag,
                                  std::size_t max_lag,
                                  const PermutationConfig& cfg) {
    cfg.validate();
    if (max_lag >= in.n)
        throw data_error("max_lag must be smaller than series length");
    if (in.k_x == 0)
        throw data_error(
            "permutation bands undefined: zero exceedances in conditioning "
            "series");
    const std::size_t nlags = max_lag - min_lag + 1;
    const double denom = static_cast<double>(in.k_x);
    // samples[lag][replicate]
    std::vector<std::vector<double>> samples(
        nlags, std::vector<double>(cfg.replicates));

    unsigned nthreads = cfg.threads ? cfg.threads
                                    : std::thread::hardware_concurrency();
    if (nthreads == 0) nthreads = 1;
    nthreads = static_cast<unsigned>(
        std::min<std::size_t>(nthreads, cfg.replicates));

    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&](unsigned tid) {
        std::vector<std::size_t> counts(nlags);
        std::vector<std::uint32_t> sx, sy;
        try {
            for (std::size_t r = tid; r < cfg.replicates; r += nthreads) {
                CounterRng rng = CounterRng::substream(cfg.seed, r);
                replicate_counts(in, cfg.mode, min_lag, max_lag, rng, counts,
                                 sx, sy);
                for (std::size_t i = 0; i < nlags; ++i)
                    samples[i][r] = static_cast<double>(counts[i]) / denom;
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return bands_from_samples(samples, min_lag, max_lag, cfg);
}

} // namespace permdetail

/// Permutation bands for a univariate extremogram.
inline PermutationBands permutation_bands(const IndicatorSeries& ind,
                                          std::size_t max_lag,
                                          std::size_t min_lag,
                                          PermutationConfig cfg) {
    cfg.mode = PermutationMode::univariate;
    permdetail::PairInputs in;
    in.n = ind.n();
    in.k_x = ind.exceed_count();
    return permdetail::run_bands(in, min_lag, max_lag, cfg);
}

/// Permutation bands for a cross-extremogram. cross_joint applies one
/// permutation to both series (contemporaneous pairing preserved, so the
/// observed lag-0 value is reproduced by every replicate);
/// cross_independent permutes the two series independently and also
/// destroys lag-0 dependence.
inline PermutationBands permutation_bands(const IndicatorSeries& ind_x,
                                          const IndicatorSeries& ind_y,
                                          std::size_t max_lag,
                                          std::size_t min_lag,
                                          PermutationConfig cfg) {
    if (ind_x.n() != ind_y.n())
        throw data_error("permutation_bands: length mismatch");
    if (cfg.mode == PermutationMode::univariate)
        cfg.mode = PermutationMode::cross_independent;
    permdetail::PairInputs in;
    in.n = ind_x.n();
    in.k_x = ind_x.exceed_count();
    in.c_both = ind_x.bits().joint_count(ind_y.bits(), 0);
    in.c_xonly = ind_x.exceed_count() - in.c_both;
    in.c_yonly = ind_y.exceed_count() - in.c_both;
    return permdetail::run_bands(in, min_lag, max_lag, cfg);
}

/// Per-lag significance verdicts. The default reading is one-sided upper
/// exceedance; two_sided additionally flags values below the lower bound.
struct SignificanceReport {
    std::vector<std::size_t> lags;
    std::vector<bool> flagged_per_lag;
    std::vector<bool> flagged_flat;
    bool two_sided = false;

    std::size_t flagged_count_flat() const {
        return static_cast<std::size_t>(std::count(
            flagged_flat.begin(), flagged_flat.end(), true));
    }
    std::size_t flagged_count_per_lag() const {
        return static_cast<std::size_t>(std::count(
            flagged_per_lag.begin(), flagged_per_lag.end(), true));
    }

    /// First lag whose flat verdict is insignificant; one past the last lag
    /// when every lag is flagged.
    std::size_t first_insignificant_lag() const {
        for (std::size_t i = 0; i < lags.size(); ++i)
            if (!flagged_flat[i]) return lags[i];
        return lags.empty() ? 0 : lags.back() + 1;
    }
};

inline SignificanceReport significance_report(const ExtremogramCurve& curve,
                                              const PermutationBands& bands,
                                              bool two_sided = false) {
    if (curve.lags != bands.lags)
        throw data_error("significance_report: lag range mismatch");
    SignificanceReport rep;
    rep.lags = curve.lags;
    rep.two_sided = two_sided;
    rep.flagged_per_lag.resize(curve.lags.size());
    rep.flagged_flat.resize(curve.lags.size());
    for (std::size_t i = 0; i < curve.lags.size(); ++i) {
        const double v = curve.values[i];
        rep.flagged_per_lag[i] =
            v > bands.upper[i] || (two_sided && v < bands.lower[i]);
        rep.flagged_flat[i] =
            v > bands.flat_upper || (two_sided && v < bands.flat_lower);
    }
    return rep;
}

inline nlohmann::json bands_to_json(const PermutationBands& b) {
    return {{"lags", b.lags},
            {"lower", b.lower},
            {"upper", b.upper},
            {"flat_lower", b.flat_lower},
            {"flat_upper", b.flat_upper},
            {"config",
             {{"replicates", b.config.replicates},
              {"alpha", b.config.alpha},
              {"seed", b.config.seed},
              {"mode", b.config.mode == PermutationMode::univariate
                           ? "univariate"
                           : b.config.mode == PermutationMode::cross_joint
                                 ? "cross_joint"
                                 : "cross_independent"},
              {"band_convention",
               b.config.band_convention == BandConvention::per_lag
                   ? "per_lag"
                   : "lag1_flat"}}}};
}

inline void bands_to_csv(const PermutationBands& b, std::ostream& out) {
    out << "lag,lower,upper,flat_lower,flat_upper\n";
    out.precision(17);
    for (std::size_t i = 0; i < b.lags.size(); ++i)
        out << b.lags[i] << ',' << b.lower[i] << ',' << b.upper[i] << ','
            << b.flat_lower << ',' << b.flat_upper << "\n";
}

} // namespace exto
