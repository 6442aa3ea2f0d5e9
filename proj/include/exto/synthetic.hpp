#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "exto/errors.hpp"
#include "exto/extremogram.hpp"
#include "exto/rng.hpp"
#include "exto/series.hpp"

namespace exto {

/// Synthetic processes with analytically known extremal dependence; the
/// validation oracles for the estimators.
struct ProcessSpec {
    enum class Kind { iid_pareto, markov_regime, max_moving_average, seasonal_spike };

    Kind kind = Kind::iid_pareto;
    std::size_t n = 0;
    std::uint64_t seed = 0;

    // iid_pareto
    double alpha_tail = 2.0;

    // markov_regime: two latent states, calm and spike. The spike state
    // persists with p_stay; calm enters spike with p_enter. Emitted price
    // is the state level plus uniform noise in [-noise_scale, noise_scale],
    // bounded so a threshold between the levels recovers the latent state
    // exactly and the Markov oracle is exact rather than approximate.
    double p_stay = 0.9;
    double p_enter = 0.01;
    double spike_level = 1000.0;
    double base_level = 50.0;
    double noise_scale = 10.0;

    // max_moving_average: X_t = max_j weights[j] * Z_{t-j}, Z iid Pareto(1)
    std::vector<double> weights;

    // seasonal_spike: one spiking phase per period; the phase-0 slot spikes
    // with p_in, every other slot with p_off. Spike emits spike_level,
    // calm emits base_level (same noise convention as markov_regime).
    std::size_t period = 48;
    double p_in = 0.5;
    double p_off = 0.001;

    void validate() const {
        if (n == 0) throw data_error("process spec: n must be positive");
        switch (kind) {
            case Kind::iid_pareto:
                if (alpha_tail <= 0)
                    throw data_error("iid_pareto: alpha_tail must be positive");
                break;
            case Kind::markov_regime:
                for (double p : {p_stay, p_enter})
                    if (!(p >= 0.0 && p <= 1.0))
                        throw data_error(
                            "markov_regime: probabilities must be in [0, 1]");
                if (!(noise_scale >= 0))
                    throw data_error("markov_regime: negative noise scale");
                if (spike_level - noise_scale <= base_level + noise_scale)
                    throw data_error(
                        "markov_regime: noise bands of the two states overlap");
                break;
            case Kind::max_moving_average:
                if (weights.empty())
                    throw data_error("max_moving_average: weights required");
                for (double w : weights)
                    if (w < 0)
                        throw data_error(
                            "max_moving_average: weights must be non-negative");
                break;
            case Kind::seasonal_spike:
                if (period < 2)
                    throw data_error("seasonal_spike: period must be >= 2");
                for (double p : {p_in, p_off})
                    if (!(p >= 0.0 && p <= 1.0))
                        throw data_error(
                            "seasonal_spike: probabilities must be in [0, 1]");
                break;
        }
    }

    /// A threshold price separating the calm and spike emission bands.
    double state_threshold() const {
        return (base_level + noise_scale + spike_level - noise_scale) / 2.0;
    }
};

namespace synthdetail {

constexpr std::size_t BURN_IN = 10000;

} // namespace synthdetail

/// Generates the process, deterministic by seed. A 10,000-step burn-in is
/// discarded so Markov kinds start in the stationary regime.
inline PriceSeries generate(const ProcessSpec& spec,
                            Timestamp start = 0,
                            Duration step = minutes(30),
                            std::string id = "") {
    spec.validate();
    CounterRng rng = CounterRng::substream(spec.seed, 0);
    std::vector<double> values;
    values.reserve(spec.n);

    switch (spec.kind) {
        case ProcessSpec::Kind::iid_pareto: {
            for (std::size_t t = 0; t < spec.n; ++t) {
                const double u = rng.next_double();
                values.push_back(std::pow(1.0 - u, -1.0 / spec.alpha_tail));
            }
            if (id.empty()) id = "iid_pareto";
            break;
        }
        case ProcessSpec::Kind::markov_regime: {
            bool spike = false;
            for (std::size_t t = 0; t < synthdetail::BURN_IN + spec.n; ++t) {
                const double u = rng.next_double();
                spike = spike ? (u < spec.p_stay) : (u < spec.p_enter);
                if (t < synthdetail::BURN_IN) continue;
                const double level =
                    spike ? spec.spike_level : spec.base_level;
                const double noise =
                    (2.0 * rng.next_double() - 1.0) * spec.noise_scale;
                values.push_back(level + noise);
            }
            if (id.empty()) id = "markov_regime";
            break;
        }
        case ProcessSpec::Kind::max_moving_average: {
            const std::size_t q = spec.weights.size();
            std::vector<double> z(q, 1.0);
            auto draw = [&] {
                return 1.0 / (1.0 - rng.next_double());
            };
            for (auto& zi : z) zi = draw();
            std::size_t head = 0;
            for (std::size_t t = 0; t < synthdetail::BURN_IN + spec.n; ++t) {
                z[head] = draw();
                head = (head + 1) % q;
                if (t < synthdetail::BURN_IN) continue;
                double m = 0.0;
                for (std::size_t j = 0; j < q; ++j) {
                    // z[(head - 1 - j) mod q] is Z_{t-j}
                    const std::size_t idx = (head + q - 1 - j) % q;
                    m = std::max(m, spec.weights[j] * z[idx]);
                }
                values.push_back(m);
            }
            if (id.empty()) id = "max_moving_average";
            break;
        }
        case ProcessSpec::Kind::seasonal_spike: {
            for (std::size_t t = 0; t < spec.n; ++t) {
                const double p =
                    (t % spec.period == 0) ? spec.p_in : spec.p_off;
                const bool spike = rng.next_double() < p;
                const double level =
                    spike ? spec.spike_level : spec.base_level;
                const double noise =
                    (2.0 * rng.next_double() - 1.0) * spec.noise_scale;
                values.push_back(level + noise);
            }
            if (id.empty()) id = "seasonal_spike";
            break;
        }
    }
    return PriceSeries(std::move(id), start, step, std::move(values));
}

namespace synthdetail {

// [T^h]_{spike,spike} for the 2-state chain, by repeated squaring on the
// 2x2 transition matrix.
inline double markov_h_step_spike_prob(double p_stay, double p_enter,
                                       std::size_t h) {
    using Mat = std::array<double, 4>; // row-major (calm, spike) x (calm, spike)
    auto mul = [](const Mat& a, const Mat& b) -> Mat {
        return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
    };
    Mat result = {1, 0, 0, 1};
    Mat base = {1 - p_enter, p_enter, 1 - p_stay, p_stay};
    while (h > 0) {
        if (h & 1) result = mul(result, base);
        base = mul(base, base);
        h >>= 1;
    }
    return result[3];
}

} // namespace synthdetail

/// Exact theoretical extremogram for spec kinds with a closed form under a
/// state-aligned threshold. Supported: markov_regime (h-step transition
/// probability), iid_pareto (constant tail probability), seasonal_spike
/// (periodic conditional probability).
inline ExtremogramCurve oracle_extremogram(const ProcessSpec& spec,
                                           const TailSet& tailset,
                                           std::size_t max_lag,
                                           std::size_t min_lag = 1) {
    spec.validate();
    if (!tailset.is_upper() && spec.kind != ProcessSpec::Kind::iid_pareto)
        throw data_error("oracle_extremogram: lower tails unsupported");

    ExtremogramCurve c;
    c.meta.series_x = c.meta.series_y = "oracle";
    c.meta.n = spec.n;
    c.meta.max_lag = max_lag;
    c.meta.min_lag = min_lag;

    auto require_state_threshold = [&] {
        if (tailset.is_quantile())
            throw data_error(
                "oracle_extremogram: absolute threshold required");
        if (!(tailset.level > spec.base_level + spec.noise_scale &&
              tailset.level < spec.spike_level - spec.noise_scale))
            throw data_error(
                "oracle_extremogram: threshold must separate the state "
                "emission bands");
    };

    for (std::size_t h = min_lag; h <= max_lag; ++h) {
        double rho = 0.0;
        switch (spec.kind) {
            case ProcessSpec::Kind::iid_pareto: {
                // Independence: rho(h) is the unconditional tail probability.
                double p;
                if (tailset.is_quantile())
                    p = tailset.is_upper() ? 1.0 - tailset.q : tailset.q;
                else if (tailset.is_upper())
                    p = tailset.level <= 1.0
                            ? 1.0
                            : std::pow(tailset.level, -spec.alpha_tail);
                else
                    p = tailset.level <= 1.0
                            ? 0.0
                            : 1.0 - std::pow(tailset.level, -spec.alpha_tail);
                rho = (h == 0) ? 1.0 : p;
                break;
            }
            case ProcessSpec::Kind::markov_regime: {
                require_state_threshold();
                rho = synthdetail::markov_h_step_spike_prob(
                    spec.p_stay, spec.p_enter, h);
                break;
            }
            case ProcessSpec::Kind::seasonal_spike: {
                require_state_threshold();
                if (h == 0) {
                    rho = 1.0;
                    break;
                }
                // Conditioning on a spike at t reweights the phase of t;
                // spikes are independent across t given the phase.
                const double P = static_cast<double>(spec.period);
                const double w0 =
                    spec.p_in / (spec.p_in + (P - 1.0) * spec.p_off);
                const double p_at = (h % spec.period == 0)
                                        ? spec.p_in
                                        : spec.p_off;
                // Non-phase-0 conditioning spike at phase f lands at phase
                // (f + h) mod period; it hits phase 0 for exactly one f.
                const double w_other = (1.0 - w0) / (P - 1.0);
                const bool other_hits_zero = (h % spec.period != 0);
                rho = w0 * p_at +
                      (other_hits_zero
                           ? w_other * spec.p_in +
                                 (1.0 - w0 - w_other) * spec.p_off
                           : (1.0 - w0) * spec.p_off);
                break;
            }
            case ProcessSpec::Kind::max_moving_average:
                throw data_error(
                    "oracle_extremogram: no closed form for "
                    "max_moving_average");
        }
        c.lags.push_back(h);
        c.values.push_back(rho);
    }
    return c;
}

/// Stationary spike probability of the markov_regime chain.
inline double markov_stationary_spike_prob(const ProcessSpec& spec) {
    return spec.p_enter / (spec.p_enter + 1.0 - spec.p_stay);
}

} // namespace exto
