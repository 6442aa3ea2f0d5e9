#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "exto/analytics.hpp"
#include "exto/csv.hpp"
#include "exto/errors.hpp"
#include "exto/permutation.hpp"
#include "exto/series.hpp"
#include "exto/synthetic.hpp"
#include "exto/time.hpp"

namespace exto {

namespace cfgdetail {

using nlohmann::json;

inline std::string join(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

inline const json& require(const json& j, const std::string& path,
                           const std::string& key) {
    if (!j.is_object())
        throw config_error(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end())
        throw config_error(join(path, key), "required field missing");
    return *it;
}

template <typename T>
T get(const json& j, const std::string& path, const std::string& key) {
    const json& v = require(j, path, key);
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw config_error(join(path, key), "wrong type");
    }
}

template <typename T>
T get_or(const json& j, const std::string& path, const std::string& key,
         T fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    return get<T>(j, path, key);
}

inline Timestamp get_timestamp(const json& j, const std::string& path,
                               const std::string& key) {
    const json& v = require(j, path, key);
    try {
        if (v.is_number_integer()) return v.get<Timestamp>();
        return parse_timestamp(v.get<std::string>());
    } catch (const data_error& e) {
        throw config_error(join(path, key), e.what());
    } catch (const json::exception&) {
        throw config_error(join(path, key), "expected timestamp");
    }
}

} // namespace cfgdetail

inline TailSet tailset_from_json(const nlohmann::json& j,
                                 const std::string& path) {
    const auto kind = cfgdetail::get<std::string>(j, path, "kind");
    if (kind == "absolute_upper")
        return TailSet::absolute_upper(
            cfgdetail::get<double>(j, path, "level"));
    if (kind == "absolute_lower")
        return TailSet::absolute_lower(
            cfgdetail::get<double>(j, path, "level"));
    const double q = cfgdetail::get<double>(j, path, "q");
    if (!(q > 0.0 && q < 1.0))
        throw config_error(cfgdetail::join(path, "q"), "must be in (0, 1)");
    if (kind == "quantile_upper") return TailSet::quantile_upper(q);
    if (kind == "quantile_lower") return TailSet::quantile_lower(q);
    throw config_error(cfgdetail::join(path, "kind"),
                       "unknown tail set kind '" + kind + "'");
}

inline nlohmann::json tailset_to_json(const TailSet& ts, double resolved) {
    const char* kind = nullptr;
    switch (ts.kind) {
        case TailSet::Kind::absolute_upper: kind = "absolute_upper"; break;
        case TailSet::Kind::absolute_lower: kind = "absolute_lower"; break;
        case TailSet::Kind::quantile_upper: kind = "quantile_upper"; break;
        case TailSet::Kind::quantile_lower: kind = "quantile_lower"; break;
    }
    nlohmann::json j = {{"kind", kind}, {"resolved_threshold", resolved}};
    if (ts.is_quantile())
        j["q"] = ts.q;
    else
        j["level"] = ts.level;
    return j;
}

inline PermutationConfig permutation_from_json(const nlohmann::json& j,
                                               const std::string& path) {
    PermutationConfig cfg;
    cfg.replicates =
        cfgdetail::get_or<std::size_t>(j, path, "replicates", 1000);
    cfg.alpha = cfgdetail::get_or<double>(j, path, "alpha", 0.01);
    cfg.seed = cfgdetail::get_or<std::uint64_t>(j, path, "seed", 0);
    const auto mode =
        cfgdetail::get_or<std::string>(j, path, "mode", "univariate");
    if (mode == "univariate")
        cfg.mode = PermutationMode::univariate;
    else if (mode == "cross_joint")
        cfg.mode = PermutationMode::cross_joint;
    else if (mode == "cross_independent")
        cfg.mode = PermutationMode::cross_independent;
    else
        throw config_error(cfgdetail::join(path, "mode"),
                           "unknown mode '" + mode + "'");
    const auto conv = cfgdetail::get_or<std::string>(j, path,
                                                     "band_convention",
                                                     "lag1_flat");
    if (conv == "per_lag")
        cfg.band_convention = BandConvention::per_lag;
    else if (conv == "lag1_flat")
        cfg.band_convention = BandConvention::lag1_flat;
    else
        throw config_error(cfgdetail::join(path, "band_convention"),
                           "unknown convention '" + conv + "'");
    if (cfg.replicates < 100)
        throw config_error(cfgdetail::join(path, "replicates"),
                           "must be >= 100");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw config_error(cfgdetail::join(path, "alpha"),
                           "must be in (0, 1)");
    return cfg;
}

inline ProcessSpec process_spec_from_json(const nlohmann::json& j,
                                          const std::string& path) {
    ProcessSpec spec;
    const auto kind = cfgdetail::get<std::string>(j, path, "kind");
    if (kind == "iid_pareto") {
        spec.kind = ProcessSpec::Kind::iid_pareto;
        spec.alpha_tail =
            cfgdetail::get_or<double>(j, path, "alpha_tail", 2.0);
    } else if (kind == "markov_regime") {
        spec.kind = ProcessSpec::Kind::markov_regime;
        spec.p_stay = cfgdetail::get_or<double>(j, path, "p_stay", 0.9);
        spec.p_enter = cfgdetail::get_or<double>(j, path, "p_enter", 0.01);
        spec.spike_level =
            cfgdetail::get_or<double>(j, path, "spike_level", 1000.0);
        spec.base_level =
            cfgdetail::get_or<double>(j, path, "base_level", 50.0);
        spec.noise_scale =
            cfgdetail::get_or<double>(j, path, "noise_scale", 10.0);
    } else if (kind == "max_moving_average") {
        spec.kind = ProcessSpec::Kind::max_moving_average;
        spec.weights =
            cfgdetail::get<std::vector<double>>(j, path, "weights");
    } else if (kind == "seasonal_spike") {
        spec.kind = ProcessSpec::Kind::seasonal_spike;
        spec.period = cfgdetail::get_or<std::size_t>(j, path, "period", 48);
        spec.p_in = cfgdetail::get_or<double>(j, path, "p_in", 0.5);
        spec.p_off = cfgdetail::get_or<double>(j, path, "p_off", 0.001);
        spec.spike_level =
            cfgdetail::get_or<double>(j, path, "spike_level", 1000.0);
        spec.base_level =
            cfgdetail::get_or<double>(j, path, "base_level", 50.0);
        spec.noise_scale =
            cfgdetail::get_or<double>(j, path, "noise_scale", 10.0);
    } else {
        throw config_error(cfgdetail::join(path, "kind"),
                           "unknown process kind '" + kind + "'");
    }
    spec.n = cfgdetail::get<std::size_t>(j, path, "n");
    spec.seed = cfgdetail::get_or<std::uint64_t>(j, path, "seed", 0);
    try {
        spec.validate();
    } catch (const data_error& e) {
        throw config_error(path, e.what());
    }
    return spec;
}

/// One input file declaration.
struct InputSpec {
    std::string id;
    std::string path;
    Duration step = minutes(30);
    CsvSchema schema;
};

/// The declarative run configuration: fully determines a run together with
/// the input files.
struct RunConfig {
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string output_dir = ".";
    std::vector<InputSpec> inputs;
    nlohmann::json raw; // verb sections are read on demand

    static RunConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw config_error("", "cannot open config file: " + path);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw config_error("", std::string("config is not valid JSON: ") +
                                       e.what());
        }
        return from_json(j);
    }

    static RunConfig from_json(const nlohmann::json& j) {
        RunConfig cfg;
        cfg.raw = j;
        cfg.seed = cfgdetail::get_or<std::uint64_t>(j, "", "seed", 0);
        cfg.threads = cfgdetail::get_or<unsigned>(j, "", "threads", 0);
        cfg.output_dir =
            cfgdetail::get_or<std::string>(j, "", "output_dir", ".");
        if (j.contains("inputs")) {
            const auto& arr = j.at("inputs");
            if (!arr.is_array())
                throw config_error("inputs", "expected an array");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                const std::string p = "inputs[" + std::to_string(i) + "]";
                InputSpec in;
                in.id = cfgdetail::get<std::string>(arr[i], p, "id");
                in.path = cfgdetail::get<std::string>(arr[i], p, "path");
                in.step = minutes(
                    cfgdetail::get_or<std::int64_t>(arr[i], p, "step_minutes", 30));
                in.schema.timestamp_column = cfgdetail::get_or<std::string>(
                    arr[i], p, "timestamp_column", "timestamp");
                in.schema.value_column = cfgdetail::get_or<std::string>(
                    arr[i], p, "value_column", "price");
                const auto delim = cfgdetail::get_or<std::string>(
                    arr[i], p, "delimiter", ",");
                if (delim.size() != 1)
                    throw config_error(cfgdetail::join(p, "delimiter"),
                                       "must be a single character");
                in.schema.delimiter = delim[0];
                in.schema.label_offset_steps = static_cast<int>(
                    cfgdetail::get_or<std::int64_t>(arr[i], p,
                                                    "label_offset_steps", -1));
                cfg.inputs.push_back(std::move(in));
            }
        }
        return cfg;
    }

    PriceSeries load_input(const std::string& id) const {
        for (const auto& in : inputs)
            if (in.id == id)
                return ingest_csv(in.path, in.schema, in.step, in.id);
        throw config_error("inputs", "no input with id '" + id + "'");
    }
};

} // namespace exto
