// exto: extremogram and spike analytics CLI.
//
// Verbs: extremogram, cross, simulate, event-study, stats, settle-cap.
// Every verb is driven by a JSON config document; --seed/--out/--threads
// override the corresponding config fields. Exit codes: 0 success,
// 1 runtime/data error, 2 config error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "exto/analytics.hpp"
#include "exto/config.hpp"
#include "exto/csv.hpp"
#include "exto/extremogram.hpp"
#include "exto/permutation.hpp"
#include "exto/svg.hpp"
#include "exto/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "exto 1.0.0";

struct CommonOverrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<unsigned> threads;
};

exto::RunConfig load_config(const CommonOverrides& ov) {
    exto::RunConfig cfg = exto::RunConfig::load(ov.config_path);
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.out_dir) cfg.output_dir = *ov.out_dir;
    if (ov.threads) cfg.threads = *ov.threads;
    return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw exto::data_error("cannot write " + path.string());
    out << text;
}

json resolved_run_header(const exto::RunConfig& cfg) {
    // Thread count and output paths are deliberately not echoed: outputs
    // must be byte-identical across parallelism settings and directories.
    return {{"version", kVersion}, {"seed", cfg.seed}};
}

json significance_to_json(const exto::SignificanceReport& rep,
                          exto::BandConvention convention) {
    return {{"lags", rep.lags},
            {"flagged_per_lag", rep.flagged_per_lag},
            {"flagged_flat", rep.flagged_flat},
            {"two_sided", rep.two_sided},
            {"primary_convention",
             convention == exto::BandConvention::per_lag ? "per_lag"
                                                         : "lag1_flat"},
            {"first_insignificant_lag", rep.first_insignificant_lag()}};
}

// Shared by the extremogram and cross verbs: estimate, build bands, write
// curve.csv / bands.csv / report.json / plot.svg.
void emit_analysis_outputs(const exto::RunConfig& cfg,
                           const exto::ExtremogramCurve& curve,
                           const exto::PermutationBands& bands,
                           const json& resolved_analysis,
                           const std::string& prefix) {
    fs::create_directories(cfg.output_dir);
    const fs::path dir(cfg.output_dir);

    exto::curve_to_csv_file(curve, (dir / (prefix + "curve.csv")).string());
    {
        std::ofstream out(dir / (prefix + "bands.csv"));
        exto::bands_to_csv(bands, out);
    }
    const auto rep = exto::significance_report(curve, bands);
    json report = {{"run", resolved_run_header(cfg)},
                   {"analysis", resolved_analysis},
                   {"curve", exto::curve_to_json(curve)},
                   {"bands", exto::bands_to_json(bands)},
                   {"significance",
                    significance_to_json(rep, bands.config.band_convention)}};
    write_text(dir / (prefix + "report.json"), report.dump(2) + "\n");

    exto::SvgPlotOptions opt;
    opt.title = curve.meta.series_x == curve.meta.series_y
                    ? curve.meta.series_x
                    : curve.meta.series_x + " -> " + curve.meta.series_y;
    exto::write_extremogram_svg(curve, &bands,
                                (dir / (prefix + "plot.svg")).string(), opt);
}

int cmd_extremogram(const CommonOverrides& ov) {
    const exto::RunConfig cfg = load_config(ov);
    const json& a = exto::cfgdetail::require(cfg.raw, "", "extremogram");
    const auto series_id =
        exto::cfgdetail::get<std::string>(a, "extremogram", "series");
    const auto tailset =
        exto::tailset_from_json(exto::cfgdetail::require(a, "extremogram",
                                                         "threshold"),
                                "extremogram.threshold");
    const auto max_lag =
        exto::cfgdetail::get<std::size_t>(a, "extremogram", "max_lag");
    const auto min_lag =
        exto::cfgdetail::get_or<std::size_t>(a, "extremogram", "min_lag", 1);
    exto::PermutationConfig pcfg = a.contains("permutation")
        ? exto::permutation_from_json(a["permutation"],
                                      "extremogram.permutation")
        : exto::PermutationConfig{};
    pcfg.seed = cfg.seed;
    pcfg.threads = cfg.threads;
    pcfg.mode = exto::PermutationMode::univariate;

    const exto::PriceSeries series = cfg.load_input(series_id);
    const auto ind = exto::make_indicator(series, tailset);
    const auto curve = exto::extremogram(ind, max_lag, min_lag);
    const auto bands = exto::permutation_bands(ind, max_lag, min_lag, pcfg);

    json resolved = {{"series", series_id},
                     {"threshold", exto::tailset_to_json(tailset,
                                                         ind.threshold())},
                     {"max_lag", max_lag},
                     {"min_lag", min_lag},
                     {"exceed_count", ind.exceed_count()},
                     {"n", ind.n()}};
    emit_analysis_outputs(cfg, curve, bands, resolved, "");
    std::cout << "wrote curve.csv bands.csv report.json plot.svg to "
              << cfg.output_dir << "\n";
    return 0;
}

int cmd_cross(const CommonOverrides& ov) {
    const exto::RunConfig cfg = load_config(ov);
    const json& a = exto::cfgdetail::require(cfg.raw, "", "cross");
    const auto id_x = exto::cfgdetail::get<std::string>(a, "cross", "series_x");
    const auto id_y = exto::cfgdetail::get<std::string>(a, "cross", "series_y");
    const auto ts_x = exto::tailset_from_json(
        exto::cfgdetail::require(a, "cross", "threshold_x"),
        "cross.threshold_x");
    const auto ts_y = exto::tailset_from_json(
        exto::cfgdetail::require(a, "cross", "threshold_y"),
        "cross.threshold_y");
    const auto max_lag =
        exto::cfgdetail::get<std::size_t>(a, "cross", "max_lag");
    const auto min_lag =
        exto::cfgdetail::get_or<std::size_t>(a, "cross", "min_lag", 0);
    exto::PermutationConfig pcfg = a.contains("permutation")
        ? exto::permutation_from_json(a["permutation"], "cross.permutation")
        : exto::PermutationConfig{};
    pcfg.seed = cfg.seed;
    pcfg.threads = cfg.threads;
    if (pcfg.mode == exto::PermutationMode::univariate)
        pcfg.mode = exto::PermutationMode::cross_independent;

    const auto panel = exto::align_panel(
        {cfg.load_input(id_x), cfg.load_input(id_y)});
    const auto ind_x = exto::make_indicator(panel.member(0), ts_x);
    const auto ind_y = exto::make_indicator(panel.member(1), ts_y);
    const auto curve = exto::cross_extremogram(ind_x, ind_y, max_lag, min_lag);
    const auto bands =
        exto::permutation_bands(ind_x, ind_y, max_lag, min_lag, pcfg);

    json resolved = {
        {"series_x", id_x},
        {"series_y", id_y},
        {"threshold_x", exto::tailset_to_json(ts_x, ind_x.threshold())},
        {"threshold_y", exto::tailset_to_json(ts_y, ind_y.threshold())},
        {"max_lag", max_lag},
        {"min_lag", min_lag},
        {"exceed_x", ind_x.exceed_count()},
        {"exceed_y", ind_y.exceed_count()},
        {"n", ind_x.n()}};
    emit_analysis_outputs(cfg, curve, bands, resolved, "");
    std::cout << "wrote curve.csv bands.csv report.json plot.svg to "
              << cfg.output_dir << "\n";
    return 0;
}

int cmd_simulate(const CommonOverrides& ov) {
    const exto::RunConfig cfg = load_config(ov);
    const json& s = exto::cfgdetail::require(cfg.raw, "", "simulate");
    auto spec = exto::process_spec_from_json(s, "simulate");
    if (!s.contains("seed")) spec.seed = cfg.seed;
    const auto out_name =
        exto::cfgdetail::get_or<std::string>(s, "simulate", "output",
                                             "fixture.csv");
    const auto step = exto::minutes(
        exto::cfgdetail::get_or<std::int64_t>(s, "simulate", "step_minutes",
                                              30));
    exto::Timestamp start = 0;
    if (s.contains("start"))
        start = exto::cfgdetail::get_timestamp(s, "simulate", "start");
    const auto id =
        exto::cfgdetail::get_or<std::string>(s, "simulate", "id", "");

    const auto series = exto::generate(spec, start, step, id);
    fs::create_directories(cfg.output_dir);
    const fs::path path = fs::path(cfg.output_dir) / out_name;
    exto::CsvSchema schema;
    schema.label_offset_steps = 0;
    exto::export_csv(series, path.string(), schema);
    std::cout << "wrote " << path.string() << " (" << series.size()
              << " rows)\n";
    return 0;
}

int cmd_event_study(const CommonOverrides& ov) {
    const exto::RunConfig cfg = load_config(ov);
    const json& e = exto::cfgdetail::require(cfg.raw, "", "event_study");
    const auto series_id =
        exto::cfgdetail::get<std::string>(e, "event_study", "series");
    const auto event_time =
        exto::cfgdetail::get_timestamp(e, "event_study", "event_time");
    const auto window_days =
        exto::cfgdetail::get<std::int64_t>(e, "event_study", "window_days");

    exto::EventAnalysisConfig acfg;
    acfg.threshold = exto::tailset_from_json(
        exto::cfgdetail::require(e, "event_study", "threshold"),
        "event_study.threshold");
    acfg.max_lag =
        exto::cfgdetail::get<std::size_t>(e, "event_study", "max_lag");
    acfg.min_lag =
        exto::cfgdetail::get_or<std::size_t>(e, "event_study", "min_lag", 1);
    acfg.permutation = e.contains("permutation")
        ? exto::permutation_from_json(e["permutation"],
                                      "event_study.permutation")
        : exto::PermutationConfig{};
    acfg.permutation.seed = cfg.seed;
    acfg.permutation.threads = cfg.threads;
    if (e.contains("spike_agg_minutes"))
        acfg.spike_agg_step = exto::minutes(exto::cfgdetail::get<std::int64_t>(
            e, "event_study", "spike_agg_minutes"));

    const exto::PriceSeries series = cfg.load_input(series_id);
    const auto cmp = exto::event_window_compare(
        series, event_time, window_days * exto::hours(24), acfg);

    fs::create_directories(cfg.output_dir);
    const fs::path dir(cfg.output_dir);
    for (const auto* side : {"pre", "post"}) {
        const auto& w = std::string(side) == "pre" ? cmp.pre : cmp.post;
        if (!w.curve) continue;
        exto::curve_to_csv_file(
            *w.curve, (dir / (std::string(side) + "_curve.csv")).string());
        std::ofstream bout(dir / (std::string(side) + "_bands.csv"));
        exto::bands_to_csv(*w.bands, bout);
        exto::SvgPlotOptions opt;
        opt.title = series_id + " " + side;
        exto::write_extremogram_svg(
            *w.curve, &*w.bands,
            (dir / (std::string(side) + "_plot.svg")).string(), opt);
    }
    json report = {
        {"run", resolved_run_header(cfg)},
        {"event_time", exto::format_timestamp(event_time)},
        {"window_days", window_days},
        {"pre", exto::window_analysis_to_json(cmp.pre)},
        {"post", exto::window_analysis_to_json(cmp.post)},
        {"both_defined", cmp.both_defined}};
    if (cmp.both_defined) {
        report["lag1_pre"] = cmp.lag1_pre;
        report["lag1_post"] = cmp.lag1_post;
        report["verdict"] =
            cmp.pre.first_insignificant_lag == cmp.post.first_insignificant_lag
                ? "no significant difference in persistence"
                : (cmp.post.first_insignificant_lag >
                           cmp.pre.first_insignificant_lag
                       ? "persistence increased post-event"
                       : "persistence decreased post-event");
    } else {
        report["verdict"] = "window(s) without spikes; stats unavailable";
    }
    write_text(dir / "report.json", report.dump(2) + "\n");
    std::cout << "wrote event-study outputs to " << cfg.output_dir << "\n";
    return 0;
}

int cmd_stats(const CommonOverrides& ov) {
    const exto::RunConfig cfg = load_config(ov);
    const json& s = exto::cfgdetail::require(cfg.raw, "", "stats");
    const auto series_id =
        exto::cfgdetail::get<std::string>(s, "stats", "series");
    const auto thresholds = exto::cfgdetail::get_or<std::vector<double>>(
        s, "stats", "spike_thresholds", {150.0, 300.0, 5000.0});
    const exto::PriceSeries series = cfg.load_input(series_id);
    const auto stats = exto::descriptive_stats(series, thresholds);

    json report = {{"run", resolved_run_header(cfg)},
                   {"series", series_id},
                   {"stats", exto::descriptive_stats_to_json(stats)}};
    fs::create_directories(cfg.output_dir);
    write_text(fs::path(cfg.output_dir) / "stats.json", report.dump(2) + "\n");

    std::cout << "Series:    " << series_id << "\n"
              << "Obs.:      " << stats.n_effective << "\n"
              << "Mean:      " << stats.mean << "\n"
              << "Median:    " << stats.median << "\n"
              << "Max:       " << stats.max << "\n"
              << "Min:       " << stats.min << "\n"
              << "Std. dev.: " << stats.std_dev << "\n";
    if (stats.shape_defined)
        std::cout << "Skewness:  " << stats.skewness << "\n"
                  << "Kurtosis:  " << stats.kurtosis_raw << " (excess "
                  << stats.kurtosis_excess << ")\n";
    for (const auto& row : stats.spikes)
        std::cout << "Spike obs. (>" << row.threshold << "): " << row.count
                  << " (" << row.percentage << "%)\n";
    return 0;
}

int cmd_settle_cap(const CommonOverrides& ov) {
    const exto::RunConfig cfg = load_config(ov);
    const json& s = exto::cfgdetail::require(cfg.raw, "", "settle_cap");
    const auto series_id =
        exto::cfgdetail::get<std::string>(s, "settle_cap", "series");
    exto::Quarter quarter;
    quarter.year = exto::cfgdetail::get<int>(s, "settle_cap", "year");
    quarter.index = exto::cfgdetail::get<int>(s, "settle_cap", "quarter");
    if (quarter.index < 1 || quarter.index > 4)
        throw exto::config_error("settle_cap.quarter", "must be 1..4");
    const auto cap =
        exto::cfgdetail::get_or<double>(s, "settle_cap", "cap_level", 300.0);

    const exto::PriceSeries series = cfg.load_input(series_id);
    const auto settle = exto::cap_settlement(series, quarter, cap);

    json report = {{"run", resolved_run_header(cfg)},
                   {"series", series_id},
                   {"year", quarter.year},
                   {"quarter", quarter.index},
                   {"cap_level", settle.cap_level},
                   {"C", settle.C},
                   {"D", settle.D},
                   {"E", settle.E},
                   {"settlement", settle.settlement}};
    fs::create_directories(cfg.output_dir);
    write_text(fs::path(cfg.output_dir) / "settlement.json",
               report.dump(2) + "\n");
    std::cout << "Q" << quarter.index << " " << quarter.year
              << " cap settlement: " << settle.settlement << " (C="
              << settle.C << ", D=" << settle.D << ", E=" << settle.E
              << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Extremogram and electricity price spike analytics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    CommonOverrides ov;
    int (*handler)(const CommonOverrides&) = nullptr;

    auto add_common = [&ov](CLI::App* sub) {
        sub->add_option("--config", ov.config_path, "JSON config file")
            ->required();
        sub->add_option("--seed", ov.seed, "override config seed");
        sub->add_option("--out", ov.out_dir, "override output directory");
        sub->add_option("--threads", ov.threads, "worker thread count");
    };

    struct Verb {
        const char* name;
        const char* help;
        int (*fn)(const CommonOverrides&);
    };
    const Verb verbs[] = {
        {"extremogram", "univariate extremogram with permutation bands",
         cmd_extremogram},
        {"cross", "cross-extremogram between two series", cmd_cross},
        {"simulate", "generate a synthetic fixture series", cmd_simulate},
        {"event-study", "pre/post event window comparison", cmd_event_study},
        {"stats", "descriptive and exceedance statistics", cmd_stats},
        {"settle-cap", "quarterly cap product settlement", cmd_settle_cap},
    };
    for (const auto& v : verbs) {
        CLI::App* sub = app.add_subcommand(v.name, v.help);
        add_common(sub);
        sub->callback([&handler, &v] { handler = v.fn; });
    }

    CLI11_PARSE(app, argc, argv);
    try {
        return handler(ov);
    } catch (const exto::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
