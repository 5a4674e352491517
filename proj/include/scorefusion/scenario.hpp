#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "scorefusion/evaluate.hpp"
#include "scorefusion/export.hpp"
#include "scorefusion/fuse.hpp"
#include "scorefusion/io.hpp"
#include "scorefusion/normalize.hpp"
#include "scorefusion/score_model.hpp"
#include "scorefusion/synth.hpp"

namespace scorefusion {

inline constexpr std::string_view kToolVersion = "1.0.0";

struct FileSource {
    std::filesystem::path path;
    Polarity polarity = Polarity::Similarity;
};

using Source = std::variant<FileSource, SynthSpec>;

struct WeightsConfig {
    enum class Mode { FromEer, Explicit, PerSubject };
    Mode mode = Mode::FromEer;
    std::vector<double> values;        // Explicit, or the PerSubject fallback when non-empty
    std::filesystem::path overrides;   // PerSubject
};

struct ScenarioConfig {
    std::string name = "scenario";
    Source modality_a;
    Source modality_b;
    std::vector<NormMethod> normalizations{std::begin(kAllNormMethods), std::end(kAllNormMethods)};
    std::vector<FusionRule> fusions{std::begin(kAllFusionRules), std::end(kAllFusionRules)};
    WeightsConfig weights;
    std::filesystem::path output_dir = "out";
    std::optional<std::uint64_t> seed;
    double correlation = 0.0;
    std::size_t histogram_bins = 50;
    bool plots = false;
    bool write_fused_scores = true;
};

/// Puts method lists in canonical order (MM, ZS, TanH / MinS, MaxS, SS, UW),
/// drops duplicates and rejects empty selections.
inline void validate(ScenarioConfig& cfg) {
    if (cfg.normalizations.empty()) {
        throw Error(ErrorKind::Validation, "scenario " + cfg.name + ": no normalization selected");
    }
    if (cfg.fusions.empty()) {
        throw Error(ErrorKind::Validation, "scenario " + cfg.name + ": no fusion rule selected");
    }
    std::sort(cfg.normalizations.begin(), cfg.normalizations.end());
    cfg.normalizations.erase(std::unique(cfg.normalizations.begin(), cfg.normalizations.end()),
                             cfg.normalizations.end());
    std::sort(cfg.fusions.begin(), cfg.fusions.end());
    cfg.fusions.erase(std::unique(cfg.fusions.begin(), cfg.fusions.end()), cfg.fusions.end());
    if (cfg.histogram_bins == 0) {
        throw Error(ErrorKind::Validation, "histogram_bins must be positive");
    }
    if (!(cfg.correlation >= -1.0 && cfg.correlation <= 1.0)) {
        throw Error(ErrorKind::Validation, "correlation must lie in [-1, 1]");
    }
    if (cfg.weights.mode == WeightsConfig::Mode::Explicit && cfg.weights.values.size() != 2) {
        throw Error(ErrorKind::WeightDimensionMismatch, "explicit weights need one value per modality");
    }
}

struct ScenarioCell {
    NormMethod normalization;
    FusionRule fusion;
    EerResult result;
};

struct ScenarioReport {
    std::string name;
    std::string modality_a;
    std::string modality_b;
    EerResult eer_a;
    EerResult eer_b;
    std::size_t genuine_trials = 0;
    std::size_t impostor_trials = 0;
    std::vector<NormMethod> normalizations;
    std::vector<FusionRule> fusions;
    std::vector<ScenarioCell> cells;  // normalization-major
    std::size_t best = 0;             // index into cells
    std::optional<double> improvement_pct;
    std::vector<double> global_weights;
    std::vector<std::pair<std::string, std::string>> provenance;

    const ScenarioCell& cell(NormMethod n, FusionRule f) const {
        for (const auto& c : cells) {
            if (c.normalization == n && c.fusion == f) return c;
        }
        throw Error(ErrorKind::Validation, "cell not in report");
    }
    const ScenarioCell& best_cell() const { return cells.at(best); }
};

struct ScenarioOutcome {
    ScenarioReport report;
    std::vector<ScoreSet> fused;  // parallel to report.cells
};

namespace detail {

inline WeightVector resolve_weights(const WeightsConfig& cfg, const EerResult& a,
                                    const EerResult& b) {
    const double eers[] = {a.eer, b.eer};
    switch (cfg.mode) {
        case WeightsConfig::Mode::FromEer:
            return weights_from_eer(eers);
        case WeightsConfig::Mode::Explicit:
            return WeightVector(cfg.values);
        case WeightsConfig::Mode::PerSubject: {
            auto overrides = io::read_weight_overrides(cfg.overrides);
            std::vector<double> global = cfg.values;
            if (global.empty()) {
                const auto from_eer = weights_from_eer(eers);
                global.assign(from_eer.global().begin(), from_eer.global().end());
            }
            return WeightVector(std::move(global), std::move(overrides));
        }
    }
    throw Error(ErrorKind::Validation, "unknown weights mode");
}

}  // namespace detail

/// Normalization x fusion grid over two raw modalities: fit each modality,
/// normalize, align, fuse, and take the EER of every cell.
inline ScenarioOutcome evaluate_scenario(const std::string& name, const ScoreSet& a,
                                         const ScoreSet& b,
                                         const std::vector<NormMethod>& normalizations,
                                         const std::vector<FusionRule>& fusions,
                                         const WeightsConfig& weights_cfg) {
    ScenarioOutcome out;
    auto& rep = out.report;
    rep.name = name;
    rep.modality_a = a.modality();
    rep.modality_b = b.modality();
    rep.normalizations = normalizations;
    rep.fusions = fusions;
    rep.eer_a = eer(a);
    rep.eer_b = eer(b);
    rep.genuine_trials = a.count(Label::Genuine);
    rep.impostor_trials = a.count(Label::Impostor);

    const auto stats_a = fit(a);
    const auto stats_b = fit(b);
    std::optional<WeightVector> weights;
    if (std::find(fusions.begin(), fusions.end(), FusionRule::UserWeighted) != fusions.end()) {
        weights = detail::resolve_weights(weights_cfg, rep.eer_a, rep.eer_b);
        rep.global_weights.assign(weights->global().begin(), weights->global().end());
    }

    for (NormMethod n : normalizations) {
        const ScoreSet na = normalize_set(a, Normalizer(n, stats_a));
        const ScoreSet nb = normalize_set(b, Normalizer(n, stats_b));
        const AlignedTrials aligned = align({na, nb});
        for (FusionRule f : fusions) {
            ScoreSet fused = fuse(aligned, f, weights ? &*weights : nullptr);
            rep.cells.push_back({n, f, eer(fused)});
            out.fused.push_back(std::move(fused));
        }
    }
    for (std::size_t i = 1; i < rep.cells.size(); ++i) {
        if (rep.cells[i].result.eer < rep.cells[rep.best].result.eer) rep.best = i;
    }
    try {
        rep.improvement_pct = improvement(rep.eer_a.eer, rep.eer_b.eer, rep.best_cell().result.eer);
    } catch (const Error&) {
        rep.improvement_pct.reset();
    }
    return out;
}

inline std::string format_pct(double fraction) { return io::format_sig(fraction * 100.0, 6); }

/// Machine-readable report: unimodal rows then one row per grid cell.
inline std::string format_report_csv(const ScenarioReport& r) {
    std::string out = "kind,scenario,modality,normalization,fusion,eer_pct,eer_method,threshold\n";
    auto row = [&](std::string_view kind, const std::string& modality, std::string_view norm,
                   std::string_view fusion, const EerResult& e) {
        out += std::string(kind) + "," + r.name + "," + modality + "," + std::string(norm) + "," +
               std::string(fusion) + "," + format_pct(e.eer) + "," +
               std::string(to_string(e.method)) + "," + io::format_sig(e.threshold, 9) + "\n";
    };
    row("unimodal", r.modality_a, "", "", r.eer_a);
    row("unimodal", r.modality_b, "", "", r.eer_b);
    const std::string fused_name = r.modality_a + "+" + r.modality_b;
    for (const auto& c : r.cells) {
        row("fused", fused_name, to_string(c.normalization), to_string(c.fusion), c.result);
    }
    return out;
}

/// Human-readable report: provenance header, fusion x normalization EER table
/// in percent, best cell and its improvement over the better modality.
inline std::string format_report_table(const ScenarioReport& r) {
    std::string out;
    out += "# scenario: " + r.name + "\n";
    for (const auto& [k, v] : r.provenance) out += "# " + k + ": " + v + "\n";
    out += "# trials per modality: " + std::to_string(r.genuine_trials) + " genuine, " +
           std::to_string(r.impostor_trials) + " impostor\n";
    if (!r.global_weights.empty()) {
        out += "# user weights: " + io::format_sig(r.global_weights[0], 6) + ", " +
               io::format_sig(r.global_weights[1], 6) + "\n";
    }
    out += "\nUnimodal EER (%)\n";
    out += "  " + r.modality_a + ": " + format_pct(r.eer_a.eer) + "\n";
    out += "  " + r.modality_b + ": " + format_pct(r.eer_b.eer) + "\n";
    out += "\nFused EER (%)\n";

    auto pad = [](std::string s, std::size_t w) {
        if (s.size() < w) s.append(w - s.size(), ' ');
        return s;
    };
    std::string header = pad("fusion \\ norm", 16);
    for (NormMethod n : r.normalizations) header += pad(std::string(to_string(n)), 14);
    out += header + "\n";
    for (FusionRule f : r.fusions) {
        std::string line = pad(std::string(to_string(f)), 16);
        for (NormMethod n : r.normalizations) line += pad(format_pct(r.cell(n, f).result.eer), 14);
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
    }
    const auto& best = r.best_cell();
    out += "\nBest: " + std::string(to_string(best.normalization)) + "+" +
           std::string(to_string(best.fusion)) + " EER " + format_pct(best.result.eer) + "%\n";
    out += "Improvement: " +
           (r.improvement_pct ? io::format_sig(*r.improvement_pct, 6) + "%" : std::string("n/a")) +
           "\n";
    return out;
}

inline std::string cell_stem(const ScenarioCell& c) {
    return std::string(to_string(c.normalization)) + "_" + std::string(to_string(c.fusion));
}

/// Writes report.csv, report.txt, fused/<cell>.csv and curve bundles for both
/// modalities and the best cell into `dir`.
inline void write_scenario(const ScenarioOutcome& outcome, const ScoreSet& a, const ScoreSet& b,
                           const std::filesystem::path& dir, std::size_t bins, bool plots,
                           bool write_fused) {
    const auto& r = outcome.report;
    io::write_file(dir / "report.csv", format_report_csv(r));
    io::write_file(dir / "report.txt", format_report_table(r));
    if (write_fused) {
        for (std::size_t i = 0; i < r.cells.size(); ++i) {
            io::write_scores(dir / "fused" / (cell_stem(r.cells[i]) + ".csv"), outcome.fused[i]);
        }
    }
    const auto curves = dir / "curves";
    export_curves(a, sweep(a), curves, "unimodal_" + a.modality(), bins, plots);
    export_curves(b, sweep(b), curves, "unimodal_" + b.modality(), bins, plots);
    const auto& best = outcome.fused[r.best];
    export_curves(best, sweep(best), curves, "best_" + cell_stem(r.best_cell()), bins, plots);
}

// ---------------------------------------------------------------------------
// Config loading

namespace detail {

inline Population parse_population(const std::string& s) {
    if (s == "genuine") return Population::Genuine;
    if (s == "impostor") return Population::Impostor;
    if (s == "both") return Population::Both;
    throw Error(ErrorKind::Validation, "unknown population '" + s + "'");
}

inline SynthSpec parse_synth(const nlohmann::json& j) {
    SynthSpec s;
    s.modality = j.value("modality", s.modality);
    s.n_subjects = j.value("subjects", s.n_subjects);
    s.n_samples_per_subject = j.value("samples", s.n_samples_per_subject);
    s.impostor_mean = j.value("impostor_mean", s.impostor_mean);
    s.impostor_sd = j.value("impostor_sd", s.impostor_sd);
    s.genuine_sd = j.value("genuine_sd", s.genuine_sd);
    s.genuine_mean = j.value("genuine_mean", s.genuine_mean);
    s.seed = j.value("seed", s.seed);
    if (j.contains("target_eer_pct")) {
        const double target = j.at("target_eer_pct").get<double>() / 100.0;
        s.genuine_sd = s.impostor_sd;
        s.genuine_mean = s.impostor_mean + calibrate_to_eer(target, s.impostor_sd);
    }
    const std::string protocol = j.value("protocol", std::string("first_sample"));
    if (protocol == "first_sample") {
        s.protocol = ImpostorProtocol::FirstSampleVsAll;
    } else if (protocol == "all_samples") {
        s.protocol = ImpostorProtocol::AllSamplesVsAll;
    } else {
        throw Error(ErrorKind::Validation, "unknown impostor protocol '" + protocol + "'");
    }
    if (j.contains("outliers")) {
        const auto& o = j.at("outliers");
        OutlierSpec out;
        out.count = o.value("count", out.count);
        out.multiplier = o.value("multiplier", out.multiplier);
        out.population = parse_population(o.value("population", std::string("impostor")));
        s.outliers = out;
    }
    return s;
}

inline Polarity parse_polarity(const std::string& s) {
    if (s == "similarity") return Polarity::Similarity;
    if (s == "distance") return Polarity::Distance;
    throw Error(ErrorKind::Validation, "unknown polarity '" + s + "'");
}

inline Source parse_source(const nlohmann::json& j, const std::filesystem::path& base) {
    if (j.contains("file")) {
        FileSource f;
        f.path = j.at("file").get<std::string>();
        if (f.path.is_relative()) f.path = base / f.path;
        f.polarity = parse_polarity(j.value("polarity", std::string("similarity")));
        return f;
    }
    if (j.contains("synth")) return parse_synth(j.at("synth"));
    throw Error(ErrorKind::Validation, "modality source needs a 'file' or 'synth' entry");
}

}  // namespace detail

/// Parses a scenario config. Relative score-file paths resolve against `base`.
inline ScenarioConfig parse_config(std::string_view text, const std::filesystem::path& base = {}) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::ParseError, std::string("config: ") + e.what());
    }
    try {
        ScenarioConfig cfg;
        cfg.name = j.value("name", cfg.name);
        if (!j.contains("modality_a") || !j.contains("modality_b")) {
            throw Error(ErrorKind::Validation, "config needs modality_a and modality_b");
        }
        cfg.modality_a = detail::parse_source(j.at("modality_a"), base);
        cfg.modality_b = detail::parse_source(j.at("modality_b"), base);
        if (j.contains("normalizations")) {
            cfg.normalizations.clear();
            for (const auto& n : j.at("normalizations")) {
                auto m = parse_norm_method(n.get<std::string>());
                if (!m) throw Error(ErrorKind::Validation, "unknown normalization " + n.dump());
                cfg.normalizations.push_back(*m);
            }
        }
        if (j.contains("fusions")) {
            cfg.fusions.clear();
            for (const auto& f : j.at("fusions")) {
                auto r = parse_fusion_rule(f.get<std::string>());
                if (!r) throw Error(ErrorKind::Validation, "unknown fusion rule " + f.dump());
                cfg.fusions.push_back(*r);
            }
        }
        if (j.contains("weights")) {
            const auto& w = j.at("weights");
            if (w.is_string()) {
                if (w.get<std::string>() != "from_eer") {
                    throw Error(ErrorKind::Validation, "unknown weights mode " + w.dump());
                }
            } else if (w.contains("explicit")) {
                cfg.weights.mode = WeightsConfig::Mode::Explicit;
                cfg.weights.values = w.at("explicit").get<std::vector<double>>();
            } else if (w.contains("per_subject")) {
                cfg.weights.mode = WeightsConfig::Mode::PerSubject;
                cfg.weights.overrides = w.at("per_subject").get<std::string>();
                if (cfg.weights.overrides.is_relative()) {
                    cfg.weights.overrides = base / cfg.weights.overrides;
                }
                cfg.weights.values = w.value("global", std::vector<double>{});
            } else {
                throw Error(ErrorKind::Validation, "unknown weights entry " + w.dump());
            }
        }
        if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        cfg.correlation = j.value("correlation", cfg.correlation);
        cfg.histogram_bins = j.value("histogram_bins", cfg.histogram_bins);
        cfg.plots = j.value("plots", cfg.plots);
        cfg.write_fused_scores = j.value("write_fused_scores", cfg.write_fused_scores);
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Validation, std::string("config: ") + e.what());
    }
}

inline ScenarioConfig read_config(const std::filesystem::path& path) {
    return parse_config(io::read_file(path), path.parent_path());
}

/// Loads or generates both modalities. Two synthetic sources are drawn as a
/// correlated pair from one stream; a single synthetic source uses its own seed,
/// derived from the scenario seed when one is set.
inline std::pair<ScoreSet, ScoreSet> load_sources(
    const ScenarioConfig& cfg, std::vector<std::pair<std::string, std::string>>& provenance) {
    auto* sa = std::get_if<SynthSpec>(&cfg.modality_a);
    auto* sb = std::get_if<SynthSpec>(&cfg.modality_b);
    auto describe = [](const SynthSpec& s) {
        return "synthetic " + std::to_string(s.n_subjects) + "x" +
               std::to_string(s.n_samples_per_subject) + " genuine N(" +
               io::format_sig(s.genuine_mean, 9) + ", " + io::format_sig(s.genuine_sd, 9) +
               ") impostor N(" + io::format_sig(s.impostor_mean, 9) + ", " +
               io::format_sig(s.impostor_sd, 9) + ")";
    };
    if (sa && sb) {
        SynthSpec a = *sa;
        a.correlation = cfg.correlation;
        const std::uint64_t seed = cfg.seed.value_or(a.seed);
        provenance.emplace_back("modality_a", describe(a));
        provenance.emplace_back("modality_b", describe(*sb));
        provenance.emplace_back("seed", std::to_string(seed));
        provenance.emplace_back("correlation", io::format_sig(cfg.correlation, 6));
        return generate_pair(a, *sb, seed);
    }
    auto load = [&](const Source& src, std::uint64_t stream, const char* key) {
        if (const auto* f = std::get_if<FileSource>(&src)) {
            const std::string text = io::read_file(f->path);
            provenance.emplace_back(key, f->path.string() + " fnv1a64=" +
                                             io::hex64(io::fnv1a(text)) +
                                             (f->polarity == Polarity::Distance ? " distance" : ""));
            return io::parse_scores(text, f->path.string(), f->polarity);
        }
        SynthSpec s = std::get<SynthSpec>(src);
        if (cfg.seed) s.seed = derive_seed(*cfg.seed, stream);
        provenance.emplace_back(key, describe(s) + " seed " + std::to_string(s.seed));
        return generate(s);
    };
    ScoreSet a = load(cfg.modality_a, 0, "modality_a");
    ScoreSet b = load(cfg.modality_b, 1, "modality_b");
    return {std::move(a), std::move(b)};
}

/// Runs one configured scenario end to end and writes its outputs.
inline ScenarioReport run_scenario(ScenarioConfig cfg) {
    validate(cfg);
    std::vector<std::pair<std::string, std::string>> provenance;
    provenance.emplace_back("tool_version", std::string(kToolVersion));
    auto [a, b] = load_sources(cfg, provenance);
    auto outcome = evaluate_scenario(cfg.name, a, b, cfg.normalizations, cfg.fusions, cfg.weights);
    outcome.report.provenance = std::move(provenance);
    write_scenario(outcome, a, b, cfg.output_dir, cfg.histogram_bins, cfg.plots,
                   cfg.write_fused_scores);
    return std::move(outcome.report);
}

// ---------------------------------------------------------------------------
// Built-in four-scenario suite on calibrated synthetic data.

struct DatasetPlan {
    std::string name;
    double target_eer;  // fraction
    double impostor_mean;
    double sd;
};

/// Fingerprint sets on a comparator-like scale (~tens), finger-vein sets on a
/// correlation-like scale (~0.1), so normalization has real work to do.
inline const std::vector<DatasetPlan>& paper_datasets() {
    static const std::vector<DatasetPlan> plans = {
        {"FP_DS1", 0.0086, 20.0, 6.0},
        {"FP_DS2", 0.0101, 20.0, 6.0},
        {"FV_DS1", 0.0071, 0.15, 0.04},
        {"FV_DS2", 0.0735, 0.15, 0.04},
    };
    return plans;
}

inline constexpr std::pair<int, int> kPaperScenarios[] = {{0, 2}, {0, 3}, {1, 2}, {1, 3}};

struct SuiteOptions {
    std::uint64_t seed = 42;
    std::size_t n_subjects = 100;
    std::size_t n_samples = 50;
    std::filesystem::path output_dir = "paper-suite";
    std::size_t histogram_bins = 50;
    bool plots = false;
    bool write_fused_scores = true;
    bool write_outputs = true;
};

struct SuiteResult {
    std::vector<ScenarioReport> reports;
    std::vector<ScoreSet> datasets;
};

inline std::vector<ScoreSet> generate_paper_datasets(const SuiteOptions& opt) {
    std::vector<ScoreSet> out;
    const auto& plans = paper_datasets();
    for (std::size_t i = 0; i < plans.size(); ++i) {
        const auto& p = plans[i];
        out.push_back(generate(spec_for_eer(p.name, p.target_eer, p.impostor_mean, p.sd,
                                            opt.n_subjects, opt.n_samples, derive_seed(opt.seed, i))));
    }
    return out;
}

/// Table-3-shaped summary: one row per scenario.
inline std::string format_suite_summary_csv(const std::vector<ScenarioReport>& reports) {
    std::string out =
        "scenario,fingerprint,finger_vein,fingerprint_eer_pct,finger_vein_eer_pct,fused_eer_pct,"
        "improvement_pct,method\n";
    for (const auto& r : reports) {
        const auto& best = r.best_cell();
        out += r.name + "," + r.modality_a + "," + r.modality_b + "," + format_pct(r.eer_a.eer) +
               "," + format_pct(r.eer_b.eer) + "," + format_pct(best.result.eer) + "," +
               (r.improvement_pct ? io::format_sig(*r.improvement_pct, 6) : std::string("n/a")) +
               "," + std::string(to_string(best.normalization)) + "+" +
               std::string(to_string(best.fusion)) + "\n";
    }
    return out;
}

inline std::string format_suite_summary_table(const std::vector<ScenarioReport>& reports,
                                              const SuiteOptions& opt) {
    std::string out = "# seed: " + std::to_string(opt.seed) + "\n";
    out += "# tool_version: " + std::string(kToolVersion) + "\n";
    if (!reports.empty()) {
        out += "# trials per dataset: " + std::to_string(reports.front().genuine_trials) +
               " genuine, " + std::to_string(reports.front().impostor_trials) + " impostor\n";
    }
    out += "\nScenario      Fingerprint   Finger-vein   Fusion        Improvement (method)\n";
    for (const auto& r : reports) {
        const auto& best = r.best_cell();
        auto col = [](std::string s) {
            if (s.size() < 14) s.append(14 - s.size(), ' ');
            return s;
        };
        out += col(r.name) + col(format_pct(r.eer_a.eer) + " %") + col(format_pct(r.eer_b.eer) + " %") +
               col(format_pct(best.result.eer) + " %") +
               (r.improvement_pct ? io::format_sig(*r.improvement_pct, 6) + " %" : std::string("n/a")) +
               " (" + std::string(to_string(best.normalization)) + "+" +
               std::string(to_string(best.fusion)) + ")\n";
    }
    return out;
}

/// Generates FP_DS1, FP_DS2, FV_DS1, FV_DS2 once and evaluates the four
/// fingerprint x finger-vein pairings over the full method grid.
inline SuiteResult run_paper_suite(const SuiteOptions& opt) {
    SuiteResult result;
    result.datasets = generate_paper_datasets(opt);
    const auto& plans = paper_datasets();
    int index = 0;
    for (auto [fp, fv] : kPaperScenarios) {
        ++index;
        const auto& a = result.datasets[static_cast<std::size_t>(fp)];
        const auto& b = result.datasets[static_cast<std::size_t>(fv)];
        const std::string name = "scenario_" + std::to_string(index);
        auto outcome = evaluate_scenario(
            name, a, b, {std::begin(kAllNormMethods), std::end(kAllNormMethods)},
            {std::begin(kAllFusionRules), std::end(kAllFusionRules)}, WeightsConfig{});
        auto& prov = outcome.report.provenance;
        prov.emplace_back("tool_version", std::string(kToolVersion));
        prov.emplace_back("suite_seed", std::to_string(opt.seed));
        for (int d : {fp, fv}) {
            const auto& p = plans[static_cast<std::size_t>(d)];
            prov.emplace_back(p.name, "target EER " + format_pct(p.target_eer) + "%, seed " +
                                          std::to_string(derive_seed(opt.seed, static_cast<std::uint64_t>(d))));
        }
        if (opt.write_outputs) {
            write_scenario(outcome, a, b, opt.output_dir / name, opt.histogram_bins, opt.plots,
                           opt.write_fused_scores);
        }
        result.reports.push_back(std::move(outcome.report));
    }
    if (opt.write_outputs) {
        for (const auto& d : result.datasets) {
            io::write_scores(opt.output_dir / "datasets" / (d.modality() + ".csv"), d);
        }
        io::write_file(opt.output_dir / "summary.csv", format_suite_summary_csv(result.reports));
        io::write_file(opt.output_dir / "summary.txt",
                       format_suite_summary_table(result.reports, opt));
    }
    return result;
}

}  // namespace scorefusion
