// scorefusion: score-level fusion of biometric comparison scores.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scorefusion/scorefusion.hpp"

namespace fs = std::filesystem;
using namespace scorefusion;

namespace {

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string format = "table";
    std::string polarity = "similarity";
    bool plots = false;
};

Polarity polarity_of(const GlobalOptions& g) {
    return g.polarity == "distance" ? Polarity::Distance : Polarity::Similarity;
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        io::write_file(out, text);
    }
}

std::string stats_output(const ScoreSet& set, const std::string& format) {
    const auto s = compute_stats(set);
    const std::pair<const char*, const PopulationStats*> pops[] = {
        {"genuine", &s.genuine}, {"impostor", &s.impostor}, {"both", &s.both}};
    std::string out;
    if (format == "csv") {
        out = "population,count,min,max,mean,sd\n";
        for (auto [name, p] : pops) {
            out += std::string(name) + "," + std::to_string(p->count) + "," +
                   io::format_sig(p->min, 9) + "," + io::format_sig(p->max, 9) + "," +
                   io::format_sig(p->mean, 9) + "," + io::format_sig(p->sd, 9) + "\n";
        }
        return out;
    }
    out = "modality: " + set.modality() + "\n";
    for (auto [name, p] : pops) {
        out += std::string(name) + " (n=" + std::to_string(p->count) + ")\n";
        out += "  min  " + io::format_sig(p->min, 9) + "\n";
        out += "  max  " + io::format_sig(p->max, 9) + "\n";
        out += "  mean " + io::format_sig(p->mean, 9) + "\n";
        out += "  sd   " + io::format_sig(p->sd, 9) + "\n";
    }
    return out;
}

std::string modality_base(const std::string& modality) {
    return modality.substr(0, modality.find(':'));
}

bool is_normalized(const std::string& modality) {
    auto pos = modality.rfind(':');
    return pos != std::string::npos && parse_norm_method(modality.substr(pos + 1)).has_value();
}

std::string eer_line(const ScoreSet& set, const EerResult& e, const std::string& format) {
    if (format == "csv") {
        return set.modality() + "," + format_pct(e.eer) + "," + std::string(to_string(e.method)) +
               "," + io::format_sig(e.threshold, 9) + "\n";
    }
    std::string out = set.modality() + ": EER " + format_pct(e.eer) + "% (" +
                      std::string(to_string(e.method)) + ", threshold " +
                      io::format_sig(e.threshold, 9) + ", " +
                      std::to_string(set.count(Label::Genuine)) + " genuine / " +
                      std::to_string(set.count(Label::Impostor)) + " impostor)\n";
    if (!e.warning.empty()) out += "  warning: " + e.warning + "\n";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Score-level fusion and verification evaluation for multibiometric scores"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(kToolVersion));

    GlobalOptions g;
    app.add_option("--seed", g.seed, "Random seed (overrides config)");
    app.add_option("--out-dir", g.out_dir, "Output directory");
    app.add_option("--format", g.format, "Console output format")
        ->check(CLI::IsMember({"csv", "table"}));
    app.add_option("--polarity", g.polarity, "Polarity of input score files")
        ->check(CLI::IsMember({"similarity", "distance"}));
    app.add_flag("--plots", g.plots, "Also render SVG plots");

    // stats
    auto* stats = app.add_subcommand("stats", "Print genuine/impostor/combined score statistics");
    std::string stats_file;
    stats->add_option("file", stats_file, "Score CSV")->required();

    // normalize
    auto* norm = app.add_subcommand("normalize", "Normalize a score file");
    std::string norm_file, norm_method = "TanH", norm_fit, norm_out;
    norm->add_option("file", norm_file, "Score CSV")->required();
    norm->add_option("--method", norm_method, "MM, ZS or TanH")
        ->check(CLI::IsMember({"MM", "ZS", "TanH"}));
    norm->add_option("--fit", norm_fit, "Fit statistics on this file instead");
    norm->add_option("-o,--out", norm_out, "Output CSV (default stdout)");

    // fuse
    auto* fuse_cmd = app.add_subcommand("fuse", "Fuse aligned normalized score files");
    std::vector<std::string> fuse_files;
    std::string fuse_rule = "SS", fuse_weights_file, fuse_out;
    std::vector<double> fuse_weights;
    bool force_raw = false;
    fuse_cmd->add_option("files", fuse_files, "Score CSVs, one per modality")->required()->expected(2, -1);
    fuse_cmd->add_option("--rule", fuse_rule, "MinS, MaxS, SS or UW")
        ->check(CLI::IsMember({"MinS", "MaxS", "SS", "UW"}));
    fuse_cmd->add_option("--weights", fuse_weights, "Global weights for UW")->delimiter(',');
    fuse_cmd->add_option("--weights-file", fuse_weights_file, "Per-subject weight overrides CSV");
    fuse_cmd->add_flag("--force-raw", force_raw, "Allow fusing un-normalized scores");
    fuse_cmd->add_option("-o,--out", fuse_out, "Output CSV (default stdout)");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "EER of score files, optional curves and improvement");
    std::vector<std::string> eval_files, baselines;
    std::size_t bins = 50;
    bool curves = false;
    eval_cmd->add_option("files", eval_files, "Score CSVs")->required();
    eval_cmd->add_option("--baseline", baselines, "Unimodal score files for the improvement rate")
        ->expected(2);
    eval_cmd->add_flag("--curves", curves, "Write FAR/FRR, DET, ROC and histogram files");
    eval_cmd->add_option("--bins", bins, "Histogram bins")->check(CLI::PositiveNumber);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic score file");
    SynthSpec spec;
    std::optional<double> target_eer;
    std::optional<std::size_t> n_per_class;
    std::optional<std::size_t> subjects, samples;
    std::optional<double> genuine_mean;
    double sd = 1.0;
    std::string protocol = "first_sample", outlier_pop = "impostor", synth_out;
    std::size_t outlier_count = 0;
    double outlier_mult = 10.0;
    synth->add_option("--target-eer", target_eer, "Target EER as a fraction in (0, 0.5]");
    synth->add_option("--n", n_per_class, "Minimum trials per class");
    synth->add_option("--subjects", subjects, "Number of subjects");
    synth->add_option("--samples", samples, "Samples per subject");
    synth->add_option("--modality", spec.modality, "Modality id");
    synth->add_option("--impostor-mean", spec.impostor_mean, "Impostor mean");
    synth->add_option("--genuine-mean", genuine_mean, "Genuine mean (instead of --target-eer)");
    synth->add_option("--sd", sd, "Score SD of both populations");
    synth->add_option("--protocol", protocol, "Impostor trials")
        ->check(CLI::IsMember({"first_sample", "all_samples"}));
    synth->add_option("--outliers", outlier_count, "Number of outlier scores");
    synth->add_option("--outlier-mult", outlier_mult, "Outlier value as multiple of max |score|");
    synth->add_option("--outlier-population", outlier_pop, "Population receiving outliers")
        ->check(CLI::IsMember({"genuine", "impostor", "both"}));
    synth->add_option("-o,--out", synth_out, "Output CSV");

    // scenario
    auto* scen = app.add_subcommand("scenario", "Run a normalization x fusion scenario from a config");
    std::string config_file;
    scen->add_option("config", config_file, "Scenario JSON config")->required();

    // paper-suite
    auto* suite = app.add_subcommand("paper-suite", "Run the four built-in fingerprint/finger-vein scenarios");
    SuiteOptions suite_opt;
    suite->add_option("--subjects", suite_opt.n_subjects, "Subjects per dataset");
    suite->add_option("--samples", suite_opt.n_samples, "Samples per subject");
    suite->add_flag("!--no-fused-scores", suite_opt.write_fused_scores, "Skip per-cell fused score files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*stats) {
            std::cout << stats_output(io::read_scores(stats_file, polarity_of(g)), g.format);
        } else if (*norm) {
            const auto set = io::read_scores(norm_file, polarity_of(g));
            const auto stats_src = norm_fit.empty() ? set : io::read_scores(norm_fit, polarity_of(g));
            const Normalizer n(*parse_norm_method(norm_method), fit(stats_src));
            emit(io::format_scores(normalize_set(set, n)), norm_out);
        } else if (*fuse_cmd) {
            std::vector<ScoreSet> sets;
            for (const auto& f : fuse_files) sets.push_back(io::read_scores(f, polarity_of(g)));
            bool raw = false;
            for (const auto& s : sets) raw = raw || !is_normalized(s.modality());
            bool mixed = false;
            for (const auto& s : sets) {
                mixed = mixed || modality_base(s.modality()) != modality_base(sets[0].modality());
            }
            if (raw && mixed) {
                if (!force_raw) {
                    throw Error(ErrorKind::Validation,
                                "refusing to fuse raw scores of different modalities; normalize "
                                "first or pass --force-raw");
                }
                std::cerr << "warning: fusing raw scores assumes the comparators share scale, "
                             "distribution and strength\n";
            }
            const auto aligned = align(sets);
            const auto rule = *parse_fusion_rule(fuse_rule);
            std::optional<WeightVector> weights;
            if (rule == FusionRule::UserWeighted) {
                std::vector<double> global = fuse_weights;
                if (global.empty()) {
                    std::vector<double> eers;
                    for (const auto& s : sets) eers.push_back(eer(s).eer);
                    auto w = weights_from_eer(eers);
                    global.assign(w.global().begin(), w.global().end());
                }
                auto overrides = fuse_weights_file.empty()
                                     ? std::map<std::string, std::vector<double>>{}
                                     : io::read_weight_overrides(fuse_weights_file);
                weights.emplace(std::move(global), std::move(overrides));
            }
            emit(io::format_scores(fuse(aligned, rule, weights ? &*weights : nullptr)), fuse_out);
        } else if (*eval_cmd) {
            if (g.format == "csv") std::cout << "modality,eer_pct,eer_method,threshold\n";
            const fs::path dir = g.out_dir.empty() ? fs::path("curves") : fs::path(g.out_dir);
            std::vector<double> eers;
            for (const auto& f : eval_files) {
                const auto set = io::read_scores(f, polarity_of(g));
                const auto curve = sweep(set);
                const auto e = eer(curve);
                eers.push_back(e.eer);
                std::cout << eer_line(set, e, g.format);
                if (curves) {
                    export_curves(set, curve, dir, fs::path(f).stem().string(), bins, g.plots);
                }
            }
            if (!baselines.empty()) {
                const double a = eer(io::read_scores(baselines[0], polarity_of(g))).eer;
                const double b = eer(io::read_scores(baselines[1], polarity_of(g))).eer;
                for (std::size_t i = 0; i < eers.size(); ++i) {
                    std::cout << "improvement " << eval_files[i] << ": "
                              << io::format_sig(improvement(a, b, eers[i]), 6) << "%\n";
                }
            }
        } else if (*synth) {
            if (n_per_class) {
                const auto s = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(*n_per_class)))) + 1;
                spec.n_subjects = s;
                spec.n_samples_per_subject = (*n_per_class + s - 1) / s;
            }
            if (subjects) spec.n_subjects = *subjects;
            if (samples) spec.n_samples_per_subject = *samples;
            spec.protocol = protocol == "all_samples" ? ImpostorProtocol::AllSamplesVsAll
                                                      : ImpostorProtocol::FirstSampleVsAll;
            spec.genuine_sd = spec.impostor_sd = sd;
            if (target_eer) {
                spec.genuine_mean = spec.impostor_mean + calibrate_to_eer(*target_eer, sd);
            } else if (genuine_mean) {
                spec.genuine_mean = *genuine_mean;
            } else {
                throw Error(ErrorKind::Validation, "synth needs --target-eer or --genuine-mean");
            }
            spec.seed = g.seed.value_or(0);
            if (outlier_count > 0) {
                spec.outliers = OutlierSpec{outlier_count, outlier_mult,
                                            outlier_pop == "genuine" ? Population::Genuine
                                            : outlier_pop == "both"  ? Population::Both
                                                                     : Population::Impostor};
            }
            const auto set = generate(spec);
            std::string out = synth_out;
            if (out.empty()) out = (fs::path(g.out_dir.empty() ? "." : g.out_dir) / (spec.modality + ".csv")).string();
            io::write_scores(out, set);
            const auto e = eer(set);
            std::cout << "wrote " << out << " (" << set.count(Label::Genuine) << " genuine, "
                      << set.count(Label::Impostor) << " impostor)\n"
                      << "eer=" << io::format_sig(e.eer, 6) << " (" << format_pct(e.eer) << "%)\n";
        } else if (*scen) {
            auto cfg = read_config(config_file);
            if (g.seed) cfg.seed = g.seed;
            if (!g.out_dir.empty()) cfg.output_dir = g.out_dir;
            if (g.plots) cfg.plots = true;
            const auto report = run_scenario(cfg);
            std::cout << (g.format == "csv" ? format_report_csv(report) : format_report_table(report));
        } else if (*suite) {
            if (g.seed) suite_opt.seed = *g.seed;
            if (!g.out_dir.empty()) suite_opt.output_dir = g.out_dir;
            suite_opt.plots = g.plots;
            const auto result = run_paper_suite(suite_opt);
            std::cout << (g.format == "csv" ? format_suite_summary_csv(result.reports)
                                            : format_suite_summary_table(result.reports, suite_opt));
        }
    } catch (const Error& e) {
        std::cerr << "error kind=" << to_string(e.kind()) << " message=\"" << e.what() << "\"\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error kind=Internal message=\"" << e.what() << "\"\n";
        return 1;
    }
    return 0;
}
