#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "scorefusion/error.hpp"
#include "scorefusion/score_model.hpp"

namespace scorefusion {

/// splitmix64 finalizer applied to seed + stream * golden gamma.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + (stream + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Standard normal draws: Box-Muller over std::mt19937_64, which unlike the
/// standard distributions produces the same sequence on every platform.
class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (spare_) {
            double z = *spare_;
            spare_.reset();
            return z;
        }
        constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
        const double u1 = static_cast<double>((engine_() >> 11) + 1) * kScale;  // (0, 1]
        const double u2 = static_cast<double>(engine_() >> 11) * kScale;        // [0, 1)
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(angle);
        return r * std::cos(angle);
    }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Inverse standard normal CDF: Acklam's rational approximation followed by one
/// Halley step against erfc, good to ~1e-15 relative. The upper half is solved
/// through the lower tail by symmetry; 1 - p is exact there.
inline double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw Error(ErrorKind::OutOfRange, "inverse normal CDF needs p in (0, 1)");
    }
    if (p > 0.5) return -inverse_normal_cdf(1.0 - p);
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double kLow = 0.02425;

    double x;
    if (p < kLow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - kLow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

/// Mean separation d of two equal-variance normal populations with the given EER:
/// EER = Phi(-d / (2 sd))  =>  d = -2 sd Phi^-1(EER).
inline double calibrate_to_eer(double target_eer, double sd = 1.0) {
    if (!(target_eer > 0.0 && target_eer <= 0.5)) {
        throw Error(ErrorKind::OutOfRange, "target EER must lie in (0, 0.5]");
    }
    if (!(sd > 0.0) || !std::isfinite(sd)) {
        throw Error(ErrorKind::OutOfRange, "population SD must be positive");
    }
    if (target_eer == 0.5) return 0.0;
    return -2.0 * sd * inverse_normal_cdf(target_eer);
}

enum class ImpostorProtocol {
    FirstSampleVsAll,  // sample 1 of each probe subject vs every other gallery subject
    AllSamplesVsAll,   // every probe sample vs every other gallery subject
};

struct OutlierSpec {
    std::size_t count = 0;
    double multiplier = 10.0;  // outlier value = multiplier * max |score|
    Population population = Population::Impostor;
};

struct SynthSpec {
    std::string modality = "SYNTH";
    std::size_t n_subjects = 100;
    std::size_t n_samples_per_subject = 5;
    double genuine_mean = 1.0;
    double genuine_sd = 1.0;
    double impostor_mean = 0.0;
    double impostor_sd = 1.0;
    ImpostorProtocol protocol = ImpostorProtocol::FirstSampleVsAll;
    std::optional<OutlierSpec> outliers;
    std::uint64_t seed = 0;
    double correlation = 0.0;  // used by generate_pair

    std::size_t genuine_trials() const { return n_subjects * n_samples_per_subject; }
    std::size_t impostor_trials() const {
        const std::size_t probes = protocol == ImpostorProtocol::FirstSampleVsAll
                                       ? n_subjects
                                       : n_subjects * n_samples_per_subject;
        return n_subjects ? probes * (n_subjects - 1) : 0;
    }
};

/// Spec with impostors N(impostor_mean, sd) and genuine mean placed so the
/// population EER equals `target_eer`.
inline SynthSpec spec_for_eer(std::string modality, double target_eer, double impostor_mean,
                              double sd, std::size_t n_subjects, std::size_t n_samples,
                              std::uint64_t seed) {
    SynthSpec s;
    s.modality = std::move(modality);
    s.n_subjects = n_subjects;
    s.n_samples_per_subject = n_samples;
    s.impostor_mean = impostor_mean;
    s.impostor_sd = sd;
    s.genuine_sd = sd;
    s.genuine_mean = impostor_mean + calibrate_to_eer(target_eer, sd);
    s.seed = seed;
    return s;
}

inline void validate(const SynthSpec& s) {
    auto fail = [&](const std::string& why) {
        throw Error(ErrorKind::InvalidSpec, "synth spec " + s.modality + ": " + why);
    };
    if (s.n_subjects < 2) fail("need at least 2 subjects");
    if (s.n_samples_per_subject < 1) fail("need at least 1 sample per subject");
    if (!(s.genuine_sd > 0.0) || !(s.impostor_sd > 0.0)) fail("SDs must be positive");
    if (!std::isfinite(s.genuine_mean) || !std::isfinite(s.impostor_mean) ||
        !std::isfinite(s.genuine_sd) || !std::isfinite(s.impostor_sd)) {
        fail("parameters must be finite");
    }
    if (!(s.genuine_mean > s.impostor_mean)) fail("genuine mean must exceed impostor mean");
    if (!(s.correlation >= -1.0 && s.correlation <= 1.0)) fail("correlation must lie in [-1, 1]");
    if (s.outliers) {
        if (!std::isfinite(s.outliers->multiplier)) fail("outlier multiplier must be finite");
        const std::size_t pool = s.outliers->population == Population::Genuine ? s.genuine_trials()
                                 : s.outliers->population == Population::Impostor
                                     ? s.impostor_trials()
                                     : s.genuine_trials() + s.impostor_trials();
        if (s.outliers->count > pool) fail("more outliers than trials in the population");
    }
}

namespace detail {

inline std::string padded(char prefix, std::size_t value, std::size_t upper) {
    std::string digits = std::to_string(value);
    const std::size_t width = std::max<std::size_t>(3, std::to_string(upper).size());
    return std::string(1, prefix) + std::string(width - digits.size(), '0') + digits;
}

/// Trials in draw order: genuine (subject-major), then impostors (probe-major).
inline std::vector<Trial> enumerate_trials(const SynthSpec& s) {
    std::vector<Trial> trials;
    trials.reserve(s.genuine_trials() + s.impostor_trials());
    auto subject = [&](std::size_t i) { return padded('s', i + 1, s.n_subjects); };
    auto sample = [&](std::size_t k) { return padded('a', k + 1, s.n_samples_per_subject); };
    for (std::size_t i = 0; i < s.n_subjects; ++i) {
        for (std::size_t k = 0; k < s.n_samples_per_subject; ++k) {
            trials.push_back({subject(i), sample(k), subject(i)});
        }
    }
    const std::size_t probe_samples =
        s.protocol == ImpostorProtocol::FirstSampleVsAll ? 1 : s.n_samples_per_subject;
    for (std::size_t i = 0; i < s.n_subjects; ++i) {
        for (std::size_t k = 0; k < probe_samples; ++k) {
            for (std::size_t j = 0; j < s.n_subjects; ++j) {
                if (j != i) trials.push_back({subject(i), sample(k), subject(j)});
            }
        }
    }
    return trials;
}

inline void inject_outliers(const SynthSpec& s, std::vector<ScoreEntry>& entries,
                            std::uint64_t seed) {
    if (!s.outliers || s.outliers->count == 0) return;
    double peak = 0.0;
    for (const auto& e : entries) peak = std::max(peak, std::abs(e.score));
    const double value = s.outliers->multiplier * peak;

    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const Label l = label(entries[i].trial);
        const bool in = s.outliers->population == Population::Both ||
                        (s.outliers->population == Population::Genuine && l == Label::Genuine) ||
                        (s.outliers->population == Population::Impostor && l == Label::Impostor);
        if (in) pool.push_back(i);
    }
    std::mt19937_64 pick(derive_seed(seed, 0x6f75746c));
    for (std::size_t n = 0; n < s.outliers->count; ++n) {
        // partial Fisher-Yates; modulo bias is irrelevant at these pool sizes
        const std::size_t j = n + static_cast<std::size_t>(pick() % (pool.size() - n));
        std::swap(pool[n], pool[j]);
        entries[pool[n]].score = value;
    }
}

}  // namespace detail

/// Draws one modality. Identical specs give bit-identical score sets.
inline ScoreSet generate(const SynthSpec& spec) {
    validate(spec);
    auto trials = detail::enumerate_trials(spec);
    NormalSource normal(spec.seed);
    std::vector<ScoreEntry> entries;
    entries.reserve(trials.size());
    for (auto& t : trials) {
        const double z = normal.next();
        const bool genuine = label(t) == Label::Genuine;
        const double score = genuine ? spec.genuine_mean + spec.genuine_sd * z
                                     : spec.impostor_mean + spec.impostor_sd * z;
        entries.push_back({std::move(t), score});
    }
    detail::inject_outliers(spec, entries, spec.seed);
    return ScoreSet(spec.modality, std::move(entries));
}

/// Draws two modalities over the same trials with per-trial score correlation
/// `correlation` (taken from `a`). Both specs must share the trial protocol.
inline std::pair<ScoreSet, ScoreSet> generate_pair(const SynthSpec& a, const SynthSpec& b,
                                                   std::uint64_t seed) {
    validate(a);
    validate(b);
    if (a.n_subjects != b.n_subjects || a.n_samples_per_subject != b.n_samples_per_subject ||
        a.protocol != b.protocol) {
        throw Error(ErrorKind::InvalidSpec, "paired modalities must share the trial protocol");
    }
    const double rho = a.correlation;
    const double rest = std::sqrt(1.0 - rho * rho);
    auto trials = detail::enumerate_trials(a);
    NormalSource normal(seed);
    std::vector<ScoreEntry> ea, eb;
    ea.reserve(trials.size());
    eb.reserve(trials.size());
    for (const auto& t : trials) {
        const double z1 = normal.next();
        const double z2 = rho * z1 + rest * normal.next();
        if (label(t) == Label::Genuine) {
            ea.push_back({t, a.genuine_mean + a.genuine_sd * z1});
            eb.push_back({t, b.genuine_mean + b.genuine_sd * z2});
        } else {
            ea.push_back({t, a.impostor_mean + a.impostor_sd * z1});
            eb.push_back({t, b.impostor_mean + b.impostor_sd * z2});
        }
    }
    detail::inject_outliers(a, ea, derive_seed(seed, 1));
    detail::inject_outliers(b, eb, derive_seed(seed, 2));
    return {ScoreSet(a.modality, std::move(ea)), ScoreSet(b.modality, std::move(eb))};
}

}  // namespace scorefusion
