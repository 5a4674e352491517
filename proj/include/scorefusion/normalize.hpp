#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scorefusion/error.hpp"
#include "scorefusion/score_model.hpp"

namespace scorefusion {

enum class NormMethod { MinMax, ZScore, TanH };

inline constexpr NormMethod kAllNormMethods[] = {NormMethod::MinMax, NormMethod::ZScore,
                                                 NormMethod::TanH};

inline std::string_view to_string(NormMethod m) {
    switch (m) {
        case NormMethod::MinMax: return "MM";
        case NormMethod::ZScore: return "ZS";
        case NormMethod::TanH: return "TanH";
    }
    return "?";
}

inline std::optional<NormMethod> parse_norm_method(std::string_view name) {
    if (name == "MM" || name == "minmax" || name == "MinMax") return NormMethod::MinMax;
    if (name == "ZS" || name == "zscore" || name == "ZScore") return NormMethod::ZScore;
    if (name == "TanH" || name == "tanh") return NormMethod::TanH;
    return std::nullopt;
}

/// Scale factor inside the tanh estimator.
inline constexpr double kTanhSpread = 0.01;

/// S' = (S - min_B) / (max_B - min_B)
inline double min_max(double s, const DistributionStats& stats) {
    const double lo = stats.both.min;
    const double hi = stats.both.max;
    if (!(hi > lo)) throw Error(ErrorKind::DegenerateRange, "min-max: max_B == min_B");
    return (s - lo) / (hi - lo);
}

/// S' = (S - mean_I) / sd_I
inline double z_score(double s, const DistributionStats& stats) {
    if (!(stats.impostor.sd > 0.0)) throw Error(ErrorKind::ZeroVariance, "z-score: sd_I == 0");
    return (s - stats.impostor.mean) / stats.impostor.sd;
}

namespace detail {

/// 0.5 * (tanh(x) + 1), evaluated as the equivalent logistic 1 / (1 + e^-2x) so the
/// lower tail keeps its precision, and held inside the open interval (0, 1)
/// where the exact value is closer to an endpoint than a double can express.
inline double half_tanh(double x) {
    const double v = x >= 0.0 ? 1.0 / (1.0 + std::exp(-2.0 * x))
                              : std::exp(2.0 * x) / (1.0 + std::exp(2.0 * x));
    return std::clamp(v, std::numeric_limits<double>::denorm_min(), std::nextafter(1.0, 0.0));
}

}  // namespace detail

/// S' = 0.5 * (tanh(0.01 * (S - mean_G) / sd_B) + 1), in the open interval (0, 1).
inline double tanh_norm(double s, const DistributionStats& stats) {
    if (!(stats.both.sd > 0.0)) throw Error(ErrorKind::ZeroVariance, "tanh: sd_B == 0");
    return detail::half_tanh(kTanhSpread * (s - stats.genuine.mean) / stats.both.sd);
}

/// Which populations feed a method's location and scale parameters.
/// MinMax reads both its endpoints from `location`.
struct StatsSelection {
    Population location;
    Population scale;

    static StatsSelection defaults(NormMethod m) {
        switch (m) {
            case NormMethod::MinMax: return {Population::Both, Population::Both};
            case NormMethod::ZScore: return {Population::Impostor, Population::Impostor};
            case NormMethod::TanH: return {Population::Genuine, Population::Both};
        }
        return {Population::Both, Population::Both};
    }
};

/// Statistics snapshot of one modality; parameters for every normalization of it.
inline DistributionStats fit(const ScoreSet& set) { return compute_stats(set); }

/// A normalization method frozen to the statistics it was fit on.
class Normalizer {
public:
    Normalizer(NormMethod method, const DistributionStats& stats)
        : Normalizer(method, stats, StatsSelection::defaults(method)) {}

    Normalizer(NormMethod method, const DistributionStats& stats, StatsSelection selection)
        : method_(method), stats_(stats), selection_(selection) {
        const auto& loc = stats_.of(selection_.location);
        const auto& scale = stats_.of(selection_.scale);
        switch (method_) {
            case NormMethod::MinMax:
                lo_ = loc.min;
                width_ = loc.max - loc.min;
                if (!(width_ > 0.0)) {
                    throw Error(ErrorKind::DegenerateRange,
                                "min-max needs max > min over the " +
                                    std::string(to_string(selection_.location)) + " population");
                }
                break;
            case NormMethod::ZScore:
            case NormMethod::TanH:
                lo_ = loc.mean;
                width_ = scale.sd;
                if (!(width_ > 0.0)) {
                    throw Error(ErrorKind::ZeroVariance,
                                std::string(to_string(method_)) + " needs a non-zero SD over the " +
                                    std::string(to_string(selection_.scale)) + " population");
                }
                break;
        }
    }

    NormMethod method() const noexcept { return method_; }
    const DistributionStats& stats() const noexcept { return stats_; }
    StatsSelection selection() const noexcept { return selection_; }

    double operator()(double s) const {
        switch (method_) {
            case NormMethod::MinMax:
            case NormMethod::ZScore:
                return (s - lo_) / width_;
            case NormMethod::TanH:
                return detail::half_tanh(kTanhSpread * (s - lo_) / width_);
        }
        return s;
    }

private:
    NormMethod method_;
    DistributionStats stats_;
    StatsSelection selection_;
    double lo_ = 0.0;
    double width_ = 1.0;
};

/// Modality id of a normalized set: "<modality>:<method>".
inline std::string normalized_modality(std::string_view modality, NormMethod m) {
    return std::string(modality) + ":" + std::string(to_string(m));
}

inline ScoreSet normalize_set(const ScoreSet& set, const Normalizer& norm) {
    std::vector<ScoreEntry> out;
    out.reserve(set.size());
    for (const auto& e : set.entries()) {
        double v = norm(e.score);
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::NonFiniteScore,
                        "normalization overflowed for trial " + to_string(e.trial));
        }
        out.push_back({e.trial, v});
    }
    return ScoreSet(normalized_modality(set.modality(), norm.method()), std::move(out));
}

/// Fits on `set` and normalizes it with the default statistics selection.
inline ScoreSet normalize_set(const ScoreSet& set, NormMethod method) {
    return normalize_set(set, Normalizer(method, fit(set)));
}

}  // namespace scorefusion
