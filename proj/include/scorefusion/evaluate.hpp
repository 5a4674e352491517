#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scorefusion/error.hpp"
#include "scorefusion/score_model.hpp"

namespace scorefusion {

/// Operating point at one threshold. A trial is accepted iff score >= threshold.
struct CurvePoint {
    double threshold = 0.0;
    double far = 0.0;
    double frr = 0.0;
    std::size_t false_accepts = 0;  // impostors with score >= threshold
    std::size_t false_rejects = 0;  // genuine with score < threshold
};

/// FAR/FRR over increasing thresholds: far non-increasing, frr non-decreasing.
struct ErrorCurve {
    std::vector<CurvePoint> points;
    std::size_t genuine_count = 0;
    std::size_t impostor_count = 0;
};

enum class EerMethod { ExactCrossing, Interpolated, Midpoint, NoCrossing };

inline std::string_view to_string(EerMethod m) {
    switch (m) {
        case EerMethod::ExactCrossing: return "exact_crossing";
        case EerMethod::Interpolated: return "interpolated";
        case EerMethod::Midpoint: return "midpoint";
        case EerMethod::NoCrossing: return "no_crossing";
    }
    return "?";
}

struct EerResult {
    double eer = 0.0;  // fraction
    double threshold = 0.0;
    EerMethod method = EerMethod::Interpolated;
    std::string warning;  // empty unless no crossing or eer > 0.5
};

/// Threshold sweep over every distinct score plus one sentinel above the maximum.
inline ErrorCurve sweep(std::span<const double> genuine_scores,
                        std::span<const double> impostor_scores) {
    if (genuine_scores.empty() || impostor_scores.empty()) {
        throw Error(ErrorKind::EmptyPopulation,
                    "sweep needs at least one genuine and one impostor score");
    }
    std::vector<double> gen(genuine_scores.begin(), genuine_scores.end());
    std::vector<double> imp(impostor_scores.begin(), impostor_scores.end());
    std::sort(gen.begin(), gen.end());
    std::sort(imp.begin(), imp.end());

    std::vector<double> thresholds;
    thresholds.reserve(gen.size() + imp.size() + 1);
    std::merge(gen.begin(), gen.end(), imp.begin(), imp.end(), std::back_inserter(thresholds));
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    const double lo = thresholds.front();
    const double hi = thresholds.back();
    const double pad = hi > lo ? hi - lo : std::max(1.0, std::abs(hi));
    thresholds.push_back(hi + pad);

    ErrorCurve curve;
    curve.genuine_count = gen.size();
    curve.impostor_count = imp.size();
    curve.points.reserve(thresholds.size());
    const double ng = static_cast<double>(gen.size());
    const double ni = static_cast<double>(imp.size());
    std::size_t g_below = 0;
    std::size_t i_below = 0;
    for (double t : thresholds) {
        while (g_below < gen.size() && gen[g_below] < t) ++g_below;
        while (i_below < imp.size() && imp[i_below] < t) ++i_below;
        CurvePoint p;
        p.threshold = t;
        p.false_rejects = g_below;
        p.false_accepts = imp.size() - i_below;
        p.frr = static_cast<double>(p.false_rejects) / ng;
        p.far = static_cast<double>(p.false_accepts) / ni;
        curve.points.push_back(p);
    }
    return curve;
}

inline ErrorCurve sweep(const ScoreSet& set) {
    return sweep(set.scores(Label::Genuine), set.scores(Label::Impostor));
}

/// Equal error rate from a sweep. Between the last point with FAR > FRR and the
/// first with FAR < FRR both rates are interpolated linearly and their crossing is
/// returned. An exact FAR == FRR point wins; a run of such points yields the run's
/// midpoint threshold.
inline EerResult eer(const ErrorCurve& curve) {
    const auto& pts = curve.points;
    if (pts.empty()) throw Error(ErrorKind::EmptyPopulation, "empty error curve");

    auto diff = [&](std::size_t i) { return pts[i].far - pts[i].frr; };

    EerResult r;
    std::size_t k = 0;
    while (k < pts.size() && diff(k) > 0.0) ++k;

    if (k == pts.size() || (k == 0 && diff(0) < 0.0)) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            if (std::abs(diff(i)) < std::abs(diff(best))) best = i;
        }
        r.eer = 0.5 * (pts[best].far + pts[best].frr);
        r.threshold = pts[best].threshold;
        r.method = EerMethod::NoCrossing;
        r.warning = "FAR and FRR never cross; using the point of minimal |FAR-FRR|";
    } else if (diff(k) == 0.0) {
        std::size_t j = k;
        while (j + 1 < pts.size() && diff(j + 1) == 0.0) ++j;
        r.eer = pts[k].far;
        if (j == k) {
            r.threshold = pts[k].threshold;
            r.method = EerMethod::ExactCrossing;
        } else {
            r.threshold = 0.5 * (pts[k].threshold + pts[j].threshold);
            r.method = EerMethod::Midpoint;
        }
    } else {
        const auto& a = pts[k - 1];
        const auto& b = pts[k];
        const double alpha = diff(k - 1) / (diff(k - 1) - diff(k));
        r.eer = a.far + alpha * (b.far - a.far);
        r.threshold = a.threshold + alpha * (b.threshold - a.threshold);
        r.method = EerMethod::Interpolated;
    }
    if (r.eer > 0.5 && r.warning.empty()) {
        r.warning = "EER above 0.5; check score polarity";
    }
    return r;
}

inline EerResult eer(const ScoreSet& set) { return eer(sweep(set)); }

/// Percentage reduction of the fused EER relative to the better unimodal EER.
/// Negative when fusion is worse.
inline double improvement(double eer_a, double eer_b, double eer_fused) {
    const double best = std::min(eer_a, eer_b);
    if (!(best > 0.0)) {
        throw Error(ErrorKind::DivisionByZero, "improvement undefined: best unimodal EER is 0");
    }
    return (best - eer_fused) / best * 100.0;
}

struct HistogramBin {
    double low = 0.0;
    double high = 0.0;
    std::size_t genuine = 0;
    std::size_t impostor = 0;
};

/// Equal-width bins spanning [min, max] of all scores; the last bin is closed.
inline std::vector<HistogramBin> histogram(const ScoreSet& set, std::size_t bins = 50) {
    if (bins == 0) throw Error(ErrorKind::Validation, "histogram needs at least one bin");
    if (set.empty()) throw Error(ErrorKind::EmptyPopulation, "histogram of an empty score set");
    double lo = set.entries().front().score;
    double hi = lo;
    for (const auto& e : set.entries()) {
        lo = std::min(lo, e.score);
        hi = std::max(hi, e.score);
    }
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<HistogramBin> out(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        out[i].low = lo + width * static_cast<double>(i);
        out[i].high = i + 1 == bins ? hi : lo + width * static_cast<double>(i + 1);
    }
    for (const auto& e : set.entries()) {
        auto idx = static_cast<std::size_t>((e.score - lo) / width);
        idx = std::min(idx, bins - 1);
        if (label(e.trial) == Label::Genuine) {
            ++out[idx].genuine;
        } else {
            ++out[idx].impostor;
        }
    }
    return out;
}

struct RatePair {
    double x = 0.0;
    double y = 0.0;
};

/// (FAR, FRR) for every sweep point.
inline std::vector<RatePair> det_points(const ErrorCurve& curve) {
    std::vector<RatePair> out;
    out.reserve(curve.points.size());
    for (const auto& p : curve.points) out.push_back({p.far, p.frr});
    return out;
}

/// (FAR, 1 - FRR) sorted by FAR ascending.
inline std::vector<RatePair> roc_points(const ErrorCurve& curve) {
    std::vector<RatePair> out;
    out.reserve(curve.points.size());
    for (auto it = curve.points.rbegin(); it != curve.points.rend(); ++it) {
        out.push_back({it->far, 1.0 - it->frr});
    }
    return out;
}

}  // namespace scorefusion
