#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <iterator>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scorefusion/error.hpp"
#include "scorefusion/score_model.hpp"

namespace scorefusion {

enum class FusionRule { MinScore, MaxScore, SimpleSum, UserWeighted };

inline constexpr FusionRule kAllFusionRules[] = {FusionRule::MinScore, FusionRule::MaxScore,
                                                 FusionRule::SimpleSum, FusionRule::UserWeighted};

inline std::string_view to_string(FusionRule r) {
    switch (r) {
        case FusionRule::MinScore: return "MinS";
        case FusionRule::MaxScore: return "MaxS";
        case FusionRule::SimpleSum: return "SS";
        case FusionRule::UserWeighted: return "UW";
    }
    return "?";
}

inline std::optional<FusionRule> parse_fusion_rule(std::string_view name) {
    if (name == "MinS" || name == "min") return FusionRule::MinScore;
    if (name == "MaxS" || name == "max") return FusionRule::MaxScore;
    if (name == "SS" || name == "sum") return FusionRule::SimpleSum;
    if (name == "UW" || name == "weighted") return FusionRule::UserWeighted;
    return std::nullopt;
}

/// Trials common to N >= 2 modalities, with one score per modality in input order.
class AlignedTrials {
public:
    AlignedTrials(std::vector<std::string> modalities, std::vector<Trial> trials,
                  std::vector<double> scores)
        : modalities_(std::move(modalities)), trials_(std::move(trials)), scores_(std::move(scores)) {}

    std::size_t width() const noexcept { return modalities_.size(); }
    std::size_t size() const noexcept { return trials_.size(); }
    const std::vector<std::string>& modalities() const noexcept { return modalities_; }
    const Trial& trial(std::size_t i) const { return trials_[i]; }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(scores_).subspan(i * width(), width());
    }

private:
    std::vector<std::string> modalities_;
    std::vector<Trial> trials_;
    std::vector<double> scores_;  // row-major, size() x width()
};

namespace detail {

inline std::string describe_keys(const std::vector<Trial>& keys) {
    constexpr std::size_t kShown = 5;
    std::string out;
    for (std::size_t i = 0; i < keys.size() && i < kShown; ++i) {
        if (i) out += " ";
        out += to_string(keys[i]);
    }
    if (keys.size() > kShown) out += " ... (" + std::to_string(keys.size()) + " total)";
    return out;
}

}  // namespace detail

/// Inner join of score sets on trial key. Every set must cover exactly the same keys.
inline AlignedTrials align(std::span<const ScoreSet> sets) {
    if (sets.size() < 2) {
        throw Error(ErrorKind::Validation, "fusion needs at least two score sets");
    }
    std::vector<Trial> reference;
    reference.reserve(sets[0].size());
    for (const auto& e : sets[0].entries()) reference.push_back(e.trial);

    std::string mismatch;
    for (std::size_t m = 1; m < sets.size(); ++m) {
        std::vector<Trial> keys;
        keys.reserve(sets[m].size());
        for (const auto& e : sets[m].entries()) keys.push_back(e.trial);
        if (keys == reference) continue;

        std::vector<Trial> missing, extra;
        std::set_difference(reference.begin(), reference.end(), keys.begin(), keys.end(),
                            std::back_inserter(missing));
        std::set_difference(keys.begin(), keys.end(), reference.begin(), reference.end(),
                            std::back_inserter(extra));
        mismatch += "; modality " + std::to_string(m + 1) + " (" + sets[m].modality() + ")";
        if (!missing.empty()) mismatch += " missing " + detail::describe_keys(missing);
        if (!extra.empty()) mismatch += " extra " + detail::describe_keys(extra);
    }
    if (!mismatch.empty()) {
        throw Error(ErrorKind::KeyMismatch,
                    "trial keys differ from modality 1 (" + sets[0].modality() + ")" + mismatch);
    }

    std::vector<std::string> names;
    for (const auto& s : sets) names.push_back(s.modality());
    const std::size_t width = sets.size();
    std::vector<double> scores(reference.size() * width);
    for (std::size_t m = 0; m < width; ++m) {
        auto entries = sets[m].entries();
        for (std::size_t i = 0; i < entries.size(); ++i) scores[i * width + m] = entries[i].score;
    }
    return AlignedTrials(std::move(names), std::move(reference), std::move(scores));
}

inline AlignedTrials align(std::initializer_list<ScoreSet> sets) {
    return align(std::span<const ScoreSet>(sets.begin(), sets.size()));
}

/// Non-negative fusion weights, each vector normalized to sum to 1, with optional
/// per-subject overrides keyed by probe subject.
class WeightVector {
public:
    explicit WeightVector(std::vector<double> global,
                          std::map<std::string, std::vector<double>> per_subject = {})
        : global_(normalized(std::move(global))) {
        for (auto& [subject, w] : per_subject) {
            if (w.size() != global_.size()) {
                throw Error(ErrorKind::WeightDimensionMismatch,
                            "weights for subject " + subject + " have " + std::to_string(w.size()) +
                                " entries, expected " + std::to_string(global_.size()));
            }
            per_subject_.emplace(subject, normalized(std::move(w)));
        }
    }

    static WeightVector equal(std::size_t n) { return WeightVector(std::vector<double>(n, 1.0)); }

    std::size_t size() const noexcept { return global_.size(); }
    std::span<const double> global() const noexcept { return global_; }
    const std::map<std::string, std::vector<double>>& overrides() const noexcept {
        return per_subject_;
    }

    std::span<const double> for_subject(const std::string& subject) const {
        auto it = per_subject_.find(subject);
        return it == per_subject_.end() ? std::span<const double>(global_)
                                        : std::span<const double>(it->second);
    }

private:
    static std::vector<double> normalized(std::vector<double> w) {
        if (w.empty()) throw Error(ErrorKind::InvalidWeights, "empty weight vector");
        double total = 0.0;
        for (double x : w) {
            if (!std::isfinite(x) || x < 0.0) {
                throw Error(ErrorKind::InvalidWeights, "weights must be finite and non-negative");
            }
            total += x;
        }
        if (!(total > 0.0)) throw Error(ErrorKind::InvalidWeights, "weights sum to zero");
        for (double& x : w) x /= total;
        return w;
    }

    std::vector<double> global_;
    std::map<std::string, std::vector<double>> per_subject_;
};

/// W_i = (1/eer_i) / sum_j (1/eer_j). EERs are fractions.
inline WeightVector weights_from_eer(std::span<const double> unimodal_eers) {
    std::vector<double> w;
    for (double e : unimodal_eers) {
        if (!std::isfinite(e) || !(e > 0.0)) {
            throw Error(ErrorKind::ZeroEER,
                        "inverse-EER weights need every unimodal EER > 0; supply explicit weights");
        }
        w.push_back(1.0 / e);
    }
    return WeightVector(std::move(w));
}

inline std::string fused_modality(const AlignedTrials& aligned, FusionRule rule) {
    std::string name;
    for (const auto& m : aligned.modalities()) {
        if (!name.empty()) name += "+";
        name += m;
    }
    return name + "|" + std::string(to_string(rule));
}

/// Applies `combine(trial, row)` to every aligned trial.
template <typename Combine>
ScoreSet fuse_with(const AlignedTrials& aligned, FusionRule rule, Combine&& combine) {
    std::vector<ScoreEntry> out;
    out.reserve(aligned.size());
    for (std::size_t i = 0; i < aligned.size(); ++i) {
        out.push_back({aligned.trial(i), combine(aligned.trial(i), aligned.row(i))});
    }
    return ScoreSet(fused_modality(aligned, rule), std::move(out));
}

inline ScoreSet fuse_max(const AlignedTrials& aligned) {
    return fuse_with(aligned, FusionRule::MaxScore, [](const Trial&, std::span<const double> r) {
        return *std::max_element(r.begin(), r.end());
    });
}

inline ScoreSet fuse_min(const AlignedTrials& aligned) {
    return fuse_with(aligned, FusionRule::MinScore, [](const Trial&, std::span<const double> r) {
        return *std::min_element(r.begin(), r.end());
    });
}

inline ScoreSet fuse_sum(const AlignedTrials& aligned) {
    return fuse_with(aligned, FusionRule::SimpleSum, [](const Trial&, std::span<const double> r) {
        double s = 0.0;
        for (double v : r) s += v;
        return s;
    });
}

inline ScoreSet fuse_weighted(const AlignedTrials& aligned, const WeightVector& weights) {
    if (weights.size() != aligned.width()) {
        throw Error(ErrorKind::WeightDimensionMismatch,
                    "weight vector has " + std::to_string(weights.size()) + " entries for " +
                        std::to_string(aligned.width()) + " modalities");
    }
    return fuse_with(aligned, FusionRule::UserWeighted,
                     [&](const Trial& t, std::span<const double> r) {
                         auto w = weights.for_subject(t.probe_subject);
                         double s = 0.0;
                         for (std::size_t i = 0; i < r.size(); ++i) s += w[i] * r[i];
                         return s;
                     });
}

/// Dispatch by rule. `weights` is required for UserWeighted.
inline ScoreSet fuse(const AlignedTrials& aligned, FusionRule rule,
                     const WeightVector* weights = nullptr) {
    switch (rule) {
        case FusionRule::MinScore: return fuse_min(aligned);
        case FusionRule::MaxScore: return fuse_max(aligned);
        case FusionRule::SimpleSum: return fuse_sum(aligned);
        case FusionRule::UserWeighted:
            if (!weights) throw Error(ErrorKind::Validation, "user weighting needs weights");
            return fuse_weighted(aligned, *weights);
    }
    throw Error(ErrorKind::Validation, "unknown fusion rule");
}

}  // namespace scorefusion
