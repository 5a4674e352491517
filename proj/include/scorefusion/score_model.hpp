#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "scorefusion/error.hpp"

namespace scorefusion {

enum class Label { Genuine, Impostor };

/// Score orientation of a comparator. Distance scores are negated on
/// ingestion, so every ScoreSet holds similarity scores.
enum class Polarity { Similarity, Distance };

/// One comparison attempt: probe sample of a subject against a gallery subject.
struct Trial {
    std::string probe_subject;
    std::string probe_sample;
    std::string gallery_subject;

    auto key() const { return std::tie(probe_subject, probe_sample, gallery_subject); }

    friend bool operator==(const Trial& a, const Trial& b) { return a.key() == b.key(); }
    friend bool operator<(const Trial& a, const Trial& b) { return a.key() < b.key(); }
};

inline Label label(const Trial& trial) {
    return trial.probe_subject == trial.gallery_subject ? Label::Genuine : Label::Impostor;
}

inline std::string to_string(const Trial& trial) {
    return "(" + trial.probe_subject + "," + trial.probe_sample + "," + trial.gallery_subject + ")";
}

struct ScoreEntry {
    Trial trial;
    double score = 0.0;
};

/// All scores of one modality, sorted by trial key. Immutable once built.
class ScoreSet {
public:
    ScoreSet() = default;

    ScoreSet(std::string modality, std::vector<ScoreEntry> entries,
             Polarity polarity = Polarity::Similarity)
        : modality_(std::move(modality)), entries_(std::move(entries)), source_polarity_(polarity) {
        for (auto& e : entries_) {
            if (!std::isfinite(e.score)) {
                throw Error(ErrorKind::NonFiniteScore,
                            "non-finite score for trial " + to_string(e.trial) + " in modality " +
                                modality_);
            }
            if (polarity == Polarity::Distance) e.score = -e.score;
        }
        std::sort(entries_.begin(), entries_.end(),
                  [](const ScoreEntry& a, const ScoreEntry& b) { return a.trial < b.trial; });
        auto dup = std::adjacent_find(
            entries_.begin(), entries_.end(),
            [](const ScoreEntry& a, const ScoreEntry& b) { return a.trial == b.trial; });
        if (dup != entries_.end()) {
            throw Error(ErrorKind::DuplicateTrial,
                        "duplicate trial " + to_string(dup->trial) + " in modality " + modality_);
        }
    }

    const std::string& modality() const noexcept { return modality_; }
    std::span<const ScoreEntry> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    /// Polarity of the data this set was built from; stored scores are always similarity.
    Polarity source_polarity() const noexcept { return source_polarity_; }

    std::vector<double> scores(Label which) const {
        std::vector<double> out;
        for (const auto& e : entries_) {
            if (label(e.trial) == which) out.push_back(e.score);
        }
        return out;
    }

    std::size_t count(Label which) const {
        return static_cast<std::size_t>(std::count_if(
            entries_.begin(), entries_.end(),
            [which](const ScoreEntry& e) { return label(e.trial) == which; }));
    }

private:
    std::string modality_;
    std::vector<ScoreEntry> entries_;
    Polarity source_polarity_ = Polarity::Similarity;
};

enum class Population { Genuine, Impostor, Both };

inline std::string_view to_string(Population p) {
    switch (p) {
        case Population::Genuine: return "genuine";
        case Population::Impostor: return "impostor";
        case Population::Both: return "both";
    }
    return "?";
}

struct PopulationStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double sd = 0.0;  // population SD (divide by N)
    std::size_t count = 0;
};

/// Min/max/mean/SD over the genuine, impostor and combined score populations.
struct DistributionStats {
    PopulationStats genuine;
    PopulationStats impostor;
    PopulationStats both;

    const PopulationStats& of(Population p) const {
        switch (p) {
            case Population::Genuine: return genuine;
            case Population::Impostor: return impostor;
            case Population::Both: break;
        }
        return both;
    }
};

namespace detail {

inline PopulationStats population_stats(std::span<const double> values) {
    PopulationStats s;
    s.count = values.size();
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.min = *lo;
    s.max = *hi;
    double sum = 0.0;
    for (double v : values) sum += v;
    const double n = static_cast<double>(values.size());
    s.mean = sum / n;
    double residual = 0.0;
    for (double v : values) residual += v - s.mean;
    s.mean += residual / n;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = s.min == s.max ? 0.0 : std::sqrt(ss / n);
    // rounding can push the mean of a constant set a ulp outside [min, max]
    s.mean = std::clamp(s.mean, s.min, s.max);
    return s;
}

}  // namespace detail

inline DistributionStats compute_stats(const ScoreSet& set) {
    auto genuine = set.scores(Label::Genuine);
    auto impostor = set.scores(Label::Impostor);
    if (genuine.empty() || impostor.empty()) {
        throw Error(ErrorKind::EmptyPopulation,
                    "modality " + set.modality() + " has " + std::to_string(genuine.size()) +
                        " genuine and " + std::to_string(impostor.size()) +
                        " impostor scores; both populations must be non-empty");
    }
    std::vector<double> all;
    all.reserve(set.size());
    for (const auto& e : set.entries()) all.push_back(e.score);

    DistributionStats stats;
    stats.genuine = detail::population_stats(genuine);
    stats.impostor = detail::population_stats(impostor);
    stats.both = detail::population_stats(all);
    return stats;
}

}  // namespace scorefusion
