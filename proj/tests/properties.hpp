#pragma once

// Seeded property checks shared by the unit tests and the acceptance runner.
// Each returns the number of failing cases and appends a description of the
// first failure to `why`.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "scorefusion/evaluate.hpp"
#include "scorefusion/normalize.hpp"
#include "test_util.hpp"

namespace props {

using namespace scorefusion;

inline void note(std::string& why, const std::string& what) {
    if (why.empty()) why = what;
}

/// Random stats that pass every method's precondition.
inline DistributionStats random_stats(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> loc(-100.0, 100.0), spread(0.01, 50.0);
    DistributionStats s;
    const double lo = loc(rng);
    s.both.min = lo;
    s.both.max = lo + spread(rng);
    s.both.mean = loc(rng);
    s.both.sd = spread(rng);
    s.genuine.mean = loc(rng);
    s.genuine.sd = spread(rng);
    s.impostor.mean = loc(rng);
    s.impostor.sd = spread(rng);
    return s;
}

/// s1 < s2 implies f(s1) < f(s2) for all three methods.
inline int monotonicity(std::size_t cases, std::uint64_t seed, std::string& why) {
    std::mt19937_64 rng(seed);
    int failures = 0;
    for (std::size_t c = 0; c < cases; ++c) {
        const auto stats = random_stats(rng);
        // keep the tanh argument inside where tanh is still resolvable in doubles
        const double scale = stats.both.sd * 50.0;
        std::uniform_real_distribution<double> pick(stats.genuine.mean - scale, stats.genuine.mean + scale);
        double s1 = pick(rng), s2 = pick(rng);
        if (s1 == s2) continue;
        if (s2 < s1) std::swap(s1, s2);
        for (NormMethod m : kAllNormMethods) {
            const Normalizer n(m, stats);
            if (!(n(s1) < n(s2))) {
                ++failures;
                note(why, std::string(to_string(m)) + " not increasing at " + std::to_string(s1));
            }
        }
    }
    return failures;
}

/// MinMax of the fitting set stays in [0,1]; TanH of any finite score in (0,1).
inline int output_range(std::size_t cases, std::uint64_t seed, std::string& why) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> scale(0.1, 100.0), wide(-1e6, 1e6);
    std::uniform_int_distribution<int> size(2, 30);
    int failures = 0;
    for (std::size_t c = 0; c < cases; ++c) {
        const double k = scale(rng);
        std::vector<double> g(static_cast<std::size_t>(size(rng))), i(static_cast<std::size_t>(size(rng)));
        for (auto& v : g) v = k * (normal(rng) + 2.0);
        for (auto& v : i) v = k * normal(rng);
        const auto set = testutil::make_set(g, i);
        const auto stats = fit(set);
        const Normalizer mm(NormMethod::MinMax, stats), th(NormMethod::TanH, stats);
        for (const auto& e : set.entries()) {
            const double v = mm(e.score);
            if (v < 0.0 || v > 1.0) {
                ++failures;
                note(why, "MinMax output " + std::to_string(v) + " outside [0,1]");
            }
        }
        const double probe = wide(rng);
        const double t = th(probe);
        if (!(t > 0.0 && t < 1.0)) {
            ++failures;
            note(why, "TanH output " + std::to_string(t) + " outside (0,1)");
        }
    }
    return failures;
}

/// EER unchanged (1e-9) by the three normalizations and by random affine maps.
inline int eer_invariance(std::size_t cases, std::uint64_t seed, std::string& why) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> size(5, 80);
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_real_distribution<double> shift(0.0, 3.0), slope(0.01, 100.0), offset(-50.0, 50.0);
    int failures = 0;
    for (std::size_t c = 0; c < cases; ++c) {
        const auto g = oracle::mixed_sample(rng, static_cast<std::size_t>(size(rng)), kind(rng), shift(rng));
        const auto i = oracle::mixed_sample(rng, static_cast<std::size_t>(size(rng)), kind(rng), 0.0);
        const auto set = testutil::make_set(g, i);
        const double base = eer(set).eer;
        const auto stats = fit(set);
        for (NormMethod m : kAllNormMethods) {
            const double e = eer(normalize_set(set, Normalizer(m, stats))).eer;
            if (std::abs(e - base) > 1e-9) {
                ++failures;
                note(why, std::string(to_string(m)) + " changed EER " + std::to_string(base) +
                              " -> " + std::to_string(e));
            }
        }
        const double a = slope(rng), b = offset(rng);
        std::vector<double> ag, ai;
        for (double v : g) ag.push_back(a * v + b);
        for (double v : i) ai.push_back(a * v + b);
        const double e = eer(testutil::make_set(ag, ai)).eer;
        if (std::abs(e - base) > 1e-9) {
            ++failures;
            note(why, "affine map changed EER");
        }
    }
    return failures;
}

/// One impostor outlier at 10x the max moves MinMax values more than TanH values.
inline bool outlier_sensitivity(std::uint64_t seed, double& mm_shift, double& tanh_shift) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gen(70.0, 8.0), imp(30.0, 8.0);
    auto clamp = [](double v) { return std::min(100.0, std::max(0.0, v)); };
    std::vector<double> g(200), i(400);
    for (auto& v : g) v = clamp(gen(rng));
    for (auto& v : i) v = clamp(imp(rng));
    const auto clean = testutil::make_set(g, i);
    double peak = 0.0;
    for (double v : g) peak = std::max(peak, v);
    for (double v : i) peak = std::max(peak, v);
    auto with_outlier = i;
    with_outlier.push_back(10.0 * peak);
    const auto dirty = testutil::make_set(g, with_outlier);

    const auto sc = fit(clean), sd = fit(dirty);
    mm_shift = tanh_shift = 0.0;
    for (const auto& e : clean.entries()) {
        mm_shift = std::max(mm_shift, std::abs(Normalizer(NormMethod::MinMax, sc)(e.score) -
                                               Normalizer(NormMethod::MinMax, sd)(e.score)));
        tanh_shift = std::max(tanh_shift, std::abs(Normalizer(NormMethod::TanH, sc)(e.score) -
                                                   Normalizer(NormMethod::TanH, sd)(e.score)));
    }
    return mm_shift > tanh_shift;
}

/// Interpolated EER within 1/(2 min(|G|,|I|)) of the midpoint-threshold oracle.
inline int eer_oracle_equivalence(std::size_t sets, std::uint64_t seed, std::string& why) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> size(5, 200);
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_real_distribution<double> shift(-0.5, 4.0);
    int failures = 0;
    for (std::size_t c = 0; c < sets; ++c) {
        const auto ng = static_cast<std::size_t>(size(rng));
        const auto ni = static_cast<std::size_t>(size(rng));
        const auto g = oracle::mixed_sample(rng, ng, kind(rng), shift(rng));
        const auto i = oracle::mixed_sample(rng, ni, kind(rng), 0.0);
        const double got = eer(sweep(g, i)).eer;
        const double want = oracle::midpoint_eer(g, i);
        const double tol = 1.0 / (2.0 * static_cast<double>(std::min(ng, ni)));
        if (std::abs(got - want) > tol) {
            ++failures;
            note(why, "set " + std::to_string(c) + ": eer " + std::to_string(got) + " oracle " +
                          std::to_string(want));
        }
    }
    return failures;
}

}  // namespace props
