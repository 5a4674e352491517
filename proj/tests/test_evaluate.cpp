#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "properties.hpp"
#include "scorefusion/evaluate.hpp"
#include "scorefusion/export.hpp"
#include "test_util.hpp"

using namespace scorefusion;
using testutil::make_set;

namespace {

const CurvePoint& at(const ErrorCurve& c, double t) {
    for (const auto& p : c.points) {
        if (p.threshold == t) return p;
    }
    throw std::runtime_error("threshold not in sweep");
}

}  // namespace

TEST(Sweep, PerfectlySeparated) {
    auto c = sweep(make_set({10, 20}, {1, 2}));
    const auto& p = at(c, 10);
    EXPECT_EQ(p.far, 0.0);
    EXPECT_EQ(p.frr, 0.0);
}

TEST(Sweep, HandEnumeration) {
    auto c = sweep(make_set({3}, {1, 5}));
    const auto& p = at(c, 3);
    EXPECT_EQ(p.far, 0.5);
    EXPECT_EQ(p.frr, 0.0);
    ASSERT_EQ(c.points.size(), 4u);  // 1, 3, 5, sentinel
    EXPECT_GT(c.points.back().threshold, 5.0);
    EXPECT_EQ(c.points.back().far, 0.0);
    EXPECT_EQ(c.points.back().frr, 1.0);
    EXPECT_EQ(c.points.front().far, 1.0);
    EXPECT_EQ(c.points.front().frr, 0.0);
}

TEST(Sweep, IdenticalDistributions) {
    // accept rate of impostors equals accept rate of genuine: FAR = 1 - FRR
    auto c = sweep(make_set({1, 2, 2, 5}, {5, 2, 1, 2}));
    for (const auto& p : c.points) EXPECT_DOUBLE_EQ(p.far + p.frr, 1.0);
}

TEST(Sweep, EmptyPopulation) {
    try {
        sweep(make_set({1, 2}, {}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptyPopulation);
    }
}

TEST(Sweep, CurveShapeAndConservation) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0, 1);
    std::vector<double> g(120), i(170);
    for (auto& v : g) v = std::round((n(rng) + 1.5) * 10) / 10;  // ties on purpose
    for (auto& v : i) v = std::round(n(rng) * 10) / 10;
    auto c = sweep(g, i);
    for (std::size_t k = 0; k < c.points.size(); ++k) {
        const auto& p = c.points[k];
        const std::size_t rejected_impostors = static_cast<std::size_t>(
            std::count_if(i.begin(), i.end(), [&](double s) { return s < p.threshold; }));
        const std::size_t accepted_genuine = static_cast<std::size_t>(
            std::count_if(g.begin(), g.end(), [&](double s) { return s >= p.threshold; }));
        EXPECT_EQ(p.false_accepts + rejected_impostors, i.size());
        EXPECT_EQ(p.false_rejects + accepted_genuine, g.size());
        if (k) {
            EXPECT_GT(p.threshold, c.points[k - 1].threshold);
            EXPECT_LE(p.far, c.points[k - 1].far);
            EXPECT_GE(p.frr, c.points[k - 1].frr);
        }
    }
}

TEST(Eer, PerfectSeparationIsZero) {
    auto r = eer(make_set({10, 20}, {1, 2}));
    EXPECT_EQ(r.eer, 0.0);
    EXPECT_EQ(r.method, EerMethod::ExactCrossing);
}

TEST(Eer, PlateauTakesMidpoint) {
    // FAR = FRR = 0 for every threshold in (2, 10]
    // a sweep over data never repeats an operating point, so build the run by hand
    ErrorCurve c;
    c.points = {{9.0, 0.5, 0.0, 0, 0}, {10.0, 0.1, 0.1, 0, 0}, {11.0, 0.1, 0.1, 0, 0},
                {12.0, 0.0, 0.4, 0, 0}};
    auto m = eer(c);
    EXPECT_DOUBLE_EQ(m.eer, 0.1);
    EXPECT_EQ(m.method, EerMethod::Midpoint);
    EXPECT_DOUBLE_EQ(m.threshold, 10.5);
}

TEST(Eer, InterpolatesBetweenPoints) {
    // t=3: far 2/3, frr 0; t=4: far 0, frr 1/2 -> alpha 4/7, crossing at 2/7
    auto r = eer(make_set({3, 4}, {1, 3, 3}));
    EXPECT_EQ(r.method, EerMethod::Interpolated);
    EXPECT_NEAR(r.eer, 2.0 / 7.0, 1e-15);
    EXPECT_NEAR(r.threshold, 3.0 + 4.0 / 7.0, 1e-15);
}

TEST(Eer, SameDistributionNearHalf) {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> n(0, 1);
    std::vector<double> g(4000), i(4000);
    for (auto& v : g) v = n(rng);
    for (auto& v : i) v = n(rng);
    const double got = eer(sweep(g, i)).eer;
    EXPECT_NEAR(got, oracle::midpoint_eer(g, i), 1.0 / 8000.0);
    EXPECT_NEAR(got, 0.5, 0.02);
}

TEST(Eer, MatchesDenseGridOracle) {
    std::mt19937_64 rng(100);
    std::normal_distribution<double> gen(1.2, 1.0), imp(0, 1);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> g(40 + rep), i(55);
        for (auto& v : g) v = gen(rng);
        for (auto& v : i) v = imp(rng);
        const double tol = 1.0 / (2.0 * static_cast<double>(std::min(g.size(), i.size())));
        EXPECT_NEAR(eer(sweep(g, i)).eer, oracle::dense_grid_eer(g, i, 20000), tol);
    }
}

TEST(Eer, NoCrossingFallsBack) {
    ErrorCurve c;
    c.points = {{0.0, 0.4, 0.1, 0, 0}, {1.0, 0.3, 0.2, 0, 0}};
    auto r = eer(c);
    EXPECT_EQ(r.method, EerMethod::NoCrossing);
    EXPECT_FALSE(r.warning.empty());
    EXPECT_DOUBLE_EQ(r.eer, 0.25);
}

TEST(Eer, ReversedPolarityWarns) {
    auto r = eer(make_set({1, 2}, {10, 20}));
    EXPECT_GT(r.eer, 0.5);
    EXPECT_FALSE(r.warning.empty());
}

TEST(Eer, OracleEquivalenceProperty) {
    std::string why;
    EXPECT_EQ(props::eer_oracle_equivalence(150, 21, why), 0) << why;
}

TEST(Improvement, Examples) {
    EXPECT_NEAR(improvement(0.0086, 0.0071, 0.000001), 99.98591549295774, 1e-9);
    EXPECT_DOUBLE_EQ(improvement(0.02, 0.03, 0.02), 0.0);
    EXPECT_NEAR(improvement(0.0086, 0.0735, 0.0381), -343.02325581395354, 1e-9);
}

TEST(Improvement, ZeroBaseline) {
    try {
        improvement(0.0, 0.1, 0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DivisionByZero);
    }
}

TEST(Improvement, ScaleInvariant) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 100; ++i) {
        // powers of two keep the scaling exact
        const double k = std::ldexp(1.0, static_cast<int>(rng() % 20) - 10);
        const double a = 0.001 + static_cast<double>(rng() % 1000) / 1e4;
        const double b = 0.001 + static_cast<double>(rng() % 1000) / 1e4;
        const double f = static_cast<double>(rng() % 1000) / 1e5;
        EXPECT_EQ(improvement(k * a, k * b, k * f), improvement(a, b, f));
    }
}

TEST(Histogram, MassConservation) {
    auto h = histogram(make_set({0.3}, {0.9}));
    std::size_t g = 0, i = 0;
    for (const auto& b : h) g += b.genuine, i += b.impostor;
    EXPECT_EQ(h.size(), 50u);
    EXPECT_EQ(g, 1u);
    EXPECT_EQ(i, 1u);
    EXPECT_EQ(h.front().low, 0.3);
    EXPECT_EQ(h.back().high, 0.9);
}

TEST(CurveProjections, DetAndRoc) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> gen(2, 1), imp(0, 1);
    std::vector<double> g(300), i(500);
    for (auto& v : g) v = gen(rng);
    for (auto& v : i) v = imp(rng);
    auto c = sweep(g, i);
    auto det = det_points(c);
    ASSERT_EQ(det.size(), c.points.size());
    for (std::size_t k = 0; k < det.size(); ++k) {
        EXPECT_EQ(det[k].x, c.points[k].far);
        EXPECT_EQ(det[k].y, c.points[k].frr);
    }
    auto roc = roc_points(c);
    for (std::size_t k = 1; k < roc.size(); ++k) {
        EXPECT_GE(roc[k].x, roc[k - 1].x);
        EXPECT_GE(roc[k].y, roc[k - 1].y);
    }
}

TEST(ExportCurves, WritesBundle) {
    const auto dir = std::filesystem::temp_directory_path() / "scorefusion_export_test";
    std::filesystem::remove_all(dir);
    auto set = make_set({2, 4, 5}, {1, 3});
    auto files = export_curves(set, sweep(set), dir, "m", 4, true);
    std::ifstream far(files.far_frr);
    std::string header;
    std::getline(far, header);
    EXPECT_EQ(header, "threshold,far,frr");
    std::ifstream det(files.det);
    std::getline(det, header);
    EXPECT_EQ(header, "far,frr");
    std::ifstream hist(files.histogram);
    std::getline(hist, header);
    EXPECT_EQ(header, "bin_low,bin_high,genuine_count,impostor_count");
    EXPECT_EQ(files.svgs.size(), 4u);
    for (const auto& p : files.svgs) EXPECT_TRUE(std::filesystem::exists(p));
    std::filesystem::remove_all(dir);
}

TEST(ExportCurves, UnwritableDirectoryIsIoError) {
    auto set = make_set({2}, {1});
    try {
        export_curves(set, sweep(set), "/proc/scorefusion_no_such_dir", "m");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Io);
        EXPECT_NE(std::string(e.what()).find("/proc/scorefusion_no_such_dir"), std::string::npos);
    }
}
