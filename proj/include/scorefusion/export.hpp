#pragma once

#include <algorithm>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "scorefusion/evaluate.hpp"
#include "scorefusion/io.hpp"

namespace scorefusion {

struct CurveFiles {
    std::filesystem::path far_frr;
    std::filesystem::path det;
    std::filesystem::path roc;
    std::filesystem::path histogram;
    std::vector<std::filesystem::path> svgs;
};

namespace detail {

struct Series {
    std::string name;
    std::string color;
    std::vector<RatePair> points;
};

inline std::string xml_escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Minimal line chart: framed plot area, axis extremes as labels, one polyline per series.
inline std::string svg_chart(const std::string& title, const std::string& x_label,
                             const std::string& y_label, const std::vector<Series>& series) {
    constexpr double W = 640, H = 480, L = 70, R = 20, T = 40, B = 60;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool first = true;
    for (const auto& s : series) {
        for (const auto& p : s.points) {
            if (first) {
                x0 = x1 = p.x;
                y0 = y1 = p.y;
                first = false;
            }
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y);
            y1 = std::max(y1, p.y);
        }
    }
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) y1 = y0 + 1;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
    auto num = [](double v) { return io::format_sig(v, 6); };

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
                      "font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" + xml_escape(title) +
           "</text>\n";
    out += "<rect x=\"" + num(L) + "\" y=\"" + num(T) + "\" width=\"" + num(W - L - R) +
           "\" height=\"" + num(H - T - B) + "\" fill=\"none\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(L) + "\" y=\"" + num(H - B + 16) + "\">" + num(x0) + "</text>\n";
    out += "<text x=\"" + num(W - R) + "\" y=\"" + num(H - B + 16) +
           "\" text-anchor=\"end\">" + num(x1) + "</text>\n";
    out += "<text x=\"" + num(L - 4) + "\" y=\"" + num(H - B) + "\" text-anchor=\"end\">" +
           num(y0) + "</text>\n";
    out += "<text x=\"" + num(L - 4) + "\" y=\"" + num(T + 10) + "\" text-anchor=\"end\">" +
           num(y1) + "</text>\n";
    out += "<text x=\"320\" y=\"" + num(H - 16) + "\" text-anchor=\"middle\">" + xml_escape(x_label) +
           "</text>\n";
    out += "<text x=\"16\" y=\"240\" transform=\"rotate(-90 16 240)\" text-anchor=\"middle\">" +
           xml_escape(y_label) + "</text>\n";
    double legend_y = T + 16;
    for (const auto& s : series) {
        out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"";
        for (const auto& p : s.points) out += num(px(p.x)) + "," + num(py(p.y)) + " ";
        out += "\"/>\n";
        out += "<text x=\"" + num(W - R - 8) + "\" y=\"" + num(legend_y) + "\" fill=\"" +
               s.color + "\" text-anchor=\"end\">" + xml_escape(s.name) + "</text>\n";
        legend_y += 16;
    }
    out += "</svg>\n";
    return out;
}

}  // namespace detail

/// Writes the curve bundle for one score set under `dir` with file names
/// `<stem>_{far_frr,det,roc,hist}.csv`, plus SVG renders when `svg` is set.
inline CurveFiles export_curves(const ScoreSet& set, const ErrorCurve& curve,
                                const std::filesystem::path& dir, const std::string& stem,
                                std::size_t bins = 50, bool svg = false) {
    CurveFiles files;
    files.far_frr = dir / (stem + "_far_frr.csv");
    files.det = dir / (stem + "_det.csv");
    files.roc = dir / (stem + "_roc.csv");
    files.histogram = dir / (stem + "_hist.csv");

    std::string far_frr = "threshold,far,frr\n";
    for (const auto& p : curve.points) {
        far_frr += io::format_sig(p.threshold, 9) + "," + io::format_sig(p.far, 9) + "," +
                   io::format_sig(p.frr, 9) + "\n";
    }
    auto det = det_points(curve);
    std::string det_csv = "far,frr\n";
    for (const auto& p : det) det_csv += io::format_sig(p.x, 9) + "," + io::format_sig(p.y, 9) + "\n";
    auto roc = roc_points(curve);
    std::string roc_csv = "far,gar\n";
    for (const auto& p : roc) roc_csv += io::format_sig(p.x, 9) + "," + io::format_sig(p.y, 9) + "\n";
    auto hist = histogram(set, bins);
    std::string hist_csv = "bin_low,bin_high,genuine_count,impostor_count\n";
    for (const auto& b : hist) {
        hist_csv += io::format_sig(b.low, 9) + "," + io::format_sig(b.high, 9) + "," +
                    std::to_string(b.genuine) + "," + std::to_string(b.impostor) + "\n";
    }
    io::write_file(files.far_frr, far_frr);
    io::write_file(files.det, det_csv);
    io::write_file(files.roc, roc_csv);
    io::write_file(files.histogram, hist_csv);

    if (svg) {
        detail::Series far{"FAR", "#d62728", {}}, frr{"FRR", "#1f77b4", {}};
        for (const auto& p : curve.points) {
            far.points.push_back({p.threshold, p.far});
            frr.points.push_back({p.threshold, p.frr});
        }
        detail::Series gen{"genuine", "#2ca02c", {}}, imp{"impostor", "#ff7f0e", {}};
        for (const auto& b : hist) {
            const double mid = 0.5 * (b.low + b.high);
            gen.points.push_back({mid, static_cast<double>(b.genuine)});
            imp.points.push_back({mid, static_cast<double>(b.impostor)});
        }
        const std::pair<std::string, std::string> charts[] = {
            {"_far_frr.svg", detail::svg_chart(set.modality() + " FAR/FRR", "threshold", "rate",
                                               {far, frr})},
            {"_det.svg", detail::svg_chart(set.modality() + " DET", "FAR", "FRR",
                                           {{"DET", "#1f77b4", det}})},
            {"_roc.svg", detail::svg_chart(set.modality() + " ROC", "FAR", "GAR",
                                           {{"ROC", "#1f77b4", roc}})},
            {"_hist.svg", detail::svg_chart(set.modality() + " score distributions", "score",
                                            "count", {gen, imp})},
        };
        for (const auto& [suffix, body] : charts) {
            auto path = dir / (stem + suffix);
            io::write_file(path, body);
            files.svgs.push_back(path);
        }
    }
    return files;
}

}  // namespace scorefusion
