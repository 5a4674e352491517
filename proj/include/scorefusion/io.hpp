#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "scorefusion/error.hpp"
#include "scorefusion/fuse.hpp"
#include "scorefusion/score_model.hpp"

namespace scorefusion::io {

inline constexpr std::string_view kScoreHeader =
    "modality,probe_subject,probe_sample,gallery_subject,score";

/// printf-style %.<digits>g rendering, independent of the global locale's grouping.
inline std::string format_sig(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return buf;
}

inline std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline bool parse_double(std::string_view text, double& out) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw Error(ErrorKind::Io,
                        "cannot create directory " + path.parent_path().string() + ": " +
                            ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

/// FNV-1a, 64 bit.
inline std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Parses the score CSV format. `source` names the input in error messages.
inline ScoreSet parse_scores(std::string_view text, std::string_view source,
                             Polarity polarity = Polarity::Similarity) {
    auto fail = [&](std::size_t line, const std::string& why) {
        throw Error(ErrorKind::ParseError,
                    std::string(source) + ":" + std::to_string(line) + ": " + why);
    };
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    std::string modality;
    std::vector<ScoreEntry> entries;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view row = trim(line);
        if (row.empty()) continue;
        if (!header_seen) {
            if (row != kScoreHeader) fail(lineno, "expected header '" + std::string(kScoreHeader) + "'");
            header_seen = true;
            continue;
        }
        auto fields = split(row);
        if (fields.size() != 5) {
            fail(lineno, "expected 5 fields, found " + std::to_string(fields.size()));
        }
        for (std::size_t i = 0; i < 4; ++i) {
            if (trim(fields[i]).empty()) fail(lineno, "empty field " + std::to_string(i + 1));
        }
        std::string m(trim(fields[0]));
        if (modality.empty()) {
            modality = m;
        } else if (m != modality) {
            fail(lineno, "mixed modalities '" + modality + "' and '" + m + "' in one file");
        }
        double score = 0.0;
        if (!parse_double(fields[4], score)) {
            fail(lineno, "bad score '" + std::string(fields[4]) + "'");
        }
        if (!std::isfinite(score)) fail(lineno, "non-finite score");
        entries.push_back({Trial{std::string(trim(fields[1])), std::string(trim(fields[2])),
                                 std::string(trim(fields[3]))},
                           score});
    }
    if (!header_seen) fail(lineno, "missing header");
    return ScoreSet(modality, std::move(entries), polarity);
}

inline ScoreSet read_scores(const std::filesystem::path& path,
                            Polarity polarity = Polarity::Similarity) {
    return parse_scores(read_file(path), path.string(), polarity);
}

/// Score CSV with 9 significant digits, rows in trial-key order.
inline std::string format_scores(const ScoreSet& set) {
    std::string out(kScoreHeader);
    out += '\n';
    for (const auto& e : set.entries()) {
        out += set.modality();
        out += ',';
        out += e.trial.probe_subject;
        out += ',';
        out += e.trial.probe_sample;
        out += ',';
        out += e.trial.gallery_subject;
        out += ',';
        out += format_sig(e.score, 9);
        out += '\n';
    }
    return out;
}

inline void write_scores(const std::filesystem::path& path, const ScoreSet& set) {
    write_file(path, format_scores(set));
}

/// Per-subject weight overrides: `subject,w_1,...,w_N`; an optional header row
/// starts with "subject". Rows are normalized by WeightVector.
inline std::map<std::string, std::vector<double>> parse_weight_overrides(std::string_view text,
                                                                         std::string_view source) {
    std::map<std::string, std::vector<double>> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto row = trim(line);
        if (row.empty()) continue;
        auto fields = split(row);
        if (trim(fields[0]) == "subject") continue;
        auto fail = [&](const std::string& why) {
            throw Error(ErrorKind::ParseError,
                        std::string(source) + ":" + std::to_string(lineno) + ": " + why);
        };
        if (fields.size() < 2) fail("expected subject followed by weights");
        if (width == 0) width = fields.size() - 1;
        if (fields.size() - 1 != width) fail("inconsistent number of weights");
        std::vector<double> w;
        for (std::size_t i = 1; i < fields.size(); ++i) {
            double v = 0.0;
            if (!parse_double(fields[i], v)) fail("bad weight '" + std::string(fields[i]) + "'");
            w.push_back(v);
        }
        std::string subject(trim(fields[0]));
        if (!out.emplace(subject, std::move(w)).second) fail("duplicate subject " + subject);
    }
    return out;
}

inline std::map<std::string, std::vector<double>> read_weight_overrides(
    const std::filesystem::path& path) {
    return parse_weight_overrides(read_file(path), path.string());
}

}  // namespace scorefusion::io
