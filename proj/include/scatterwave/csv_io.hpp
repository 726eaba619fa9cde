#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "scatterwave/engine.hpp"
#include "scatterwave/errors.hpp"
#include "scatterwave/experiments.hpp"
#include "scatterwave/grid_medium.hpp"
#include "scatterwave/initial_data.hpp"
#include "scatterwave/oracle.hpp"
#include "scatterwave/spectral.hpp"

namespace scatterwave::io {

/// Shortest-safe text form of a double: 17 significant digits, '.' decimal
/// separator regardless of locale.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const std::string& context) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw IoError(context + ": cannot parse number '" + std::string(text) + "'");
    }
    return v;
}

/// Writes to a sibling temp file and renames it over `path`, so readers never
/// observe a truncated file.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move output into place at " + path.string());
    }
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::string trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return std::string(s);
}

/// Numeric CSV with a single header line; blank lines are skipped.
inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path.string());
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_commas(line);
        if (table.header.empty()) {
            for (auto c : cells) table.header.push_back(trim(c));
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                          std::to_string(table.header.size()) + " columns");
        }
        std::vector<double> row;
        for (auto c : cells) row.push_back(parse_double(c, path.string() + ":" + std::to_string(line_no)));
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty()) throw IoError("empty file: " + path.string());
    return table;
}

inline bool header_is(const CsvTable& t, std::initializer_list<std::string_view> names) {
    if (t.header.size() != names.size()) return false;
    std::size_t i = 0;
    for (auto n : names) {
        if (t.header[i++] != n) return false;
    }
    return true;
}

/// Breakpoint file `x,zeta`: row i gives zeta on [x_i, x_{i+1}); the first
/// value also holds to the left of x_0.
inline Medium read_medium_file(const std::filesystem::path& path) {
    CsvTable t = read_csv(path);
    if (!header_is(t, {"x", "zeta"})) throw IoError(path.string() + ": expected header 'x,zeta'");
    if (t.rows.empty()) throw IoError(path.string() + ": no breakpoints");
    std::vector<double> breaks;
    std::vector<double> values{t.rows.front()[1]};
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        if (t.rows[i][0] < t.rows[i - 1][0]) throw IoError(path.string() + ": rows must be sorted by x");
        breaks.push_back(t.rows[i][0]);
        values.push_back(t.rows[i][1]);
    }
    Medium m = step_medium(std::move(breaks), std::move(values));
    m.x_minus = t.rows.front()[0];
    m.x_plus = t.rows.back()[0];
    return m;
}

/// Initial data read from file: regular (`x,alpha,beta`), Cauchy data to be
/// converted (`x,f,g`), or a Dirac comb (`offset,c,d`).
struct FileData {
    enum class Kind { regular, cauchy, comb } kind;
    RegularData regular;                      // alpha/beta, or f/g for cauchy
    DiracCombData comb;
};

namespace detail {

// Piecewise-linear interpolant through sorted samples, zero outside their range.
inline Sampler tabulated(std::vector<double> xs, std::vector<double> ys) {
    return [xs = std::move(xs), ys = std::move(ys)](double x) {
        if (xs.empty() || x < xs.front() || x > xs.back()) return 0.0;
        auto it = std::lower_bound(xs.begin(), xs.end(), x);
        auto i = static_cast<std::size_t>(it - xs.begin());
        if (xs[i] == x || i == 0) return ys[i];
        double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return (1.0 - w) * ys[i - 1] + w * ys[i];
    };
}

}  // namespace detail

inline FileData read_data_file(const std::filesystem::path& path) {
    CsvTable t = read_csv(path);
    FileData out{FileData::Kind::regular, {}, {}};
    if (header_is(t, {"offset", "c", "d"})) {
        out.kind = FileData::Kind::comb;
        for (const auto& row : t.rows) {
            double off = row[0];
            if (off != std::floor(off)) {
                throw AlignmentError(path.string() + ": comb offset " + format_double(off) + " is not an integer");
            }
            auto o = static_cast<std::int64_t>(off);
            if (row[1] != 0.0) out.comb.c[o] += row[1];
            if (row[2] != 0.0) out.comb.d[o] += row[2];
        }
        return out;
    }
    bool regular = header_is(t, {"x", "alpha", "beta"});
    bool cauchy = header_is(t, {"x", "f", "g"});
    if (!regular && !cauchy) {
        throw IoError(path.string() + ": expected header 'x,alpha,beta', 'x,f,g' or 'offset,c,d'");
    }
    std::vector<double> xs, first, second;
    for (const auto& row : t.rows) {
        if (!xs.empty() && row[0] <= xs.back()) throw IoError(path.string() + ": x must be strictly increasing");
        xs.push_back(row[0]);
        first.push_back(row[1]);
        second.push_back(row[2]);
    }
    out.kind = regular ? FileData::Kind::regular : FileData::Kind::cauchy;
    out.regular.alpha = detail::tabulated(xs, std::move(first));
    out.regular.beta = detail::tabulated(std::move(xs), std::move(second));
    return out;
}

/// Long format `k,t,j,x,u`, one line per stored (step, node).
inline std::string field_long_csv(const SolutionField& f) {
    std::string s = "k,t,j,x,u\n";
    for (std::size_t r = 0; r < f.rows(); ++r) {
        std::size_t k = f.steps()[r];
        std::string prefix = std::to_string(k) + "," + format_double(f.temporal().time(k)) + ",";
        for (std::size_t j = 0; j < f.cols(); ++j) {
            s += prefix;
            s += std::to_string(j);
            s += ',';
            s += format_double(f.grid().node(j));
            s += ',';
            s += format_double(f.at(r, j));
            s += '\n';
        }
    }
    return s;
}

/// Dense matrix: one stored time row per line, no header.
inline std::string field_dense_csv(const SolutionField& f) {
    std::string s;
    for (std::size_t r = 0; r < f.rows(); ++r) {
        for (std::size_t j = 0; j < f.cols(); ++j) {
            if (j) s += ',';
            s += format_double(f.at(r, j));
        }
        s += '\n';
    }
    return s;
}

inline std::string snapshot_csv(const WaveformSnapshot& snap) {
    std::string s = "x,u,singular\n";
    for (std::size_t j = 0; j < snap.x.size(); ++j) {
        s += format_double(snap.x[j]);
        s += ',';
        s += format_double(snap.u[j]);
        s += ',';
        s += (!snap.singular.empty() && snap.singular[j]) ? '1' : '0';
        s += '\n';
    }
    return s;
}

inline std::string convergence_csv(const ConvergenceReport& report) {
    std::string s = "n,E\n";
    for (const auto& e : report.entries) s += std::to_string(e.n) + "," + format_double(e.error) + "\n";
    return s;
}

inline std::string timing_csv(const std::vector<TimingEntry>& timings) {
    std::string s = "n,seconds\n";
    for (const auto& t : timings) s += std::to_string(t.n) + "," + format_double(t.seconds) + "\n";
    return s;
}

inline std::string ledger_csv(const ImpulseLedger& ledger) {
    std::string s = "k,node,direction,amplitude\n";
    for (std::size_t k = 0; k < ledger.steps.size(); ++k) {
        for (const auto& p : ledger.steps[k]) {
            s += std::to_string(k) + "," + std::to_string(p.node) + "," +
                 (p.direction == Direction::right ? "right" : "left") + "," + format_double(p.amplitude) + "\n";
        }
    }
    return s;
}

template <class Matrix>
std::string matrix_csv(const Matrix& M) {
    std::string s;
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (j) s += ',';
            s += format_double(M(i, j));
        }
        s += '\n';
    }
    return s;
}

/// Plain `key=value` lines in insertion order.
inline std::string params_text(const std::vector<std::pair<std::string, std::string>>& params) {
    std::string s;
    for (const auto& [k, v] : params) s += k + "=" + v + "\n";
    return s;
}

}  // namespace scatterwave::io
