#pragma once

// Line-oriented instance format:
//
//   ising-instance v1
//   n <int> m <int>
//   edge <u> <v> <beta>          (m lines)
//   field <v> <h>                (optional; h is a decimal, +inf or -inf)
//
// '#' starts a comment; blank lines are ignored.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "glauber/errors.hpp"
#include "glauber/graph.hpp"

namespace glauber {

inline constexpr const char* instance_magic = "ising-instance v1";

/// Shortest decimal that round-trips the double.
inline std::string format_real(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline std::string format_field(const Field& f) {
    switch (f.type()) {
    case Field::kind::plus_infinity: return "+inf";
    case Field::kind::minus_infinity: return "-inf";
    default: return format_real(f.value());
    }
}

inline void write_instance(std::ostream& os, const IsingInstance& inst) {
    os << instance_magic << '\n';
    os << "n " << inst.num_vertices() << " m " << inst.graph().num_edges() << '\n';
    for (const auto& e : inst.weighted_edges()) os << "edge " << e.u << ' ' << e.v << ' ' << format_real(e.beta) << '\n';
    for (std::size_t v = 0; v < inst.num_vertices(); ++v) {
        const auto& f = inst.field(static_cast<vertex>(v));
        if (f.is_clamped() || f.value() != 0.0) os << "field " << v << ' ' << format_field(f) << '\n';
    }
}

namespace detail {

inline std::string strip_comment(const std::string& line) {
    const auto hash = line.find('#');
    std::string s = hash == std::string::npos ? line : line.substr(0, hash);
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& tok, std::size_t line_no) {
    if (tok == "+inf" || tok == "inf") return HUGE_VAL;
    if (tok == "-inf") return -HUGE_VAL;
    double x = 0;
    const char* first = tok.data();
    if (!tok.empty() && tok[0] == '+') ++first;
    const auto res = std::from_chars(first, tok.data() + tok.size(), x);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw invalid_input("line " + std::to_string(line_no) + ": bad number '" + tok + "'");
    return x;
}

inline vertex parse_index(const std::string& tok, std::size_t line_no) {
    unsigned long long x = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || x >= no_vertex)
        throw invalid_input("line " + std::to_string(line_no) + ": bad index '" + tok + "'");
    return static_cast<vertex>(x);
}

} // namespace detail

inline IsingInstance read_instance(std::istream& is) {
    std::string raw;
    std::size_t line_no = 0;
    auto next_line = [&](std::string& out) {
        while (std::getline(is, raw)) {
            ++line_no;
            out = detail::strip_comment(raw);
            if (!out.empty()) return true;
        }
        return false;
    };
    std::string line;
    if (!next_line(line) || line != instance_magic) throw invalid_input("missing header '" + std::string(instance_magic) + "'");
    if (!next_line(line)) throw invalid_input("missing 'n <int> m <int>' line");
    std::size_t n = 0, m = 0;
    {
        std::istringstream ss(line);
        std::string kn, km, sn, sm, extra;
        if (!(ss >> kn >> sn >> km >> sm) || kn != "n" || km != "m" || (ss >> extra))
            throw invalid_input("line " + std::to_string(line_no) + ": expected 'n <int> m <int>'");
        n = detail::parse_index(sn, line_no);
        m = detail::parse_index(sm, line_no);
    }
    std::vector<weighted_edge> edges;
    std::vector<vertex_field> fields;
    while (next_line(line)) {
        std::istringstream ss(line);
        std::string kind, a, b, c, extra;
        ss >> kind;
        if (kind == "edge") {
            if (!(ss >> a >> b >> c) || (ss >> extra))
                throw invalid_input("line " + std::to_string(line_no) + ": expected 'edge <u> <v> <beta>'");
            if (!fields.empty()) throw invalid_input("line " + std::to_string(line_no) + ": edge after field lines");
            edges.push_back({detail::parse_index(a, line_no), detail::parse_index(b, line_no),
                             detail::parse_real(c, line_no)});
        } else if (kind == "field") {
            if (!(ss >> a >> b) || (ss >> extra))
                throw invalid_input("line " + std::to_string(line_no) + ": expected 'field <v> <h>'");
            fields.push_back({detail::parse_index(a, line_no), Field::finite(detail::parse_real(b, line_no))});
        } else {
            throw invalid_input("line " + std::to_string(line_no) + ": unknown record '" + kind + "'");
        }
    }
    if (edges.size() != m)
        throw invalid_input("header declares m=" + std::to_string(m) + " but found " + std::to_string(edges.size()) + " edges");
    if (fields.size() > n) throw invalid_input("more field lines than vertices");
    return IsingInstance(n, edges, fields);
}

inline IsingInstance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open instance file " + path.string());
    return read_instance(in);
}

/// Write through a sibling temporary and rename, so readers never see a partial file.
inline void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw invalid_input("cannot write " + tmp.string());
        out << contents;
        if (!out) throw invalid_input("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw invalid_input("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

inline void save_instance(const std::filesystem::path& path, const IsingInstance& inst) {
    std::ostringstream os;
    write_instance(os, inst);
    write_file_atomically(path, os.str());
}

} // namespace glauber
