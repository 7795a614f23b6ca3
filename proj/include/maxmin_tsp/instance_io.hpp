#pragma once

// Instance files.
//
//   points:  line 1 `n`, then one `x y` pair per line
//   matrix:  line 1 `n`, then n rows of n distances (validated symmetric)
//   tsplib:  the EUC_2D subset of the TSPLIB format (NAME, TYPE, DIMENSION,
//            EDGE_WEIGHT_TYPE, NODE_COORD_SECTION, optional EOF)
//
// Writers print every number with 12 significant digits, so integer grid
// coordinates round-trip exactly and general reals to ~1e-12 relative.

#include "error.hpp"
#include "instance.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace maxmin_tsp {

enum class InstanceFormat { Auto, Points, Matrix, Tsplib };

/// `%.12g` rendering used by every writer.
inline std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

namespace detail {

inline std::vector<std::string> split_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        const auto start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) out.emplace_back(text.substr(start, i - start));
    }
    return out;
}

inline double parse_real(const std::string& token, const std::string& what) {
    using Kind = InstanceFormatError::Kind;
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') throw InstanceFormatError(Kind::Malformed, what + ": '" + token + "' is not a number");
    if (!std::isfinite(v)) throw InstanceFormatError(Kind::NonFinite, what + ": '" + token + "'");
    return v;
}

inline std::size_t parse_count(const std::string& token, const std::string& what) {
    using Kind = InstanceFormatError::Kind;
    if (token.empty() || !std::all_of(token.begin(), token.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw InstanceFormatError(Kind::Malformed, what + ": '" + token + "' is not a non-negative integer");
    return static_cast<std::size_t>(std::stoull(token));
}

inline Instance parse_points(const std::vector<std::string>& tok, std::string name) {
    using Kind = InstanceFormatError::Kind;
    if (tok.empty()) throw InstanceFormatError(Kind::Malformed, "empty point file");
    const auto n = parse_count(tok[0], "point count");
    if (tok.size() != 1 + 2 * n)
        throw InstanceFormatError(Kind::Malformed, "point file declares " + std::to_string(n) + " points but has " +
                                                       std::to_string(tok.size() - 1) + " coordinate values");
    std::vector<Point> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i].x = parse_real(tok[1 + 2 * i], "x of point " + std::to_string(i));
        pts[i].y = parse_real(tok[2 + 2 * i], "y of point " + std::to_string(i));
    }
    return Instance(PointSet(std::move(pts)), std::move(name));
}

inline Instance parse_matrix(const std::vector<std::string>& tok, std::string name) {
    using Kind = InstanceFormatError::Kind;
    if (tok.empty()) throw InstanceFormatError(Kind::Malformed, "empty matrix file");
    const auto n = parse_count(tok[0], "matrix size");
    if (tok.size() != 1 + n * n)
        throw InstanceFormatError(Kind::Malformed, "matrix file declares n = " + std::to_string(n) + " but has " +
                                                       std::to_string(tok.size() - 1) + " entries");
    std::vector<double> values(n * n);
    for (std::size_t k = 0; k < n * n; ++k)
        values[k] = parse_real(tok[1 + k], "d[" + std::to_string(k / n) + "][" + std::to_string(k % n) + "]");
    return Instance(DistanceMatrix(n, std::move(values)), std::move(name));
}

inline std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline Instance parse_tsplib(std::string_view text, std::string name) {
    using Kind = InstanceFormatError::Kind;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t dimension = 0;
    bool have_dimension = false;
    bool in_coords = false;
    std::vector<Point> pts;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty()) continue;
        if (t == "EOF") break;
        if (in_coords) {
            const auto tok = split_tokens(t);
            if (tok.size() != 3)
                throw InstanceFormatError(Kind::Malformed, "line " + std::to_string(line_no) + ": expected 'id x y'");
            parse_count(tok[0], "node id on line " + std::to_string(line_no));
            pts.push_back({parse_real(tok[1], "x on line " + std::to_string(line_no)),
                           parse_real(tok[2], "y on line " + std::to_string(line_no))});
            continue;
        }
        if (t.rfind("NODE_COORD_SECTION", 0) == 0) {
            in_coords = true;
            continue;
        }
        const auto colon = t.find(':');
        if (colon == std::string::npos)
            throw InstanceFormatError(Kind::Malformed, "line " + std::to_string(line_no) + ": expected 'KEY : VALUE'");
        const auto key = trim(std::string_view(t).substr(0, colon));
        const auto value = trim(std::string_view(t).substr(colon + 1));
        if (key == "NAME") {
            name = value;
        } else if (key == "TYPE") {
            if (value != "TSP") throw InstanceFormatError(Kind::Unsupported, "TYPE " + value);
        } else if (key == "DIMENSION") {
            dimension = parse_count(value, "DIMENSION");
            have_dimension = true;
        } else if (key == "EDGE_WEIGHT_TYPE") {
            if (value != "EUC_2D") throw InstanceFormatError(Kind::Unsupported, "EDGE_WEIGHT_TYPE " + value);
        } else if (key != "COMMENT") {
            throw InstanceFormatError(Kind::Unsupported, "keyword " + key);
        }
    }
    if (!have_dimension) throw InstanceFormatError(Kind::Malformed, "missing DIMENSION");
    if (!in_coords) throw InstanceFormatError(Kind::Malformed, "missing NODE_COORD_SECTION");
    if (pts.size() != dimension)
        throw InstanceFormatError(Kind::Malformed, "DIMENSION " + std::to_string(dimension) + " but " +
                                                       std::to_string(pts.size()) + " nodes listed");
    return Instance(PointSet(std::move(pts)), std::move(name));
}

}  // namespace detail

/// Parses instance text. With `Auto`, a leading keyword selects TSPLIB;
/// otherwise the token count decides between points (1 + 2n) and matrix
/// (1 + n^2). The two coincide only at n = 2, which reads as points.
inline Instance parse_instance(std::string_view text, InstanceFormat format = InstanceFormat::Auto,
                               std::string name = {}) {
    if (format == InstanceFormat::Tsplib) return detail::parse_tsplib(text, std::move(name));
    const auto tok = detail::split_tokens(text);
    if (format == InstanceFormat::Points) return detail::parse_points(tok, std::move(name));
    if (format == InstanceFormat::Matrix) return detail::parse_matrix(tok, std::move(name));

    if (!tok.empty() && std::isalpha(static_cast<unsigned char>(tok[0][0])))
        return detail::parse_tsplib(text, std::move(name));
    if (tok.empty()) throw InstanceFormatError(InstanceFormatError::Kind::Malformed, "empty instance file");
    const auto n = detail::parse_count(tok[0], "instance size");
    if (tok.size() == 1 + 2 * n) return detail::parse_points(tok, std::move(name));
    if (tok.size() == 1 + n * n) return detail::parse_matrix(tok, std::move(name));
    throw InstanceFormatError(InstanceFormatError::Kind::Malformed,
                              "size " + std::to_string(n) + " matches neither point (" + std::to_string(2 * n) +
                                  " values) nor matrix (" + std::to_string(n * n) + " values) layout, found " +
                                  std::to_string(tok.size() - 1));
}

inline InstanceFormat format_from_extension(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".tsp") return InstanceFormat::Tsplib;
    if (ext == ".mat") return InstanceFormat::Matrix;
    if (ext == ".pts") return InstanceFormat::Points;
    return InstanceFormat::Auto;
}

/// Reads an instance; with `Auto` the extension (.pts, .mat, .tsp) is
/// consulted before content sniffing. The name defaults to the file stem.
inline Instance read_instance(const std::filesystem::path& path, InstanceFormat format = InstanceFormat::Auto) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (format == InstanceFormat::Auto) format = format_from_extension(path);
    return parse_instance(buf.str(), format, path.stem().string());
}

/// Renders `inst`; `Auto` picks points for coordinate instances and matrix otherwise.
inline std::string render_instance(const Instance& inst, InstanceFormat format = InstanceFormat::Auto) {
    if (format == InstanceFormat::Auto) format = inst.has_points() ? InstanceFormat::Points : InstanceFormat::Matrix;
    const auto n = inst.size();
    std::string out;
    switch (format) {
    case InstanceFormat::Points: {
        const auto& pts = inst.points();
        out += std::to_string(n) + "\n";
        for (std::size_t i = 0; i < n; ++i) out += format_number(pts[i].x) + " " + format_number(pts[i].y) + "\n";
        break;
    }
    case InstanceFormat::Matrix:
        out += std::to_string(n) + "\n";
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (j) out += ' ';
                out += format_number(inst.d(i, j));
            }
            out += '\n';
        }
        break;
    case InstanceFormat::Tsplib: {
        const auto& pts = inst.points();
        out += "NAME : " + (inst.name().empty() ? std::string("unnamed") : inst.name()) + "\n";
        out += "TYPE : TSP\nDIMENSION : " + std::to_string(n) + "\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n";
        for (std::size_t i = 0; i < n; ++i)
            out += std::to_string(i + 1) + " " + format_number(pts[i].x) + " " + format_number(pts[i].y) + "\n";
        out += "EOF\n";
        break;
    }
    case InstanceFormat::Auto: break;
    }
    return out;
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

inline void write_instance(const Instance& inst, const std::filesystem::path& path,
                           InstanceFormat format = InstanceFormat::Auto) {
    if (format == InstanceFormat::Auto) {
        format = format_from_extension(path);
        if (format == InstanceFormat::Auto) format = inst.has_points() ? InstanceFormat::Points : InstanceFormat::Matrix;
    }
    write_text_file(path, render_instance(inst, format));
}

}  // namespace maxmin_tsp
