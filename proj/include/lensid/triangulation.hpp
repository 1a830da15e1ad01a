#pragma once

#include "lensid/perm.hpp"

#include <array>
#include <cstddef>
#include <deque>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lensid {

struct Gluing {
    std::size_t tet = 0;
    Perm4 perm;
    friend bool operator==(const Gluing&, const Gluing&) = default;
};

/// Closed generalized triangulation. gluings[i][f] says where face f of
/// tetrahedron i (the face opposite vertex f) is attached.
struct Triangulation {
    std::vector<std::array<Gluing, 4>> gluings;

    std::size_t size() const { return gluings.size(); }
    const Gluing& at(std::size_t tet, int face) const {
        return gluings[tet][static_cast<std::size_t>(face)];
    }

    /// Sets both sides of a face pairing.
    void glue(std::size_t i, int f, std::size_t j, const Perm4& p) {
        gluings[i][static_cast<std::size_t>(f)] = {j, p};
        gluings[j][static_cast<std::size_t>(p[f])] = {i, p.inverse()};
    }

    friend bool operator==(const Triangulation&, const Triangulation&) = default;
};

class TriangulationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ParseError : public TriangulationError {
  public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : TriangulationError("line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + what),
          line_(line), column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

  private:
    std::size_t line_, column_;
};

class NonOrientable : public TriangulationError {
  public:
    NonOrientable() : TriangulationError("triangulation is not orientable") {}
};

/// Empty string when the gluing table is a consistent closed pairing,
/// otherwise a description of the first violation found.
inline std::string involution_error(const Triangulation& tri) {
    for (std::size_t i = 0; i < tri.size(); ++i)
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = tri.at(i, f);
            std::string where = "tet " + std::to_string(i) + " face " + std::to_string(f);
            if (g.tet >= tri.size())
                return "tetrahedron index out of range at " + where;
            if (!g.perm.valid())
                return "malformed permutation at " + where;
            if (g.tet == i && g.perm[f] == f)
                return "face glued to itself at " + where;
            const Gluing& back = tri.at(g.tet, g.perm[f]);
            if (back.tet != i || !(back.perm == g.perm.inverse()))
                return "involution violation at " + where;
        }
    return {};
}

namespace detail {

struct Token {
    std::string_view text;
    std::size_t column; // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        if (i >= line.size() || line[i] == '#')
            break;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' &&
               line[i] != '#')
            ++i;
        out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

inline bool parse_size(std::string_view s, std::size_t& out) {
    if (s.empty() || s.size() > 18)
        return false;
    out = 0;
    for (char c : s) {
        if (c < '0' || c > '9')
            return false;
        out = out * 10 + static_cast<std::size_t>(c - '0');
    }
    return true;
}

} // namespace detail

/// Parses a TRI1 document. Blank lines and '#' comments are ignored.
inline Triangulation parse_tri(std::string_view text) {
    std::vector<std::pair<std::size_t, std::string_view>> lines; // (line number, content)
    {
        std::size_t lineno = 1, start = 0;
        for (std::size_t i = 0; i <= text.size(); ++i) {
            if (i == text.size() || text[i] == '\n') {
                std::string_view l = text.substr(start, i - start);
                if (!detail::tokenize(l).empty())
                    lines.emplace_back(lineno, l);
                ++lineno;
                start = i + 1;
            }
        }
    }
    if (lines.empty())
        throw ParseError(1, 1, "empty document, expected 'TRI1 <t>'");
    auto header = detail::tokenize(lines[0].second);
    if (header[0].text != "TRI1")
        throw ParseError(lines[0].first, header[0].column, "expected 'TRI1'");
    if (header.size() != 2)
        throw ParseError(lines[0].first, header.size() < 2 ? lines[0].second.size() + 1
                                                           : header[2].column,
                         "expected 'TRI1 <t>'");
    std::size_t t = 0;
    if (!detail::parse_size(header[1].text, t) || t == 0)
        throw ParseError(lines[0].first, header[1].column,
                         "malformed tetrahedron count '" + std::string(header[1].text) + "'");
    if (lines.size() - 1 != t)
        throw ParseError(lines.back().first, 1,
                         "expected " + std::to_string(t) + " tetrahedron lines, found " +
                             std::to_string(lines.size() - 1));
    Triangulation tri;
    tri.gluings.resize(t);
    for (std::size_t i = 0; i < t; ++i) {
        auto [lineno, content] = lines[i + 1];
        auto toks = detail::tokenize(content);
        if (toks.size() != 4)
            throw ParseError(lineno, toks.size() > 4 ? toks[4].column : content.size() + 1,
                             "expected 4 gluings, found " + std::to_string(toks.size()));
        for (int f = 0; f < 4; ++f) {
            const auto& tok = toks[static_cast<std::size_t>(f)];
            auto colon = tok.text.find(':');
            if (colon == std::string_view::npos)
                throw ParseError(lineno, tok.column, "expected 'j:pppp'");
            std::size_t j = 0;
            if (!detail::parse_size(tok.text.substr(0, colon), j))
                throw ParseError(lineno, tok.column, "malformed tetrahedron index");
            if (j >= t)
                throw ParseError(lineno, tok.column,
                                 "tetrahedron index " + std::to_string(j) + " out of range");
            Perm4 p;
            try {
                p = Perm4::parse(tok.text.substr(colon + 1));
            } catch (const std::invalid_argument& e) {
                throw ParseError(lineno, tok.column + colon + 1, e.what());
            }
            tri.gluings[i][static_cast<std::size_t>(f)] = {j, p};
        }
    }
    if (auto err = involution_error(tri); !err.empty()) {
        // report against the offending tetrahedron line
        std::size_t tet = 0;
        auto pos = err.find("tet ");
        if (pos != std::string::npos)
            tet = std::stoul(err.substr(pos + 4));
        throw ParseError(lines[tet + 1].first, 1, err);
    }
    return tri;
}

inline std::string serialize_tri(const Triangulation& tri) {
    std::ostringstream os;
    os << "TRI1 " << tri.size() << '\n';
    for (const auto& row : tri.gluings) {
        for (int f = 0; f < 4; ++f) {
            if (f)
                os << ' ';
            os << row[static_cast<std::size_t>(f)].tet << ':' << row[static_cast<std::size_t>(f)].perm.str();
        }
        os << '\n';
    }
    return os.str();
}

inline bool is_connected(const Triangulation& tri) {
    if (tri.size() == 0)
        return false;
    std::vector<bool> seen(tri.size(), false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!queue.empty()) {
        std::size_t i = queue.front();
        queue.pop_front();
        for (const auto& g : tri.gluings[i])
            if (!seen[g.tet]) {
                seen[g.tet] = true;
                ++count;
                queue.push_back(g.tet);
            }
    }
    return count == tri.size();
}

/// Per-tetrahedron signs making every face pairing orientation-reversing,
/// normalized so tetrahedron 0 is positive. Throws NonOrientable.
inline std::vector<int> coherent_orientation(const Triangulation& tri) {
    std::vector<int> sign(tri.size(), 0);
    for (std::size_t root = 0; root < tri.size(); ++root) {
        if (sign[root])
            continue;
        sign[root] = 1;
        std::deque<std::size_t> queue{root};
        while (!queue.empty()) {
            std::size_t i = queue.front();
            queue.pop_front();
            for (const auto& g : tri.gluings[i]) {
                int want = -g.perm.sign() * sign[i];
                if (sign[g.tet] == 0) {
                    sign[g.tet] = want;
                    queue.push_back(g.tet);
                } else if (sign[g.tet] != want) {
                    throw NonOrientable();
                }
            }
        }
    }
    return sign;
}

/// True when every gluing permutation is odd, i.e. all tetrahedra carry the
/// orientation of their vertex labels.
inline bool is_oriented(const Triangulation& tri) {
    for (const auto& row : tri.gluings)
        for (const auto& g : row)
            if (g.perm.sign() != -1)
                return false;
    return true;
}

/// Relabels tetrahedra with negative coherent sign by swapping vertices 2
/// and 3, so the result is oriented in the sense of is_oriented.
inline Triangulation orient(const Triangulation& tri) {
    auto sign = coherent_orientation(tri);
    const Perm4 swap23(0, 1, 3, 2);
    auto relabel = [&](std::size_t i) { return sign[i] < 0 ? swap23 : Perm4(); };
    Triangulation out;
    out.gluings.resize(tri.size());
    for (std::size_t i = 0; i < tri.size(); ++i)
        for (int f = 0; f < 4; ++f) {
            // new label v of tet i is old label relabel(i)[v]
            Perm4 ri = relabel(i);
            const Gluing& og = tri.at(i, ri[f]);
            Perm4 p = relabel(og.tet).inverse() * og.perm * ri;
            out.gluings[i][static_cast<std::size_t>(f)] = {og.tet, p};
        }
    return out;
}

} // namespace lensid
