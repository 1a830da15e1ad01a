#pragma once

#include "lensid/triangulation.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <deque>
#include <string>
#include <vector>

namespace lensid {

/// Local simplices of one tetrahedron, per dimension, in lexicographic order
/// of their sorted vertex tuples.
namespace simplex {

inline constexpr std::array<std::size_t, 4> count = {4, 6, 4, 1};

inline constexpr std::array<std::array<int, 2>, 6> edges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

inline constexpr std::array<std::array<int, 3>, 4> triangles = {
    {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};

inline int edge_index(int u, int v) {
    if (u > v)
        std::swap(u, v);
    static constexpr int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    return table[u][v];
}

/// Triangle index of the face opposite vertex f.
inline int face_triangle(int f) { return 3 - f; }
inline int triangle_face(int t) { return 3 - t; }

inline std::vector<int> vertices(int dim, std::size_t local) {
    switch (dim) {
    case 0:
        return {static_cast<int>(local)};
    case 1:
        return {edges[local][0], edges[local][1]};
    case 2:
        return {triangles[local][0], triangles[local][1], triangles[local][2]};
    default:
        return {0, 1, 2, 3};
    }
}

inline std::size_t local_index(int dim, std::vector<int> verts) {
    std::sort(verts.begin(), verts.end());
    switch (dim) {
    case 0:
        return static_cast<std::size_t>(verts[0]);
    case 1:
        return static_cast<std::size_t>(edge_index(verts[0], verts[1]));
    case 2: {
        int missing = 6 - verts[0] - verts[1] - verts[2];
        return static_cast<std::size_t>(face_triangle(missing));
    }
    default:
        return 0;
    }
}

} // namespace simplex

struct FaceIncidence {
    std::size_t cell = 0; // index into cells[d-1]
    int sign = 1;         // untwisted incidence sign
    int base = 0;         // label, in the representative tet, of the face class's base vertex
};

struct CellClass {
    std::size_t tet = 0;               // representative tetrahedron
    std::vector<int> verts;            // representative vertices, ascending; verts[0] is the base
    std::vector<FaceIncidence> faces;  // face r omits verts[r]
};

/// Quotient cell classes of a triangulation. Each class is oriented by the
/// ascending vertex order of its lexicographically smallest representative.
struct CellStructure {
    std::size_t tets = 0;
    std::array<std::vector<CellClass>, 4> cells;
    // For every local simplex (dimension d < 3): its class and the label map
    // from its tetrahedron into the class representative's tetrahedron.
    std::array<std::vector<std::size_t>, 3> node_class;
    std::array<std::vector<Perm4>, 3> node_map;

    std::size_t count(int d) const { return cells[static_cast<std::size_t>(d)].size(); }

    long euler_characteristic() const {
        return static_cast<long>(count(0)) - static_cast<long>(count(1)) +
               static_cast<long>(count(2)) - static_cast<long>(count(3));
    }

    std::size_t node(int d, std::size_t tet, std::size_t local) const {
        return tet * simplex::count[static_cast<std::size_t>(d)] + local;
    }
    std::size_t vertex_class(std::size_t tet, int v) const {
        return node_class[0][node(0, tet, static_cast<std::size_t>(v))];
    }
    std::size_t edge_class(std::size_t tet, int u, int v) const {
        return node_class[1][node(1, tet, static_cast<std::size_t>(simplex::edge_index(u, v)))];
    }
    /// +1 when u->v in tet agrees with the edge class orientation, -1 otherwise.
    int edge_direction(std::size_t tet, int u, int v) const {
        const Perm4& m = node_map[1][node(1, tet, static_cast<std::size_t>(simplex::edge_index(u, v)))];
        const CellClass& c = cells[1][edge_class(tet, u, v)];
        return m[u] == c.verts[0] ? 1 : -1;
    }
    std::size_t face_class(std::size_t tet, int f) const {
        return node_class[2][node(2, tet, static_cast<std::size_t>(simplex::face_triangle(f)))];
    }
};

class InvalidTriangulation : public TriangulationError {
  public:
    using TriangulationError::TriangulationError;
};

/// Builds the quotient cell structure. Throws InvalidTriangulation when the
/// gluing table is inconsistent or an edge is identified with its reverse.
inline CellStructure cells(const Triangulation& tri) {
    if (auto err = involution_error(tri); !err.empty())
        throw InvalidTriangulation(err);
    CellStructure cs;
    cs.tets = tri.size();
    for (int d = 0; d < 3; ++d) {
        const std::size_t per = simplex::count[static_cast<std::size_t>(d)];
        const std::size_t total = per * tri.size();
        auto& cls = cs.node_class[static_cast<std::size_t>(d)];
        auto& maps = cs.node_map[static_cast<std::size_t>(d)];
        cls.assign(total, static_cast<std::size_t>(-1));
        maps.assign(total, Perm4());
        auto& out = cs.cells[static_cast<std::size_t>(d)];
        for (std::size_t start = 0; start < total; ++start) {
            if (cls[start] != static_cast<std::size_t>(-1))
                continue;
            const std::size_t id = out.size();
            CellClass cc;
            cc.tet = start / per;
            cc.verts = simplex::vertices(d, start % per);
            out.push_back(cc);
            cls[start] = id;
            std::deque<std::size_t> queue{start};
            while (!queue.empty()) {
                std::size_t a = queue.front();
                queue.pop_front();
                std::size_t tet = a / per;
                auto verts = simplex::vertices(d, a % per);
                for (int f = 0; f < 4; ++f) {
                    if (std::find(verts.begin(), verts.end(), f) != verts.end())
                        continue;
                    const Gluing& g = tri.at(tet, f);
                    std::vector<int> image;
                    for (int v : verts)
                        image.push_back(g.perm[v]);
                    std::size_t b = g.tet * per + simplex::local_index(d, image);
                    Perm4 mb = maps[a] * g.perm.inverse();
                    if (cls[b] == static_cast<std::size_t>(-1)) {
                        cls[b] = id;
                        maps[b] = mb;
                        queue.push_back(b);
                    } else {
                        for (int y : image)
                            if (maps[b][y] != mb[y])
                                throw InvalidTriangulation(
                                    d == 1 ? "edge identified with its own reverse"
                                           : "simplex identified with itself by a nontrivial map");
                    }
                }
            }
        }
    }
    cs.cells[3].resize(tri.size());
    for (std::size_t i = 0; i < tri.size(); ++i) {
        cs.cells[3][i].tet = i;
        cs.cells[3][i].verts = {0, 1, 2, 3};
    }
    for (int d = 1; d <= 3; ++d) {
        for (auto& cc : cs.cells[static_cast<std::size_t>(d)]) {
            cc.faces.clear();
            for (int r = 0; r <= d; ++r) {
                std::vector<int> face;
                for (int q = 0; q <= d; ++q)
                    if (q != r)
                        face.push_back(cc.verts[static_cast<std::size_t>(q)]);
                std::size_t nd = cs.node(d - 1, cc.tet, simplex::local_index(d - 1, face));
                FaceIncidence inc;
                inc.cell = cs.node_class[static_cast<std::size_t>(d - 1)][nd];
                const Perm4& m = cs.node_map[static_cast<std::size_t>(d - 1)][nd];
                std::vector<int> mapped;
                for (int x : face)
                    mapped.push_back(m[x]);
                inc.sign = (r % 2 ? -1 : 1) * sequence_parity(mapped);
                int target = cs.cells[static_cast<std::size_t>(d - 1)][inc.cell].verts[0];
                for (int x : face)
                    if (m[x] == target)
                        inc.base = x;
                cc.faces.push_back(inc);
            }
        }
    }
    return cs;
}

struct ValidationReport {
    bool closed = false;       // gluing table is a consistent closed face pairing
    bool connected = false;
    bool orientable = false;
    bool edges_valid = false;  // no edge identified with its reverse
    long euler_characteristic = 0;
    std::string problem;       // first failure, empty when ok

    bool euler_ok() const { return edges_valid && euler_characteristic == 0; }
    bool ok() const { return closed && connected && orientable && euler_ok(); }
};

inline ValidationReport validate(const Triangulation& tri) {
    ValidationReport rep;
    auto err = involution_error(tri);
    rep.closed = err.empty() && tri.size() > 0;
    if (!rep.closed) {
        rep.problem = tri.size() == 0 ? "empty triangulation" : err;
        return rep;
    }
    rep.connected = is_connected(tri);
    try {
        coherent_orientation(tri);
        rep.orientable = true;
    } catch (const NonOrientable&) {
        rep.orientable = false;
    }
    try {
        auto cs = cells(tri);
        rep.edges_valid = true;
        rep.euler_characteristic = cs.euler_characteristic();
    } catch (const InvalidTriangulation& e) {
        rep.problem = e.what();
    }
    if (rep.problem.empty()) {
        if (!rep.connected)
            rep.problem = "not connected";
        else if (!rep.orientable)
            rep.problem = "not orientable";
        else if (rep.euler_characteristic != 0)
            rep.problem = "euler characteristic " + std::to_string(rep.euler_characteristic) +
                          " (a vertex link is not a sphere)";
    }
    return rep;
}

} // namespace lensid
