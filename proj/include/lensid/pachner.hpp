#pragma once

#include "lensid/integer.hpp"
#include "lensid/triangulation.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace lensid {

namespace detail {

// Vertex names used while retriangulating a region: a, b, u0, u1, u2.
enum Name : int { name_a = 0, name_b = 1, name_u0 = 2, name_u1 = 3, name_u2 = 4 };

struct OldTet {
    std::size_t index;
    std::array<int, 5> label_of; // name -> label, -1 when absent
};

using NewTet = std::array<int, 4>; // label -> name

inline unsigned face_mask(const std::array<int, 5>& label_of, int face_label) {
    unsigned m = 0;
    for (int nm = 0; nm < 5; ++nm)
        if (label_of[static_cast<std::size_t>(nm)] >= 0 && label_of[static_cast<std::size_t>(nm)] != face_label)
            m |= 1u << nm;
    return m;
}

inline unsigned face_mask(const NewTet& t, int face_label) {
    unsigned m = 0;
    for (int l = 0; l < 4; ++l)
        if (l != face_label)
            m |= 1u << t[static_cast<std::size_t>(l)];
    return m;
}

// Replaces the old tetrahedra by the new ones (given by vertex names), which
// take the indices in `slots`. Faces are matched by their name sets.
inline void retriangulate(Triangulation& tri, const std::vector<OldTet>& old,
                          const std::vector<NewTet>& fresh, const std::vector<std::size_t>& slots) {
    struct Ext {
        std::size_t old_pos;
        int face;
    };
    std::map<unsigned, Ext> external; // name set -> old slot
    auto old_pos_of = [&](std::size_t idx) -> std::optional<std::size_t> {
        for (std::size_t p = 0; p < old.size(); ++p)
            if (old[p].index == idx)
                return p;
        return std::nullopt;
    };
    for (std::size_t p = 0; p < old.size(); ++p)
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = tri.at(old[p].index, f);
            auto q = old_pos_of(g.tet);
            unsigned mask = face_mask(old[p].label_of, f);
            bool internal = false;
            if (q) {
                // internal iff the partner face has the same name set
                unsigned other = face_mask(old[*q].label_of, g.perm[f]);
                internal = other == mask;
            }
            if (!internal)
                external[mask] = {p, f};
        }
    // new face (tet, face) for each name set
    std::map<unsigned, std::pair<std::size_t, int>> new_faces;
    std::vector<std::array<Gluing, 4>> out(fresh.size());
    std::vector<std::array<bool, 4>> done(fresh.size(), {false, false, false, false});
    for (std::size_t k = 0; k < fresh.size(); ++k)
        for (int f = 0; f < 4; ++f) {
            unsigned mask = face_mask(fresh[k], f);
            auto it = new_faces.find(mask);
            if (it == new_faces.end()) {
                new_faces[mask] = {k, f};
                continue;
            }
            auto [k2, f2] = it->second;
            Perm4 p;
            for (int l = 0; l < 4; ++l) {
                int nm = fresh[k][static_cast<std::size_t>(l)];
                for (int l2 = 0; l2 < 4; ++l2)
                    if (fresh[k2][static_cast<std::size_t>(l2)] == nm)
                        p.image[static_cast<std::size_t>(l)] = static_cast<std::uint8_t>(l2);
            }
            p.image[static_cast<std::size_t>(f)] = static_cast<std::uint8_t>(f2);
            out[k][static_cast<std::size_t>(f)] = {slots[k2], p};
            out[k2][static_cast<std::size_t>(f2)] = {slots[k], p.inverse()};
            done[k][static_cast<std::size_t>(f)] = done[k2][static_cast<std::size_t>(f2)] = true;
            new_faces.erase(it);
        }
    // labels of new tet k -> labels of old tet p on a shared face
    auto to_old = [&](std::size_t k, int f, std::size_t p, int g) {
        Perm4 m;
        for (int l = 0; l < 4; ++l)
            if (l != f)
                m.image[static_cast<std::size_t>(l)] = static_cast<std::uint8_t>(
                    old[p].label_of[static_cast<std::size_t>(fresh[k][static_cast<std::size_t>(l)])]);
        m.image[static_cast<std::size_t>(f)] = static_cast<std::uint8_t>(g);
        return m;
    };
    std::vector<std::pair<std::size_t, std::pair<int, Gluing>>> outside_updates;
    for (const auto& [mask, kf] : new_faces) {
        auto [k, f] = kf;
        auto it = external.find(mask);
        if (it == external.end())
            throw std::logic_error("retriangulate: unmatched boundary face");
        auto [p, g] = it->second;
        const Gluing& og = tri.at(old[p].index, g);
        Perm4 into_old = to_old(k, f, p, g);
        auto q = old_pos_of(og.tet);
        if (q) {
            // partner is another region face: route through its new face
            unsigned pmask = face_mask(old[*q].label_of, og.perm[g]);
            auto [k2, f2] = new_faces.at(pmask);
            Perm4 old_to_new2;
            for (int l2 = 0; l2 < 4; ++l2)
                if (l2 != f2)
                    old_to_new2.image[static_cast<std::size_t>(old[*q].label_of[static_cast<std::size_t>(fresh[k2][static_cast<std::size_t>(l2)])])] =
                        static_cast<std::uint8_t>(l2);
            old_to_new2.image[static_cast<std::size_t>(og.perm[g])] = static_cast<std::uint8_t>(f2);
            out[k][static_cast<std::size_t>(f)] = {slots[k2], old_to_new2 * og.perm * into_old};
        } else {
            Perm4 p_out = og.perm * into_old;
            out[k][static_cast<std::size_t>(f)] = {og.tet, p_out};
            outside_updates.push_back({og.tet, {p_out[f], Gluing{slots[k], p_out.inverse()}}});
        }
    }
    std::size_t need = 0;
    for (auto s : slots)
        need = std::max(need, s + 1);
    if (tri.gluings.size() < need)
        tri.gluings.resize(need);
    for (std::size_t k = 0; k < fresh.size(); ++k)
        tri.gluings[slots[k]] = out[k];
    for (const auto& [tet, fg] : outside_updates)
        tri.gluings[tet][static_cast<std::size_t>(fg.first)] = fg.second;
}

// Moves the last tetrahedron into slot r and drops the last slot.
inline void remove_tet(Triangulation& tri, std::size_t r) {
    std::size_t last = tri.size() - 1;
    if (r != last) {
        tri.gluings[r] = tri.gluings[last];
        for (auto& row : tri.gluings)
            for (auto& g : row)
                if (g.tet == last)
                    g.tet = r;
    }
    tri.gluings.pop_back();
}

inline std::array<int, 5> names_from(std::initializer_list<std::pair<int, int>> name_label) {
    std::array<int, 5> m{-1, -1, -1, -1, -1};
    for (auto [nm, l] : name_label)
        m[static_cast<std::size_t>(nm)] = l;
    return m;
}

} // namespace detail

/// 2-3 move across face f of tetrahedron tet. Requires an oriented
/// triangulation and two distinct tetrahedra on the face. Returns false (and
/// leaves tri untouched) when illegal.
inline bool move_2_3(Triangulation& tri, std::size_t tet, int f) {
    using namespace detail;
    const Gluing g = tri.at(tet, f);
    if (g.tet == tet)
        return false;
    std::array<int, 3> u{};
    int j = 0;
    for (int v = 0; v < 4; ++v)
        if (v != f)
            u[static_cast<std::size_t>(j++)] = v;
    if (sequence_parity(std::array<int, 4>{f, u[0], u[1], u[2]}) != 1)
        std::swap(u[1], u[2]);
    OldTet A{tet, names_from({{name_a, f}, {name_u0, u[0]}, {name_u1, u[1]}, {name_u2, u[2]}})};
    OldTet B{g.tet, names_from({{name_b, g.perm[f]},
                                {name_u0, g.perm[u[0]]},
                                {name_u1, g.perm[u[1]]},
                                {name_u2, g.perm[u[2]]}})};
    std::vector<NewTet> fresh = {NewTet{name_a, name_b, name_u0, name_u1},
                                 NewTet{name_a, name_b, name_u1, name_u2},
                                 NewTet{name_a, name_b, name_u2, name_u0}};
    retriangulate(tri, {A, B}, fresh, {tet, g.tet, tri.size()});
    return true;
}

/// 3-2 move removing the edge (u, v) of tetrahedron tet, legal when the edge
/// has degree 3 and lies in three distinct tetrahedra.
inline bool move_3_2(Triangulation& tri, std::size_t tet, int u, int v) {
    using namespace detail;
    if (u == v)
        return false;
    int c = -1, d = -1;
    for (int x = 0; x < 4; ++x)
        if (x != u && x != v)
            (c < 0 ? c : d) = x;
    int la = u, lb = v;
    if (sequence_parity(std::array<int, 4>{u, v, c, d}) != 1)
        std::swap(la, lb);
    // walk T0 -> T1 -> T2 -> T0 around the edge
    // T0 = (a, b, u0=c, u1=d); cross the face opposite c.
    std::array<std::size_t, 3> T{};
    std::array<std::array<int, 5>, 3> lab{};
    T[0] = tet;
    lab[0] = names_from({{name_a, la}, {name_b, lb}, {name_u0, c}, {name_u1, d}});
    // T0 exits through the face opposite u0 into T1, whose new vertex is u2
    auto step = [&](std::size_t from, const std::array<int, 5>& L, int exit_name, int keep_name,
                    int new_name, std::size_t& to, std::array<int, 5>& out) {
        const Gluing& g = tri.at(from, L[static_cast<std::size_t>(exit_name)]);
        to = g.tet;
        out = names_from({{name_a, g.perm[L[name_a]]},
                          {name_b, g.perm[L[name_b]]},
                          {keep_name, g.perm[L[static_cast<std::size_t>(keep_name)]]},
                          {new_name, g.perm[L[static_cast<std::size_t>(exit_name)]]}});
    };
    std::size_t back = 0;
    std::array<int, 5> back_lab{};
    step(T[0], lab[0], name_u0, name_u1, name_u2, T[1], lab[1]);
    step(T[1], lab[1], name_u1, name_u2, name_u0, T[2], lab[2]);
    step(T[2], lab[2], name_u2, name_u0, name_u1, back, back_lab);
    if (T[0] == T[1] || T[1] == T[2] || T[0] == T[2])
        return false;
    if (back != T[0] || back_lab != lab[0])
        return false;
    std::vector<OldTet> old = {{T[0], lab[0]}, {T[1], lab[1]}, {T[2], lab[2]}};
    std::vector<NewTet> fresh = {NewTet{name_a, name_u0, name_u1, name_u2},
                                 NewTet{name_b, name_u0, name_u2, name_u1}};
    retriangulate(tri, old, fresh, {T[0], T[1]});
    remove_tet(tri, T[2]);
    return true;
}

/// Applies `moves` random legal 2-3 / 3-2 moves. Illegal samples are skipped
/// and resampled, at most 100 * moves attempts in total.
inline Triangulation pachner_obfuscate(const Triangulation& input, std::size_t moves,
                                       std::uint64_t seed) {
    if (moves == 0)
        return input;
    Triangulation tri = is_oriented(input) ? input : orient(input);
    Rng rng(seed);
    std::size_t applied = 0, attempts = 0;
    const std::size_t cap = 100 * moves;
    while (applied < moves && attempts < cap) {
        ++attempts;
        std::size_t t = rng.below(tri.size());
        bool ok;
        if (rng.below(2) == 0) {
            ok = move_2_3(tri, t, static_cast<int>(rng.below(4)));
        } else {
            int e = static_cast<int>(rng.below(6));
            static constexpr int ends[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
            ok = move_3_2(tri, t, ends[e][0], ends[e][1]);
        }
        if (ok)
            ++applied;
    }
    return tri;
}

} // namespace lensid
