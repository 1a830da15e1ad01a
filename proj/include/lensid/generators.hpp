#pragma once

#include "lensid/integer.hpp"
#include "lensid/triangulation.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lensid {

/// Reverses orientation by swapping vertex labels 2 and 3 in every tetrahedron.
inline Triangulation mirror(const Triangulation& tri) {
    const Perm4 s(0, 1, 3, 2);
    Triangulation out;
    out.gluings.resize(tri.size());
    for (std::size_t i = 0; i < tri.size(); ++i)
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = tri.at(i, s[f]);
            out.gluings[i][static_cast<std::size_t>(f)] = {g.tet, s * g.perm * s};
        }
    return out;
}

/// Bipyramid model of L(n,k): tetrahedron i has vertices (N, S, v_i, v_{i+1})
/// with labels (0, 1, 2, 3); the top fan is glued to the bottom fan turned by k.
inline Triangulation fan_lens(std::uint64_t n, std::uint64_t k) {
    if (n < 1)
        throw std::invalid_argument("fan_lens: n must be >= 1");
    if (n > 1 && std::gcd(n, k % n) != 1)
        throw std::invalid_argument("fan_lens: k must be a unit mod n");
    Triangulation tri;
    tri.gluings.resize(n);
    const Perm4 side(0, 1, 3, 2), cap(1, 0, 2, 3);
    for (std::uint64_t i = 0; i < n; ++i) {
        tri.glue(i, 2, (i + 1) % n, side);
        tri.glue(i, 1, (i + k) % n, cap);
    }
    return tri;
}

struct MonodromySequence {
    std::vector<int> a;

    bool valid() const {
        if (a.empty() || a[0] < 2)
            return false;
        return std::all_of(a.begin(), a.end(), [](int x) { return x >= 1 && x <= 5; });
    }
};

/// Continued fraction n/k = a_m + 1/(a_{m-1} + ... + 1/a_1).
inline std::pair<Integer, Integer> cf_eval(const MonodromySequence& seq) {
    if (!seq.valid())
        throw std::invalid_argument("cf_eval: invalid monodromy sequence");
    Integer prev = 1, cur = seq.a[0];
    for (std::size_t j = 1; j < seq.a.size(); ++j) {
        Integer next = seq.a[j] * cur + prev;
        prev = cur;
        cur = next;
    }
    return {cur, prev};
}

namespace detail {

struct Vec2 {
    long long x = 0, y = 0;
    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
};

inline long long det(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

// One boundary triangle of a layered solid torus: its slot, and the class in
// H_1 of the boundary torus of each directed edge, keyed by tetrahedron labels.
struct BoundaryFace {
    std::size_t tet = 0;
    int face = 0;
    std::array<std::array<Vec2, 4>, 4> vec{};

    std::array<int, 3> labels() const {
        std::array<int, 3> l{};
        int j = 0;
        for (int v = 0; v < 4; ++v)
            if (v != face)
                l[static_cast<std::size_t>(j++)] = v;
        return l;
    }
    void set(int u, int v, Vec2 w) {
        vec[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = w;
        vec[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = -w;
    }
    Vec2 get(int u, int v) const {
        return vec[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
    }
    /// Label opposite the boundary edge whose class is +-w.
    int opposite(const Vec2& w) const {
        auto l = labels();
        for (int r = 0; r < 3; ++r) {
            int u = l[static_cast<std::size_t>((r + 1) % 3)], v = l[static_cast<std::size_t>((r + 2) % 3)];
            Vec2 e = get(u, v);
            if (e == w || e == -w)
                return l[static_cast<std::size_t>(r)];
        }
        throw std::logic_error("layered solid torus: boundary edge not found");
    }
};

// Layered solid torus under construction, with meridian mu in boundary H_1.
struct SolidTorus {
    Triangulation tri;
    BoundaryFace f1, f2;
    std::array<Vec2, 3> edge; // boundary edge classes (sign arbitrary)
    Vec2 mu{2, -1};
    Vec2 lambda{1, 0};

    long long weight(const Vec2& w) const { return std::llabs(det(mu, w)); }

    // One-tetrahedron torus with boundary edge weights 1, 2, 3.
    static SolidTorus base() {
        SolidTorus s;
        s.tri.gluings.resize(1);
        s.tri.glue(0, 0, 0, Perm4(3, 0, 1, 2));
        s.f1.tet = s.f2.tet = 0;
        s.f1.face = 1;
        s.f2.face = 2;
        const Vec2 a{1, 0}, b{0, 1}, c{1, 1};
        s.f1.set(0, 2, b);
        s.f1.set(0, 3, c);
        s.f1.set(2, 3, a);
        s.f2.set(0, 1, a);
        s.f2.set(0, 3, c);
        s.f2.set(1, 3, b);
        s.edge = {a, b, c};
        return s;
    }

    // Layers a new tetrahedron on the boundary edge of class +-e.
    void layer(Vec2 e) {
        const std::size_t t = tri.size();
        tri.gluings.emplace_back();
        int xs = f1.opposite(e), ys = f2.opposite(e);
        auto l1 = f1.labels();
        std::vector<int> rest1;
        for (int v : l1)
            if (v != xs)
                rest1.push_back(v);
        // face 0 of the new tet (1,2,3) onto f1: 1 -> xs, {2,3} -> ends of e
        Perm4 p0;
        for (int flip = 0; flip < 2; ++flip) {
            int to2 = rest1[static_cast<std::size_t>(flip)], to3 = rest1[static_cast<std::size_t>(1 - flip)];
            p0 = Perm4(f1.face, xs, to2, to3);
            if (p0.sign() == -1)
                break;
        }
        // face 1 (0,2,3) onto f2: 0 -> ys, 2 -> 3 matched by edge direction
        Vec2 e23 = f1.get(p0[2], p0[3]);
        auto l2 = f2.labels();
        std::vector<int> rest2;
        for (int v : l2)
            if (v != ys)
                rest2.push_back(v);
        int to2 = rest2[0], to3 = rest2[1];
        if (!(f2.get(to2, to3) == e23))
            std::swap(to2, to3);
        if (!(f2.get(to2, to3) == e23))
            throw std::logic_error("layered solid torus: edge direction mismatch");
        Perm4 p1(ys, f2.face, to2, to3);
        if (p1.sign() != -1)
            throw std::logic_error("layered solid torus: orientation mismatch");
        tri.glue(t, 0, f1.tet, p0);
        tri.glue(t, 1, f2.tet, p1);

        Vec2 v12 = f1.get(p0[1], p0[2]), v13 = f1.get(p0[1], p0[3]);
        Vec2 v02 = f2.get(p1[0], p1[2]), v03 = f2.get(p1[0], p1[3]);
        Vec2 v01 = v02 - v12;
        if (!(v01 + v13 == v03))
            throw std::logic_error("layered solid torus: inconsistent edge classes");
        BoundaryFace n2, n3; // new boundary faces 2 = (0,1,3) and 3 = (0,1,2)
        n2.tet = n3.tet = t;
        n2.face = 2;
        n3.face = 3;
        n2.set(0, 1, v01);
        n2.set(0, 3, v03);
        n2.set(1, 3, v13);
        n3.set(0, 1, v01);
        n3.set(0, 2, v02);
        n3.set(1, 2, v12);
        f1 = n2;
        f2 = n3;
        for (auto& w : edge)
            if (w == e || w == -e)
                w = v01;
    }

    Vec2 edge_of_weight(long long w) const {
        for (const auto& e : edge)
            if (weight(e) == w)
                return e;
        throw std::logic_error("layered solid torus: no edge of requested weight");
    }

    // Glues f1 to f2 folding about the edge of class +-e. Returns (P, Q) with
    // the killed curve equal to Q*mu + P*lambda.
    std::pair<long long, long long> fold(Vec2 e) {
        int xs = f1.opposite(e), ys = f2.opposite(e);
        auto others = [&](const Vec2& w) {
            // edges other than e, in a fixed order
            std::array<Vec2, 2> o{};
            int j = 0;
            for (const auto& x : edge)
                if (!(x == w || x == -w))
                    o[static_cast<std::size_t>(j++)] = x;
            return o;
        };
        auto o = others(e);
        // slot j+1 of the text: x_{s+1} is opposite o[0], x_{s+2} opposite o[1]
        int x1 = f1.opposite(o[0]), x2 = f1.opposite(o[1]);
        int y1 = f2.opposite(o[0]), y2 = f2.opposite(o[1]);
        Vec2 in1 = f1.get(x1, x2), in2 = f2.get(y1, y2);
        if (!(in1 == -in2))
            throw std::logic_error("layered solid torus: fold edge would be reversed");
        Perm4 p;
        p.image[static_cast<std::size_t>(f1.face)] = static_cast<std::uint8_t>(f2.face);
        p.image[static_cast<std::size_t>(xs)] = static_cast<std::uint8_t>(ys);
        p.image[static_cast<std::size_t>(x1)] = static_cast<std::uint8_t>(y2);
        p.image[static_cast<std::size_t>(x2)] = static_cast<std::uint8_t>(y1);
        if (!p.valid() || p.sign() != -1)
            throw std::logic_error("layered solid torus: fold is not orientation compatible");
        Vec2 sigma = f1.get(x2, xs) - f2.get(y1, ys);
        tri.glue(f1.tet, f1.face, f2.tet, p);
        long long P = det(mu, sigma), Q = det(sigma, lambda);
        return {P, Q};
    }
};

// Pairs of boundary weights visited from (1, 2) up to the target, inclusive.
inline std::vector<std::pair<long long, long long>> euclid_path(long long x, long long y) {
    std::vector<std::pair<long long, long long>> path;
    long long p = std::min(x, y), q = std::max(x, y);
    while (!(p == 1 && q == 2)) {
        path.emplace_back(p, q);
        long long np = q - p;
        q = p;
        p = np;
        if (p > q)
            std::swap(p, q);
        if (p < 1)
            throw std::logic_error("euclid_path: weights not coprime");
    }
    path.emplace_back(1, 2);
    std::reverse(path.begin(), path.end());
    return path;
}

// Orientation convention relating the fold invariant q to the lens parameter.
inline constexpr int layered_orientation_convention = 1;

} // namespace detail

/// Layered lens space L(n,k) for any n >= 2 and unit k. The tetrahedron count
/// is the sum of partial quotients of (n - 2k')/k' plus one, k' = min(k, n-k).
inline Triangulation layered_lens_nk(std::uint64_t n, std::uint64_t k) {
    if (n < 2)
        throw std::invalid_argument("layered_lens: n must be >= 2");
    k %= n;
    if (std::gcd(n, k) != 1)
        throw std::invalid_argument("layered_lens: k must be a unit mod n");
    using detail::SolidTorus;
    SolidTorus s = SolidTorus::base();
    long long kk = static_cast<long long>(std::min(k, n - k));
    long long nn = static_cast<long long>(n);
    long long fold_weight = nn - 2 * kk;
    if (n == 2) {
        s.layer(s.edge_of_weight(3)); // weights 1,1,2
        s.layer(s.edge_of_weight(2)); // weights 1,1,0
    } else if (n == 3) {
        s.layer(s.edge_of_weight(3)); // weights 1,1,2
    } else {
        auto path = detail::euclid_path(fold_weight, kk);
        for (std::size_t i = 1; i < path.size(); ++i) {
            auto [a, b] = path[i - 1];
            auto [c, d] = path[i];
            // the weight of {a, b} absent from {c, d} is layered over
            long long gone = (a != c && a != d) ? a : b;
            s.layer(s.edge_of_weight(gone));
        }
    }
    auto [P, Q] = s.fold(s.edge_of_weight(fold_weight));
    if (std::llabs(P) != nn)
        throw std::logic_error("layered_lens: fold produced the wrong first homology");
    Integer q = mod(Integer(static_cast<long>(Q)) * (P > 0 ? 1 : -1) *
                        detail::layered_orientation_convention,
                    Integer(static_cast<long>(n)));
    Integer K(static_cast<unsigned long>(k)), N(static_cast<unsigned long>(n));
    Integer kinv = invmod(K, N);
    if (q == K || q == kinv)
        return s.tri;
    if (q == mod(-K, N) || q == mod(-kinv, N))
        return mirror(s.tri);
    throw std::logic_error("layered_lens: fold invariant does not match k");
}

struct LayeredLens {
    Triangulation tri;
    Integer n, k;
};

/// Lens space with parameters cf_eval(a), built by layering.
inline LayeredLens layered_lens(const MonodromySequence& seq) {
    auto [n, k] = cf_eval(seq);
    if (!fits_u64(n) || n >= (Integer(1) << 62))
        throw std::invalid_argument("layered_lens: n too large");
    return {layered_lens_nk(to_u64(n), to_u64(k)), n, k};
}

} // namespace lensid
