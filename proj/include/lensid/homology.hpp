#pragma once

#include "lensid/cells.hpp"
#include "lensid/field.hpp"
#include "lensid/integer.hpp"
#include "lensid/matrix.hpp"
#include "lensid/torsion.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <optional>
#include <stdexcept>
#include <vector>

namespace lensid {

/// Orientation sign of every distinguished basis cell, per dimension.
struct CellSigns {
    std::array<std::vector<int>, 4> sign;

    static CellSigns identity(const CellStructure& cs) {
        CellSigns s;
        for (int d = 0; d < 4; ++d)
            s.sign[static_cast<std::size_t>(d)].assign(cs.count(d), 1);
        return s;
    }
    int at(int d, std::size_t i) const { return sign[static_cast<std::size_t>(d)][i]; }
    friend bool operator==(const CellSigns&, const CellSigns&) = default;
};

/// The integral boundary map C_d -> C_{d-1} (d = 1, 2, 3).
inline IntegerMatrix boundary_matrix(const CellStructure& cs, int d, const CellSigns* signs = nullptr) {
    if (d < 1 || d > 3)
        throw std::invalid_argument("boundary_matrix: degree must be 1, 2 or 3");
    IntegerMatrix m(cs.count(d - 1), cs.count(d), Integer(0));
    const auto& cells_d = cs.cells[static_cast<std::size_t>(d)];
    for (std::size_t c = 0; c < cells_d.size(); ++c)
        for (const auto& inc : cells_d[c].faces) {
            int s = inc.sign;
            if (signs)
                s *= signs->at(d, c) * signs->at(d - 1, inc.cell);
            m(inc.cell, c) += s;
        }
    return m;
}

struct BoundaryMatrices {
    IntegerMatrix d1, d2, d3;
};

inline BoundaryMatrices boundary_matrices(const CellStructure& cs, const CellSigns* signs = nullptr) {
    return {boundary_matrix(cs, 1, signs), boundary_matrix(cs, 2, signs), boundary_matrix(cs, 3, signs)};
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

struct SmithForm {
    IntegerMatrix U, S, V; // U * A * V = S
    std::size_t rank = 0;

    std::vector<Integer> diagonal() const {
        std::vector<Integer> out;
        for (std::size_t i = 0; i < rank; ++i)
            out.push_back(S(i, i));
        return out;
    }
};

/// Smith normal form. Pivots are units when possible: the sparsest column
/// holding a +-1, and in it the sparsest row, which keeps fill-in low on
/// boundary matrices. Otherwise the minimal |entry| (ties toward the smallest
/// row, then column). Diagonal entries are positive.
inline SmithForm smith_normal_form(const IntegerMatrix& A) {
    const std::size_t m = A.rows(), n = A.cols();
    SmithForm sf{identity_matrix(m), A, identity_matrix(n), 0};
    IntegerMatrix &U = sf.U, &S = sf.S, &V = sf.V;
    std::vector<std::size_t> row_nz(m, 0), col_nz(n, 0); // nonzeros of S
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (S(i, j) != 0) {
                ++row_nz[i];
                ++col_nz[j];
            }
    auto recount = [&](std::size_t i, std::size_t j, bool was) {
        bool now = S(i, j) != 0;
        if (was == now)
            return;
        if (now) {
            ++row_nz[i];
            ++col_nz[j];
        } else {
            --row_nz[i];
            --col_nz[j];
        }
    };
    auto row_axpy = [&](std::size_t dst, std::size_t src, const Integer& q) { // row dst -= q row src
        for (std::size_t j = 0; j < n; ++j)
            if (S(src, j) != 0) {
                bool was = S(dst, j) != 0;
                S(dst, j) -= q * S(src, j);
                recount(dst, j, was);
            }
        for (std::size_t j = 0; j < m; ++j)
            if (U(src, j) != 0)
                U(dst, j) -= q * U(src, j);
    };
    auto col_axpy = [&](std::size_t dst, std::size_t src, const Integer& q) { // col dst -= q col src
        for (std::size_t i = 0; i < m; ++i)
            if (S(i, src) != 0) {
                bool was = S(i, dst) != 0;
                S(i, dst) -= q * S(i, src);
                recount(i, dst, was);
            }
        for (std::size_t i = 0; i < n; ++i)
            if (V(i, src) != 0)
                V(i, dst) -= q * V(i, src);
    };
    auto is_unit = [](const Integer& x) { return mpz_cmpabs_ui(x.get_mpz_t(), 1) == 0; };
    std::vector<std::size_t> order;
    std::size_t t = 0;
    while (t < std::min(m, n)) {
        for (;;) {
            std::size_t pr = m, pc = n;
            order.clear();
            for (std::size_t j = t; j < n; ++j)
                if (col_nz[j] > 0)
                    order.push_back(j);
            if (order.empty()) {
                sf.rank = t;
                return sf;
            }
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return col_nz[a] < col_nz[b]; });
            for (std::size_t j : order) {
                for (std::size_t i = t; i < m; ++i)
                    if (is_unit(S(i, j)) && (pr == m || row_nz[i] < row_nz[pr]))
                        pr = i;
                if (pr != m) {
                    pc = j;
                    break;
                }
            }
            if (pr == m) {
                for (std::size_t i = t; i < m; ++i)
                    for (std::size_t j = t; j < n; ++j)
                        if (S(i, j) != 0 &&
                            (pr == m || mpz_cmpabs(S(i, j).get_mpz_t(), S(pr, pc).get_mpz_t()) < 0)) {
                            pr = i;
                            pc = j;
                        }
            }
            S.swap_rows(t, pr);
            U.swap_rows(t, pr);
            std::swap(row_nz[t], row_nz[pr]);
            S.swap_cols(t, pc);
            V.swap_cols(t, pc);
            std::swap(col_nz[t], col_nz[pc]);
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i)
                if (S(i, t) != 0) {
                    Integer q;
                    mpz_fdiv_q(q.get_mpz_t(), S(i, t).get_mpz_t(), S(t, t).get_mpz_t());
                    row_axpy(i, t, q);
                    if (S(i, t) != 0)
                        clean = false;
                }
            for (std::size_t j = t + 1; j < n; ++j)
                if (S(t, j) != 0) {
                    Integer q;
                    mpz_fdiv_q(q.get_mpz_t(), S(t, j).get_mpz_t(), S(t, t).get_mpz_t());
                    col_axpy(j, t, q);
                    if (S(t, j) != 0)
                        clean = false;
                }
            if (!clean)
                continue;
            if (is_unit(S(t, t)))
                break;
            // divisibility: fold an offending row into the pivot row
            std::size_t bad = m;
            for (std::size_t i = t + 1; i < m && bad == m; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (!mpz_divisible_p(S(i, j).get_mpz_t(), S(t, t).get_mpz_t())) {
                        bad = i;
                        break;
                    }
            if (bad != m) {
                row_axpy(t, bad, Integer(-1));
                continue;
            }
            break;
        }
        if (S(t, t) < 0) {
            for (std::size_t j = 0; j < n; ++j)
                S(t, j) = -S(t, j);
            for (std::size_t j = 0; j < m; ++j)
                U(t, j) = -U(t, j);
        }
        ++t;
    }
    sf.rank = t;
    return sf;
}

// ---------------------------------------------------------------------------
// First homology
// ---------------------------------------------------------------------------

struct SpanningTree {
    std::vector<bool> in_tree;          // per edge class
    std::vector<std::size_t> non_tree;  // ascending edge indices
};

inline std::array<std::size_t, 2> edge_ends(const CellStructure& cs, std::size_t e) {
    const CellClass& c = cs.cells[1][e];
    return {cs.vertex_class(c.tet, c.verts[0]), cs.vertex_class(c.tet, c.verts[1])};
}

/// Breadth-first spanning tree of the 1-skeleton rooted at vertex class 0.
inline SpanningTree spanning_tree(const CellStructure& cs) {
    SpanningTree st;
    const std::size_t ne = cs.count(1), nv = cs.count(0);
    st.in_tree.assign(ne, false);
    std::vector<std::vector<std::size_t>> adj(nv);
    for (std::size_t e = 0; e < ne; ++e) {
        auto [u, v] = edge_ends(cs, e);
        adj[u].push_back(e);
        if (v != u)
            adj[v].push_back(e);
    }
    std::vector<bool> seen(nv, false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
        std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t e : adj[u]) {
            auto [a, b] = edge_ends(cs, e);
            std::size_t w = a == u ? b : a;
            if (!seen[w]) {
                seen[w] = true;
                st.in_tree[e] = true;
                queue.push_back(w);
            }
        }
    }
    for (std::size_t e = 0; e < ne; ++e)
        if (!st.in_tree[e])
            st.non_tree.push_back(e);
    return st;
}

struct H1Result {
    bool cyclic = false;
    Integer order = 0;                    // |H_1| when cyclic
    std::vector<Integer> factors;         // invariant factors > 1, then 0 per free summand
    SpanningTree tree;
    SmithForm snf;                        // of the non-tree rows of the 2-boundary
};

inline H1Result h1(const CellStructure& cs) {
    H1Result res;
    res.tree = spanning_tree(cs);
    IntegerMatrix d2 = boundary_matrix(cs, 2);
    IntegerMatrix R(res.tree.non_tree.size(), d2.cols(), Integer(0));
    for (std::size_t i = 0; i < res.tree.non_tree.size(); ++i)
        for (std::size_t j = 0; j < d2.cols(); ++j)
            R(i, j) = d2(res.tree.non_tree[i], j);
    res.snf = smith_normal_form(R);
    Integer order = 1;
    for (const auto& d : res.snf.diagonal())
        if (d != 1) {
            res.factors.push_back(d);
            order *= d;
        }
    std::size_t free_rank = R.rows() - res.snf.rank;
    for (std::size_t i = 0; i < free_rank; ++i)
        res.factors.push_back(0);
    res.cyclic = res.factors.size() <= 1 && free_rank == 0;
    if (res.cyclic)
        res.order = order;
    return res;
}

/// Z/n-valued 1-cochain on oriented edge classes.
struct Cocycle {
    Integer n;
    std::vector<Integer> values; // per edge class, in [0, n)
};

class NotCyclic : public std::runtime_error {
  public:
    explicit NotCyclic(std::vector<Integer> factors)
        : std::runtime_error("first homology is not cyclic"), factors_(std::move(factors)) {}
    const std::vector<Integer>& factors() const { return factors_; }

  private:
    std::vector<Integer> factors_;
};

/// Generator of H^1(M; Z/n): zero on the spanning tree, and on non-tree edges
/// the coordinate of the Smith basis vector carrying the invariant factor n.
inline Cocycle generator_cocycle(const CellStructure& cs, const H1Result& h) {
    if (!h.cyclic)
        throw NotCyclic(h.factors);
    if (h.order < 2)
        throw std::domain_error("generator_cocycle: requires |H_1| >= 2");
    Cocycle w{h.order, std::vector<Integer>(cs.count(1), Integer(0))};
    std::size_t r = h.snf.rank - 1; // the factor n sits last on the diagonal
    if (h.snf.S(r, r) != h.order)
        throw std::logic_error("generator_cocycle: unexpected Smith form");
    for (std::size_t i = 0; i < h.tree.non_tree.size(); ++i)
        w.values[h.tree.non_tree[i]] = mod(h.snf.U(r, i), h.order);
    return w;
}

inline Cocycle generator_cocycle(const CellStructure& cs, const Integer& n) {
    H1Result h = h1(cs);
    if (!h.cyclic)
        throw NotCyclic(h.factors);
    if (h.order != n)
        throw std::domain_error("generator_cocycle: |H_1| differs from n");
    return generator_cocycle(cs, h);
}

/// omega(u -> v) inside tetrahedron tet.
inline Integer cocycle_on(const CellStructure& cs, const Cocycle& w, std::size_t tet, int u, int v) {
    const Integer& val = w.values[cs.edge_class(tet, u, v)];
    return cs.edge_direction(tet, u, v) > 0 ? val : mod(-val, w.n);
}

/// The cocycle identity on every 2-cell.
inline bool is_cocycle(const CellStructure& cs, const Cocycle& w) {
    for (const auto& f : cs.cells[2]) {
        Integer s = 0;
        for (const auto& inc : f.faces)
            s += inc.sign * w.values[inc.cell];
        if (mod(s, w.n) != 0)
            return false;
    }
    return true;
}

/// True when scale * w is a coboundary mod n (the 1-skeleton is connected).
inline bool is_coboundary(const CellStructure& cs, const Cocycle& w, const Integer& scale = 1) {
    const std::size_t nv = cs.count(0);
    std::vector<std::optional<Integer>> phi(nv);
    phi[0] = Integer(0);
    SpanningTree st = spanning_tree(cs);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t e = 0; e < cs.count(1); ++e) {
            if (!st.in_tree[e])
                continue;
            auto [a, b] = edge_ends(cs, e);
            Integer val = scale * w.values[e];
            if (phi[a] && !phi[b]) {
                phi[b] = mod(*phi[a] + val, w.n);
                changed = true;
            } else if (phi[b] && !phi[a]) {
                phi[a] = mod(*phi[b] - val, w.n);
                changed = true;
            }
        }
    }
    for (std::size_t e = 0; e < cs.count(1); ++e) {
        auto [a, b] = edge_ends(cs, e);
        if (!phi[a] || !phi[b])
            return false;
        if (mod(*phi[b] - *phi[a] - scale * w.values[e], w.n) != 0)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Augmented rational complex and the sign normalization
// ---------------------------------------------------------------------------

/// 0 -> Q -> C_3 -> C_2 -> C_1 -> C_0 -> Q -> 0 with the fundamental class on
/// the left (tetrahedron signs from `orientation`) and the augmentation on the right.
template <class F>
BasedChainComplex<F> augmented_complex(const F& f, const CellStructure& cs,
                                       const std::vector<int>& orientation, const CellSigns& signs) {
    using E = typename F::Element;
    BasedChainComplex<F> C;
    C.dims = {1, cs.count(0), cs.count(1), cs.count(2), cs.count(3), 1};
    Matrix<E> aug(1, cs.count(0), f.zero());
    for (std::size_t v = 0; v < cs.count(0); ++v)
        aug(0, v) = f.from_int(signs.at(0, v));
    C.d.push_back(std::move(aug));
    for (int d = 1; d <= 3; ++d) {
        IntegerMatrix b = boundary_matrix(cs, d, &signs);
        Matrix<E> m(b.rows(), b.cols(), f.zero());
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j)
                if (b(i, j) != 0)
                    m(i, j) = f.from_integer(b(i, j));
        C.d.push_back(std::move(m));
    }
    Matrix<E> fund(cs.count(3), 1, f.zero());
    for (std::size_t i = 0; i < cs.count(3); ++i)
        fund(i, 0) = f.from_int(orientation[cs.cells[3][i].tet] * signs.at(3, i));
    C.d.push_back(std::move(fund));
    return C;
}

inline Rational augmented_rational_torsion(const CellStructure& cs, const std::vector<int>& orientation,
                                           const CellSigns& signs) {
    RationalField q;
    return torsion(q, augmented_complex(q, cs, orientation, signs));
}

struct SignFix {
    CellSigns signs;
    bool flipped = false;  // the first 3-cell was negated
    Rational augmented_torsion;
};

/// Chooses cell signs so the augmented rational torsion is positive, by
/// negating the first 3-cell when needed.
inline SignFix orientation_sign_fix(const CellStructure& cs, const std::vector<int>& orientation) {
    SignFix fix{CellSigns::identity(cs), false, 0};
    Rational t = augmented_rational_torsion(cs, orientation, fix.signs);
    if (t < 0) {
        fix.signs.sign[3][0] = -1;
        fix.flipped = true;
        t = -t;
    }
    fix.augmented_torsion = t;
    return fix;
}

/// Same choice, with the torsion taken mod 2^61 - 1 instead of over Q. The
/// augmented torsion is +-|H_1|, so the residue settles the sign; much
/// faster on large triangulations. Exact rationals when |H_1| is too big.
inline SignFix orientation_sign_fix(const CellStructure& cs, const std::vector<int>& orientation,
                                    const Integer& h1_order) {
    const std::uint64_t p = (std::uint64_t{1} << 61) - 1;
    if (h1_order < 1 || 2 * h1_order >= Integer(static_cast<unsigned long>(p)))
        return orientation_sign_fix(cs, orientation);
    PrimeField64 f(p);
    SignFix fix{CellSigns::identity(cs), false, 0};
    Integer r = f.to_integer(torsion(f, augmented_complex(f, cs, orientation, fix.signs)));
    if (r == p - h1_order) {
        fix.signs.sign[3][0] = -1;
        fix.flipped = true;
    } else if (r != h1_order) {
        throw std::logic_error("augmented torsion is not +-|H_1|");
    }
    fix.augmented_torsion = Rational(h1_order);
    return fix;
}

} // namespace lensid
