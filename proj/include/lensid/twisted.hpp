#pragma once

#include "lensid/cells.hpp"
#include "lensid/field.hpp"
#include "lensid/homology.hpp"
#include "lensid/integer.hpp"
#include "lensid/matrix.hpp"
#include "lensid/torsion.hpp"

#include <array>
#include <map>
#include <vector>

namespace lensid {

struct ExponentTerm {
    Integer exponent; // in [0, n)
    long coeff = 0;
    friend bool operator==(const ExponentTerm&, const ExponentTerm&) = default;
};

/// Finite formal sum of powers X^e with integer coefficients, e in Z/n.
/// Kept sorted by exponent with no zero coefficients.
struct ExponentPoly {
    std::vector<ExponentTerm> terms;

    void add(const Integer& e, long c) {
        if (c == 0)
            return;
        auto it = std::lower_bound(terms.begin(), terms.end(), e,
                                   [](const ExponentTerm& t, const Integer& x) { return t.exponent < x; });
        if (it != terms.end() && it->exponent == e) {
            it->coeff += c;
            if (it->coeff == 0)
                terms.erase(it);
        } else {
            terms.insert(it, {e, c});
        }
    }
    bool is_zero() const { return terms.empty(); }
    /// Value at X = 1.
    long at_one() const {
        long s = 0;
        for (const auto& t : terms)
            s += t.coeff;
        return s;
    }
    friend bool operator==(const ExponentPoly&, const ExponentPoly&) = default;
};

using ExponentMatrix = Matrix<ExponentPoly>;

/// C_3 -> C_2 -> C_1 -> C_0 with entries in Z[Z/n]; d[k-1] is the k-th differential.
struct ExponentComplex {
    Integer n;
    std::array<std::size_t, 4> dims{};
    std::array<ExponentMatrix, 3> d;
};

/// Twisted chain complex: the incidence of face r of a cell carries
/// X^(omega along the path, inside the representative tetrahedron, from the
/// cell's base vertex to the face's base vertex).
inline ExponentComplex twisted_exponent_complex(const CellStructure& cs, const Cocycle& w,
                                                const CellSigns& signs) {
    ExponentComplex X;
    X.n = w.n;
    for (int d = 0; d < 4; ++d)
        X.dims[static_cast<std::size_t>(d)] = cs.count(d);
    // potential of each label relative to label 0, per tetrahedron
    std::vector<std::array<Integer, 4>> pot(cs.tets);
    for (std::size_t i = 0; i < cs.tets; ++i) {
        pot[i][0] = 0;
        for (int v = 1; v < 4; ++v)
            pot[i][static_cast<std::size_t>(v)] = cocycle_on(cs, w, i, 0, v);
    }
    for (int d = 1; d <= 3; ++d) {
        ExponentMatrix m(cs.count(d - 1), cs.count(d));
        const auto& cl = cs.cells[static_cast<std::size_t>(d)];
        for (std::size_t c = 0; c < cl.size(); ++c) {
            const auto& p = pot[cl[c].tet];
            for (const auto& inc : cl[c].faces) {
                Integer e = mod(p[static_cast<std::size_t>(inc.base)] -
                                    p[static_cast<std::size_t>(cl[c].verts[0])],
                                w.n);
                long s = inc.sign * signs.at(d, c) * signs.at(d - 1, inc.cell);
                m(inc.cell, c).add(e, s);
            }
        }
        X.d[static_cast<std::size_t>(d - 1)] = std::move(m);
    }
    return X;
}

/// Product of exponent matrices in Z[Z/n].
inline ExponentMatrix compose(const ExponentMatrix& a, const ExponentMatrix& b, const Integer& n) {
    ExponentMatrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k).is_zero())
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                for (const auto& s : a(i, k).terms)
                    for (const auto& t : b(k, j).terms)
                        r(i, j).add(mod(s.exponent + t.exponent, n), s.coeff * t.coeff);
        }
    return r;
}

inline bool is_zero(const ExponentMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero())
                return false;
    return true;
}

/// X := 1.
inline IntegerMatrix at_one(const ExponentMatrix& m) {
    IntegerMatrix r(m.rows(), m.cols(), Integer(0));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            r(i, j) = m(i, j).at_one();
    return r;
}

template <class F>
typename F::Element field_pow(const F& f, typename F::Element x, const Integer& e) {
    auto r = f.one();
    std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t b = bits; b-- > 0;) {
        r = f.mul(r, r);
        if (mpz_tstbit(e.get_mpz_t(), b))
            r = f.mul(r, x);
    }
    return r;
}

/// Substitutes X := zeta (an element of F with zeta^n = 1).
template <class F>
BasedChainComplex<F> substitute(const F& f, const ExponentComplex& X, const typename F::Element& zeta) {
    using E = typename F::Element;
    std::map<Integer, E> powers;
    auto power = [&](const Integer& e) -> const E& {
        auto it = powers.find(e);
        if (it == powers.end())
            it = powers.emplace(e, field_pow(f, zeta, e)).first;
        return it->second;
    };
    BasedChainComplex<F> C;
    C.dims.assign(X.dims.begin(), X.dims.end());
    for (const auto& m : X.d) {
        Matrix<E> out(m.rows(), m.cols(), f.zero());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                for (const auto& t : m(i, j).terms)
                    out(i, j) = f.add(out(i, j), f.mul(f.from_int(t.coeff), power(t.exponent)));
        C.d.push_back(std::move(out));
    }
    return C;
}

/// Twisted torsion at zeta in Z/ell, as a residue in [0, ell).
inline Integer twisted_torsion(const ExponentComplex& X, const Integer& ell, const Integer& zeta,
                               const PivotPolicy& policy = {}) {
    if (ell < (Integer(1) << 63)) {
        PrimeField64 f(ell);
        auto C = substitute(f, X, f.from_integer(zeta));
        return f.to_integer(torsion(f, C, policy));
    }
    PrimeFieldBig f(ell);
    auto C = substitute(f, X, f.from_integer(zeta));
    return torsion(f, C, policy);
}

inline Integer twisted_torsion(const CellStructure& cs, const Cocycle& w, const CellSigns& signs,
                               const Integer& ell, const Integer& zeta) {
    return twisted_torsion(twisted_exponent_complex(cs, w, signs), ell, zeta);
}

} // namespace lensid
