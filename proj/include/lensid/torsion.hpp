#pragma once

#include "lensid/integer.hpp"
#include "lensid/matrix.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace lensid {

/// Finite chain complex C_m -> ... -> C_0 over the field F, in distinguished
/// bases. d[k-1] is the matrix of the differential C_k -> C_{k-1}.
template <class F> struct BasedChainComplex {
    using Element = typename F::Element;
    std::vector<std::size_t> dims;
    std::vector<Matrix<Element>> d;

    std::size_t length() const { return dims.empty() ? 0 : dims.size() - 1; }

    /// Shape check: d has one matrix per degree >= 1 of the right size.
    bool well_formed() const {
        if (dims.empty() || d.size() != dims.size() - 1)
            return false;
        for (std::size_t k = 1; k < dims.size(); ++k)
            if (d[k - 1].rows() != dims[k - 1] || d[k - 1].cols() != dims[k])
                return false;
        return true;
    }
};

class NotAcyclic : public std::runtime_error {
  public:
    explicit NotAcyclic(std::size_t degree)
        : std::runtime_error("chain complex is not acyclic (homology in degree " +
                             std::to_string(degree) + ")"),
          degree_(degree) {}
    std::size_t degree() const { return degree_; }

  private:
    std::size_t degree_;
};

/// Order in which columns are offered as pivots when choosing adapted bases.
struct PivotPolicy {
    enum class Kind { ascending, descending, shuffled };
    Kind kind = Kind::ascending;
    std::uint64_t seed = 0;

    std::vector<std::size_t> order(std::size_t degree, std::size_t n) const {
        std::vector<std::size_t> o(n);
        std::iota(o.begin(), o.end(), std::size_t{0});
        if (kind == Kind::descending)
            std::reverse(o.begin(), o.end());
        else if (kind == Kind::shuffled) {
            std::mt19937_64 g(seed * 0x9e3779b97f4a7c15ULL + degree);
            std::shuffle(o.begin(), o.end(), g);
        }
        return o;
    }
};

template <class F> typename F::Element matrix_determinant(const F& f, Matrix<typename F::Element> m) {
    using E = typename F::Element;
    const std::size_t n = m.rows();
    if (m.cols() != n)
        throw std::invalid_argument("determinant: matrix not square");
    E det = f.one();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && f.is_zero(m(p, c)))
            ++p;
        if (p == n)
            return f.zero();
        if (p != c) {
            m.swap_rows(p, c);
            det = f.neg(det);
        }
        det = f.mul(det, m(c, c));
        E inv = f.inv(m(c, c));
        for (std::size_t r = c + 1; r < n; ++r) {
            if (f.is_zero(m(r, c)))
                continue;
            E factor = f.mul(m(r, c), inv);
            for (std::size_t j = c + 1; j < n; ++j)
                if (!f.is_zero(m(c, j)))
                    m(r, j) = f.sub(m(r, j), f.mul(factor, m(c, j)));
        }
    }
    return det;
}

namespace detail {

// Columns of m that become pivots when columns are scanned in `order`.
template <class F>
std::vector<std::size_t> pivot_columns(const F& f, Matrix<typename F::Element> m,
                                       const std::vector<std::size_t>& order) {
    using E = typename F::Element;
    const std::size_t rows = m.rows();
    std::vector<bool> used(rows, false);
    std::vector<std::size_t> pivots;
    for (std::size_t j : order) {
        if (pivots.size() == rows)
            break;
        std::size_t p = rows;
        for (std::size_t r = 0; r < rows; ++r)
            if (!used[r] && !f.is_zero(m(r, j))) {
                p = r;
                break;
            }
        if (p == rows)
            continue;
        used[p] = true;
        pivots.push_back(j);
        E inv = f.inv(m(p, j));
        for (std::size_t r = 0; r < rows; ++r) {
            if (used[r] || f.is_zero(m(r, j)))
                continue;
            E factor = f.mul(m(r, j), inv);
            for (std::size_t c = 0; c < m.cols(); ++c)
                if (!f.is_zero(m(p, c)))
                    m(r, c) = f.sub(m(r, c), f.mul(factor, m(p, c)));
        }
    }
    std::sort(pivots.begin(), pivots.end());
    return pivots;
}

} // namespace detail

/// Torsion of an acyclic based complex: the alternating product of the
/// determinants det(A_k)^{(-1)^k}, exponent +1 in degree 0, where A_k
/// expresses an adapted basis in the distinguished one. The adapted basis
/// lifts each image using distinguished basis vectors chosen by `policy`.
template <class F>
typename F::Element torsion(const F& f, const BasedChainComplex<F>& C, const PivotPolicy& policy = {}) {
    using E = typename F::Element;
    if (!C.well_formed())
        throw std::invalid_argument("torsion: malformed complex");
    const std::size_t m = C.length();
    E result = f.one();
    std::vector<std::size_t> prev; // P_{k-1}: lifted basis vectors in C_{k-1}
    for (std::size_t k = 1; k <= m; ++k) {
        const auto& D = C.d[k - 1];
        std::vector<bool> in_prev(C.dims[k - 1], false);
        for (auto p : prev)
            in_prev[p] = true;
        std::vector<std::size_t> rows;
        long inversions = 0;
        for (std::size_t r = 0, seen = 0; r < C.dims[k - 1]; ++r) {
            if (in_prev[r]) {
                ++seen;
            } else {
                rows.push_back(r);
                inversions += static_cast<long>(seen);
            }
        }
        Matrix<E> M(rows.size(), C.dims[k], f.zero());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < C.dims[k]; ++j)
                M(i, j) = D(rows[i], j);
        auto piv = detail::pivot_columns(f, M, policy.order(k, C.dims[k]));
        if (piv.size() != rows.size())
            throw NotAcyclic(k - 1);
        Matrix<E> S(rows.size(), rows.size(), f.zero());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < piv.size(); ++j)
                S(i, j) = M(i, piv[j]);
        E det = matrix_determinant(f, std::move(S));
        if (inversions % 2)
            det = f.neg(det);
        result = ((k - 1) % 2 == 0) ? f.mul(result, det) : f.mul(result, f.inv(det));
        prev = std::move(piv);
    }
    if (prev.size() != C.dims[m])
        throw NotAcyclic(m);
    return result;
}

} // namespace lensid
