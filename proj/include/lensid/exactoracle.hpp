#pragma once

#include "lensid/integer.hpp"
#include "lensid/torsion.hpp"
#include "lensid/twisted.hpp"

#include <array>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace lensid {

using IntegerPoly = std::vector<Integer>; // coefficients, lowest degree first

namespace detail {

inline void trim(IntegerPoly& p) {
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

// Exact quotient a / b for monic b.
inline IntegerPoly divide_monic(IntegerPoly a, const IntegerPoly& b) {
    trim(a);
    if (a.size() < b.size())
        return {};
    IntegerPoly q(a.size() - b.size() + 1, Integer(0));
    for (std::size_t i = q.size(); i-- > 0;) {
        Integer c = a[i + b.size() - 1];
        q[i] = c;
        for (std::size_t j = 0; j < b.size(); ++j)
            a[i + j] -= c * b[j];
    }
    trim(a);
    if (!a.empty())
        throw std::logic_error("divide_monic: nonzero remainder");
    return q;
}

} // namespace detail

/// Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d.
inline IntegerPoly cyclotomic_poly(unsigned m) {
    if (m == 0)
        throw std::domain_error("cyclotomic_poly: m must be >= 1");
    IntegerPoly p(m + 1, Integer(0));
    p[0] = -1;
    p[m] = 1;
    for (unsigned d = 1; d < m; ++d)
        if (m % d == 0)
            p = detail::divide_monic(p, cyclotomic_poly(d));
    return p;
}

/// Q(zeta_m) as Q[x] / Phi_m, elements stored densely with phi(m) rational
/// coefficients.
class CyclotomicField {
  public:
    using Element = std::vector<Rational>;

    explicit CyclotomicField(unsigned m) : m_(m), phi_(cyclotomic_poly(m)) {
        if (m < 1)
            throw std::domain_error("CyclotomicField: m must be >= 1");
        deg_ = phi_.size() - 1;
    }

    unsigned order() const { return m_; }
    std::size_t degree() const { return deg_; }
    const IntegerPoly& modulus() const { return phi_; }

    Element zero() const { return Element(deg_, Rational(0)); }
    Element one() const {
        Element e = zero();
        e[0] = 1;
        return e;
    }
    Element from_int(long v) const {
        Element e = zero();
        e[0] = v;
        return e;
    }
    Element from_integer(const Integer& v) const {
        Element e = zero();
        e[0] = Rational(v);
        return e;
    }
    /// zeta_m^e for any integer e.
    Element zeta_power(const Integer& e) const {
        Integer r = mod(e, Integer(m_));
        std::vector<Rational> p(r.get_ui() + 1, Rational(0));
        p.back() = 1;
        return reduce(std::move(p));
    }

    Element add(const Element& a, const Element& b) const {
        Element r(deg_);
        for (std::size_t i = 0; i < deg_; ++i)
            r[i] = a[i] + b[i];
        return r;
    }
    Element sub(const Element& a, const Element& b) const {
        Element r(deg_);
        for (std::size_t i = 0; i < deg_; ++i)
            r[i] = a[i] - b[i];
        return r;
    }
    Element neg(const Element& a) const {
        Element r(deg_);
        for (std::size_t i = 0; i < deg_; ++i)
            r[i] = -a[i];
        return r;
    }
    Element mul(const Element& a, const Element& b) const {
        if (deg_ == 0)
            return {};
        std::vector<Rational> p(2 * deg_ - 1, Rational(0));
        for (std::size_t i = 0; i < deg_; ++i) {
            if (a[i] == 0)
                continue;
            for (std::size_t j = 0; j < deg_; ++j)
                if (b[j] != 0)
                    p[i + j] += a[i] * b[j];
        }
        return reduce(std::move(p));
    }
    bool is_zero(const Element& a) const {
        for (const auto& c : a)
            if (c != 0)
                return false;
        return true;
    }
    bool equal(const Element& a, const Element& b) const { return a == b; }

    /// Inverse via the extended Euclidean algorithm in Q[x].
    Element inv(const Element& a) const {
        if (is_zero(a))
            throw std::domain_error("CyclotomicField: inverse of zero");
        using Poly = std::vector<Rational>;
        auto trim = [](Poly& p) {
            while (!p.empty() && p.back() == 0)
                p.pop_back();
        };
        Poly r0(phi_.begin(), phi_.end()), r1(a.begin(), a.end());
        for (auto& c : r0)
            c.canonicalize();
        trim(r1);
        Poly s0{}, s1{Rational(1)}; // coefficients of a
        while (!r1.empty()) {
            Poly q(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 0, Rational(0));
            Poly rem = r0;
            while (rem.size() >= r1.size() && !rem.empty()) {
                std::size_t shift = rem.size() - r1.size();
                Rational c = rem.back() / r1.back();
                q[shift] = c;
                for (std::size_t j = 0; j < r1.size(); ++j)
                    rem[shift + j] -= c * r1[j];
                trim(rem);
            }
            // s2 = s0 - q * s1
            Poly qs(q.size() + s1.size(), Rational(0));
            for (std::size_t i = 0; i < q.size(); ++i)
                for (std::size_t j = 0; j < s1.size(); ++j)
                    qs[i + j] += q[i] * s1[j];
            Poly s2(std::max(s0.size(), qs.size()), Rational(0));
            for (std::size_t i = 0; i < s0.size(); ++i)
                s2[i] += s0[i];
            for (std::size_t i = 0; i < qs.size(); ++i)
                s2[i] -= qs[i];
            trim(s2);
            r0 = std::move(r1);
            r1 = std::move(rem);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        // r0 is a nonzero constant: a * s0 = r0 (mod Phi)
        if (r0.size() != 1)
            throw std::logic_error("CyclotomicField: element not invertible");
        for (auto& c : s0)
            c /= r0[0];
        return reduce(std::move(s0));
    }

    /// Image under zeta_m -> z in Z/ell (z of order m); denominators must be units.
    Integer evaluate(const Element& a, const Integer& ell, const Integer& z) const {
        Integer acc = 0, p = 1;
        for (std::size_t i = 0; i < deg_; ++i) {
            Integer num = a[i].get_num(), den = a[i].get_den();
            acc += num * invmod(mod(den, ell), ell) % ell * p;
            p = p * z % ell;
        }
        return mod(acc, ell);
    }

  private:
    Element reduce(std::vector<Rational> p) const {
        for (std::size_t i = p.size(); i-- > deg_;) {
            Rational c = p[i];
            if (c == 0)
                continue;
            for (std::size_t j = 0; j <= deg_; ++j)
                p[i - deg_ + j] -= c * Rational(phi_[j]);
        }
        p.resize(deg_, Rational(0));
        return p;
    }

    unsigned m_;
    IntegerPoly phi_;
    std::size_t deg_ = 0;
};

class OrderTooLarge : public std::domain_error {
  public:
    OrderTooLarge() : std::domain_error("cyclotomic order above the exact-arithmetic guard") {}
};

/// Torsion over Q(zeta_m) of the twisted complex, X := zeta_m (m | n, m > 1).
inline CyclotomicField::Element exact_twisted_torsion(const ExponentComplex& X, unsigned m,
                                                      unsigned guard = 200) {
    if (m > guard)
        throw OrderTooLarge();
    if (m < 2 || mod(X.n, Integer(m)) != 0)
        throw std::domain_error("exact_twisted_torsion: need m | n and m > 1");
    CyclotomicField K(m);
    using E = CyclotomicField::Element;
    BasedChainComplex<CyclotomicField> C;
    C.dims.assign(X.dims.begin(), X.dims.end());
    for (const auto& dm : X.d) {
        Matrix<E> out(dm.rows(), dm.cols(), K.zero());
        for (std::size_t i = 0; i < dm.rows(); ++i)
            for (std::size_t j = 0; j < dm.cols(); ++j)
                for (const auto& t : dm(i, j).terms)
                    out(i, j) = K.add(out(i, j), K.mul(K.from_int(t.coeff), K.zeta_power(t.exponent)));
        C.d.push_back(std::move(out));
    }
    return torsion(K, C);
}

struct FormulaTerm {
    unsigned a, b, c;
    friend bool operator==(const FormulaTerm&, const FormulaTerm&) = default;
};

/// All (a, b, c), a and b units mod m, with v = zeta^c (1 - zeta^a)(1 - zeta^b).
inline std::vector<FormulaTerm> formula_match(const CyclotomicField::Element& v, unsigned m,
                                              unsigned guard = 200) {
    if (m > guard)
        throw OrderTooLarge();
    CyclotomicField K(m);
    std::vector<CyclotomicField::Element> pw(m);
    for (unsigned e = 0; e < m; ++e)
        pw[e] = K.zeta_power(Integer(e));
    std::vector<FormulaTerm> out;
    if (K.is_zero(v))
        return out;
    for (unsigned a = 1; a < m; ++a) {
        if (std::gcd(a, m) != 1)
            continue;
        for (unsigned b = 1; b < m; ++b) {
            if (std::gcd(b, m) != 1)
                continue;
            auto prod = K.mul(K.sub(K.one(), pw[a]), K.sub(K.one(), pw[b]));
            for (unsigned c = 0; c < m; ++c)
                if (K.mul(pw[c], prod) == v)
                    out.push_back({a, b, c});
        }
    }
    return out;
}

/// {a/b, b/a} mod m, ascending.
inline std::array<unsigned, 2> ratio_class(const FormulaTerm& t, unsigned m) {
    Integer k = Integer(t.a) * invmod(Integer(t.b), Integer(m)) % m;
    Integer ki = invmod(k, Integer(m));
    unsigned x = static_cast<unsigned>(k.get_ui()), y = static_cast<unsigned>(ki.get_ui());
    if (y < x)
        std::swap(x, y);
    return {x, y};
}

} // namespace lensid
