#pragma once

#include "lensid/integer.hpp"

#include <cstdint>
#include <stdexcept>

namespace lensid {

// A field type F provides:
//   using Element = ...;
//   Element zero() const, one() const, from_int(long) const;
//   Element add(a,b), sub(a,b), mul(a,b), neg(a), inv(a)   (inv throws on 0)
//   bool is_zero(a), bool equal(a,b)
// The torsion engine is written against this shape only.

/// Z/l for a prime l < 2^63 with 128-bit intermediate products.
class PrimeField64 {
  public:
    using Element = std::uint64_t;

    explicit PrimeField64(std::uint64_t ell) : p_(ell) {
        if (ell < 2 || ell >= (std::uint64_t{1} << 63))
            throw std::domain_error("PrimeField64: modulus out of range");
    }
    explicit PrimeField64(const Integer& ell) : PrimeField64(to_u64(ell)) {}

    std::uint64_t modulus() const { return p_; }
    Element zero() const { return 0; }
    Element one() const { return 1 % p_; }
    Element from_int(long v) const {
        long long r = static_cast<long long>(v % static_cast<long long>(p_));
        return r < 0 ? static_cast<Element>(r + static_cast<long long>(p_))
                     : static_cast<Element>(r);
    }
    Element from_integer(const Integer& v) const { return to_u64(mod(v, from_u64(p_))); }
    Integer to_integer(Element a) const { return from_u64(a); }

    Element add(Element a, Element b) const {
        Element s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Element sub(Element a, Element b) const { return a >= b ? a - b : a + (p_ - b); }
    Element neg(Element a) const { return a == 0 ? 0 : p_ - a; }
    Element mul(Element a, Element b) const {
        return static_cast<Element>(static_cast<unsigned __int128>(a) * b % p_);
    }
    Element pow(Element a, std::uint64_t e) const {
        Element r = one();
        while (e) {
            if (e & 1)
                r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    Element inv(Element a) const {
        if (a == 0)
            throw std::domain_error("PrimeField64: inverse of zero");
        return pow(a, p_ - 2);
    }
    bool is_zero(Element a) const { return a == 0; }
    bool equal(Element a, Element b) const { return a == b; }

  private:
    std::uint64_t p_;
};

/// Z/l for an arbitrary prime l.
class PrimeFieldBig {
  public:
    using Element = Integer;

    explicit PrimeFieldBig(Integer ell) : p_(std::move(ell)) {
        if (p_ < 2)
            throw std::domain_error("PrimeFieldBig: modulus out of range");
    }

    const Integer& modulus() const { return p_; }
    Element zero() const { return 0; }
    Element one() const { return mod(Integer(1), p_); }
    Element from_int(long v) const { return mod(Integer(v), p_); }
    Element from_integer(const Integer& v) const { return mod(v, p_); }
    Integer to_integer(const Element& a) const { return a; }

    Element add(const Element& a, const Element& b) const {
        Element s = a + b;
        if (s >= p_)
            s -= p_;
        return s;
    }
    Element sub(const Element& a, const Element& b) const {
        Element s = a - b;
        if (s < 0)
            s += p_;
        return s;
    }
    Element neg(const Element& a) const { return a == 0 ? Element(0) : Element(p_ - a); }
    Element mul(const Element& a, const Element& b) const {
        Element r = a * b;
        mpz_mod(r.get_mpz_t(), r.get_mpz_t(), p_.get_mpz_t());
        return r;
    }
    Element pow(const Element& a, const Integer& e) const { return powmod(a, e, p_); }
    Element inv(const Element& a) const {
        if (a == 0)
            throw std::domain_error("PrimeFieldBig: inverse of zero");
        return invmod(a, p_);
    }
    bool is_zero(const Element& a) const { return a == 0; }
    bool equal(const Element& a, const Element& b) const { return a == b; }

  private:
    Integer p_;
};

/// The rationals.
class RationalField {
  public:
    using Element = Rational;

    Element zero() const { return 0; }
    Element one() const { return 1; }
    Element from_int(long v) const { return v; }
    Element from_integer(const Integer& v) const { return Rational(v); }

    Element add(const Element& a, const Element& b) const { return a + b; }
    Element sub(const Element& a, const Element& b) const { return a - b; }
    Element neg(const Element& a) const { return -a; }
    Element mul(const Element& a, const Element& b) const { return a * b; }
    Element inv(const Element& a) const {
        if (a == 0)
            throw std::domain_error("RationalField: inverse of zero");
        return 1 / a;
    }
    bool is_zero(const Element& a) const { return a == 0; }
    bool equal(const Element& a, const Element& b) const { return a == b; }
};

} // namespace lensid
