#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lensid {

/// Arbitrary-precision integer used for every exact quantity in the library.
using Integer = mpz_class;
using Rational = mpq_class;

/// Least nonnegative residue of a modulo m (m > 0).
inline Integer mod(const Integer& a, const Integer& m) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

/// b^e mod m for e >= 0.
inline Integer powmod(const Integer& b, const Integer& e, const Integer& m) {
    if (e < 0)
        throw std::domain_error("powmod: negative exponent");
    Integer r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Integer powmod(const Integer& b, unsigned long e, const Integer& m) {
    Integer r;
    mpz_powm_ui(r.get_mpz_t(), b.get_mpz_t(), e, m.get_mpz_t());
    return r;
}

/// Inverse of a modulo m; throws std::domain_error if gcd(a, m) != 1.
inline Integer invmod(const Integer& a, const Integer& m) {
    Integer r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::domain_error("invmod: not invertible");
    return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline std::string to_string(const Integer& x) { return x.get_str(10); }

/// Parses a decimal integer (optional leading '-'); throws std::invalid_argument.
inline Integer parse_integer(std::string_view text) {
    if (text.empty())
        throw std::invalid_argument("empty integer");
    std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (i == text.size())
        throw std::invalid_argument("malformed integer '" + std::string(text) + "'");
    for (std::size_t j = i; j < text.size(); ++j)
        if (text[j] < '0' || text[j] > '9')
            throw std::invalid_argument("malformed integer '" + std::string(text) + "'");
    Integer r;
    std::string s(text[0] == '+' ? text.substr(1) : text);
    r.set_str(s, 10);
    return r;
}

inline bool fits_u64(const Integer& x) {
    return x >= 0 && mpz_sizeinbase(x.get_mpz_t(), 2) <= 64;
}

inline std::uint64_t to_u64(const Integer& x) {
    if (!fits_u64(x))
        throw std::range_error("integer does not fit in 64 bits");
    std::uint64_t r = 0;
    mpz_export(&r, nullptr, -1, sizeof r, 0, 0, x.get_mpz_t());
    return r;
}

inline Integer from_u64(std::uint64_t v) {
    Integer r;
    mpz_import(r.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
    return r;
}

/// Seeded source of randomness. Every randomized routine takes one of these
/// explicitly so results are reproducible from the seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed), gmp_(gmp_randinit_mt) {
        gmp_.seed(from_u64(seed));
    }

    /// Uniform integer in [lo, hi] (inclusive).
    Integer uniform(const Integer& lo, const Integer& hi) {
        if (hi < lo)
            throw std::invalid_argument("Rng::uniform: empty range");
        Integer span = hi - lo + 1;
        return lo + gmp_.get_z_range(span);
    }

    std::uint64_t next_u64() { return engine_(); }

    std::size_t below(std::size_t bound) {
        return std::uniform_int_distribution<std::size_t>(0, bound - 1)(engine_);
    }

  private:
    std::mt19937_64 engine_;
    gmp_randclass gmp_;
};

} // namespace lensid
