#pragma once

#include "lensid/integer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

namespace lensid {

// ---------------------------------------------------------------------------
// Primality
// ---------------------------------------------------------------------------

namespace detail {

inline bool miller_rabin_witness(const Integer& x, const Integer& d, unsigned s,
                                 const Integer& base) {
    Integer a = mod(base, x);
    if (a == 0)
        return false;
    Integer y = powmod(a, d, x);
    Integer xm1 = x - 1;
    if (y == 1 || y == xm1)
        return false;
    for (unsigned r = 1; r < s; ++r) {
        y = y * y % x;
        if (y == xm1)
            return false;
        if (y == 1)
            return true;
    }
    return true;
}

} // namespace detail

/// Strong-pseudoprime (Miller-Rabin) test. Below 3.317e24 the first thirteen
/// prime bases make the answer exact; above it `rounds` extra bases are drawn
/// from a generator seeded by x itself, so the function stays pure.
inline bool is_probable_prime(const Integer& x, int rounds = 40) {
    if (x < 2)
        return false;
    static constexpr std::array<unsigned, 13> small_bases = {2,  3,  5,  7,  11, 13, 17,
                                                             19, 23, 29, 31, 37, 41};
    for (unsigned p : small_bases) {
        if (x == p)
            return true;
        if (mpz_divisible_ui_p(x.get_mpz_t(), p))
            return false;
    }
    Integer d = x - 1;
    unsigned s = 0;
    while (mpz_even_p(d.get_mpz_t())) {
        d >>= 1;
        ++s;
    }
    for (unsigned p : small_bases)
        if (detail::miller_rabin_witness(x, d, s, Integer(p)))
            return false;
    static const Integer deterministic_bound("3317044064679887385961981");
    if (x < deterministic_bound)
        return true;
    Rng rng(mpz_get_ui(x.get_mpz_t()) ^ 0x9e3779b97f4a7c15ULL);
    for (int i = 0; i < rounds; ++i)
        if (detail::miller_rabin_witness(x, d, s, rng.uniform(2, x - 2)))
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

struct PrimePower {
    Integer p;
    unsigned e = 0;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

using Factorization = std::vector<PrimePower>;

inline Integer multiply_out(const Factorization& f) {
    Integer r = 1;
    for (const auto& [p, e] : f) {
        Integer pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
        r *= pe;
    }
    return r;
}

namespace detail {

// Brent's variant of Pollard rho; returns a nontrivial factor of composite x.
inline Integer pollard_rho(const Integer& x, Rng& rng) {
    if (mpz_even_p(x.get_mpz_t()))
        return 2;
    for (;;) {
        Integer c = rng.uniform(1, x - 1);
        Integer y = rng.uniform(0, x - 1);
        Integer g = 1, q = 1, ys, xs;
        const unsigned long block = 128;
        unsigned long r = 1;
        auto step = [&](const Integer& v) { return Integer((v * v + c) % x); };
        do {
            xs = y;
            for (unsigned long i = 0; i < r; ++i)
                y = step(y);
            unsigned long k = 0;
            do {
                ys = y;
                for (unsigned long i = 0; i < std::min(block, r - k); ++i) {
                    y = step(y);
                    Integer diff = xs - y;
                    q = q * abs(diff) % x;
                }
                g = gcd(q, x);
                k += block;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == x) {
            do {
                ys = step(ys);
                Integer diff = xs - ys;
                g = gcd(abs(diff), x);
            } while (g == 1);
        }
        if (g != x)
            return g;
        // cycle failure: retry with fresh parameters
    }
}

inline void factor_into(const Integer& x, std::vector<Integer>& primes, Rng& rng) {
    if (x == 1)
        return;
    if (is_probable_prime(x)) {
        primes.push_back(x);
        return;
    }
    Integer d = pollard_rho(x, rng);
    factor_into(d, primes, rng);
    factor_into(x / d, primes, rng);
}

} // namespace detail

/// Complete factorization of x >= 1: trial division by small primes, then
/// Pollard rho on the cofactor. Sorted by prime.
inline Factorization factor(const Integer& x, std::uint64_t seed = 1) {
    if (x < 1)
        throw std::domain_error("factor: argument must be >= 1");
    std::vector<Integer> primes;
    Integer rest = x;
    for (unsigned long p = 2; p < 10000 && p * p <= rest; p += (p == 2 ? 1 : 2)) {
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            primes.emplace_back(p);
            rest /= p;
        }
    }
    Rng rng(seed);
    detail::factor_into(rest, primes, rng);
    std::sort(primes.begin(), primes.end());
    Factorization out;
    for (const auto& p : primes) {
        if (!out.empty() && out.back().p == p)
            ++out.back().e;
        else
            out.push_back({p, 1});
    }
    return out;
}

/// Valid means: primes strictly increasing, exponents >= 1, each p prime.
inline bool is_valid_factorization(const Factorization& f) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i].e == 0 || !is_probable_prime(f[i].p))
            return false;
        if (i > 0 && !(f[i - 1].p < f[i].p))
            return false;
    }
    return true;
}

inline Integer euler_phi(const Factorization& f) {
    Integer r = 1;
    for (const auto& [p, e] : f) {
        Integer pe1;
        mpz_pow_ui(pe1.get_mpz_t(), p.get_mpz_t(), e - 1);
        r *= pe1 * (p - 1);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Prime search l = 1 (mod n)
// ---------------------------------------------------------------------------

struct PrimeSearchResult {
    Integer ell;
    std::size_t samples = 0;
};

enum class PrimeSearchMode { random_window, ascending };

struct PrimeSearchOptions {
    PrimeSearchMode mode = PrimeSearchMode::random_window;
    std::size_t max_samples = 1'000'000;
};

class SamplingBudgetExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Finds a probable prime l = 1 + c*n. Random mode samples c uniformly so that
/// l lies in [n+1, n^3], doubling the range of c whenever a full range's worth
/// of samples fails. Ascending mode scans c = 1, 2, ...
inline PrimeSearchResult find_prime_1modn(const Integer& n, Rng& rng,
                                          const PrimeSearchOptions& opt = {}) {
    if (n < 2)
        throw std::domain_error("find_prime_1modn: n must be >= 2");
    PrimeSearchResult res;
    if (opt.mode == PrimeSearchMode::ascending) {
        for (Integer c = 1;; ++c) {
            ++res.samples;
            Integer ell = 1 + c * n;
            if (is_probable_prime(ell)) {
                res.ell = ell;
                return res;
            }
            if (res.samples >= opt.max_samples)
                throw SamplingBudgetExceeded("prime search budget exceeded");
        }
    }
    Integer c_hi = (n * n * n - 1) / n;
    Integer since_widen = 0;
    while (res.samples < opt.max_samples) {
        ++res.samples;
        Integer ell = 1 + rng.uniform(1, c_hi) * n;
        if (is_probable_prime(ell)) {
            res.ell = ell;
            return res;
        }
        if (++since_widen >= c_hi) {
            c_hi *= 2;
            since_widen = 0;
        }
    }
    throw SamplingBudgetExceeded("prime search budget exceeded");
}

inline PrimeSearchResult find_prime_1modn(const Integer& n, std::uint64_t seed,
                                          const PrimeSearchOptions& opt = {}) {
    Rng rng(seed);
    return find_prime_1modn(n, rng, opt);
}

// ---------------------------------------------------------------------------
// Roots of unity
// ---------------------------------------------------------------------------

struct RootOfUnity {
    Integer ell;
    Integer zeta;
    Integer order;
    Factorization order_factors;
};

struct OrderTooSmall {
    Integer order;
};

/// Order of x in (Z/l)^x given that x^n = 1 and n's factorization.
inline Integer order_dividing(const Integer& x, const Integer& ell, const Integer& n,
                              const Factorization& fac) {
    Integer m = n;
    for (const auto& [p, e] : fac) {
        for (unsigned i = 0; i < e; ++i) {
            Integer cand = m / p;
            if (powmod(x, cand, ell) == 1)
                m = cand;
            else
                break;
        }
    }
    return m;
}

/// Factorization of a divisor m of n, read off from n's factorization.
inline Factorization restrict_factorization(const Factorization& fac, const Integer& m) {
    Factorization out;
    for (const auto& [p, e] : fac) {
        unsigned k = 0;
        Integer r = m;
        while (k < e && mpz_divisible_p(r.get_mpz_t(), p.get_mpz_t())) {
            r /= p;
            ++k;
        }
        if (k > 0)
            out.push_back({p, k});
    }
    return out;
}

/// zeta = alpha^((l-1)/n), accepted only if zeta^(n/p) != 1 for every prime
/// p | n. Otherwise reports the actual order so the caller can resample.
inline std::variant<RootOfUnity, OrderTooSmall>
root_of_unity(const Integer& ell, const Integer& n, const Factorization& fac,
              const Integer& alpha) {
    if (mod(ell - 1, n) != 0)
        throw std::domain_error("root_of_unity: n does not divide l-1");
    Integer zeta = powmod(mod(alpha, ell), (ell - 1) / n, ell);
    for (const auto& pe : fac)
        if (powmod(zeta, n / pe.p, ell) == 1)
            return OrderTooSmall{order_dividing(zeta, ell, n, fac)};
    return RootOfUnity{ell, zeta, n, fac};
}

inline std::optional<RootOfUnity> sample_root_of_unity(const Integer& ell, const Integer& n,
                                                       const Factorization& fac, Rng& rng,
                                                       int attempts = 64) {
    for (int i = 0; i < attempts; ++i) {
        auto r = root_of_unity(ell, n, fac, rng.uniform(2, ell - 1));
        if (auto* z = std::get_if<RootOfUnity>(&r))
            return *z;
    }
    return std::nullopt;
}

/// True iff zeta has multiplicative order exactly n modulo l.
inline bool has_order(const Integer& zeta, const Integer& ell, const Integer& n,
                      const Factorization& fac) {
    if (powmod(mod(zeta, ell), n, ell) != 1)
        return false;
    for (const auto& pe : fac)
        if (powmod(zeta, n / pe.p, ell) == 1)
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Square roots
// ---------------------------------------------------------------------------

/// Tonelli-Shanks. Returns {r, l-r} with r <= l-r, or nullopt for a
/// quadratic non-residue. The non-residue used internally is the least one.
inline std::optional<std::pair<Integer, Integer>> sqrt_mod(const Integer& x_in,
                                                           const Integer& ell) {
    if (ell < 3 || mpz_even_p(ell.get_mpz_t()))
        throw std::domain_error("sqrt_mod: modulus must be an odd prime");
    Integer x = mod(x_in, ell);
    if (x == 0)
        return std::make_pair(Integer(0), Integer(0));
    if (powmod(x, (ell - 1) / 2, ell) != 1)
        return std::nullopt;
    Integer q = ell - 1;
    unsigned long s = 0;
    while (mpz_even_p(q.get_mpz_t())) {
        q >>= 1;
        ++s;
    }
    Integer z = 2;
    while (powmod(z, (ell - 1) / 2, ell) != ell - 1)
        ++z;
    Integer m = s;
    Integer c = powmod(z, q, ell);
    Integer t = powmod(x, q, ell);
    Integer r = powmod(x, (q + 1) / 2, ell);
    while (t != 1) {
        unsigned long i = 0;
        Integer tt = t;
        while (tt != 1) {
            tt = tt * tt % ell;
            ++i;
        }
        Integer b = c;
        for (unsigned long j = 0; j + i + 1 < m.get_ui(); ++j)
            b = b * b % ell;
        m = i;
        c = b * b % ell;
        t = t * c % ell;
        r = r * b % ell;
    }
    Integer other = ell - r;
    if (other < r)
        std::swap(r, other);
    return std::make_pair(r, other);
}

// ---------------------------------------------------------------------------
// Discrete logarithm
// ---------------------------------------------------------------------------

class NotInSubgroup : public std::runtime_error {
  public:
    NotInSubgroup() : std::runtime_error("target not in the subgroup generated by the base") {}
};

enum class DlogMethod { baby_step_giant_step, exhaustive };

struct DlogStats {
    /// Largest single search space explored (prime order of a sub-problem).
    Integer largest_subsearch = 0;
    std::size_t group_operations = 0;
};

namespace detail {

inline std::uint64_t residue_key(const Integer& v) {
    return mpz_size(v.get_mpz_t()) == 0 ? 0 : mpz_getlimbn(v.get_mpz_t(), 0);
}

// Open-addressing table from residue low bits to the smallest exponent
// producing them. Hits are re-verified by the caller.
class BabyTable {
  public:
    explicit BabyTable(std::size_t entries) {
        std::size_t cap = 1;
        while (cap < 2 * entries + 1)
            cap <<= 1;
        keys_.assign(cap, 0);
        vals_.assign(cap, empty);
        mask_ = cap - 1;
    }
    void insert(std::uint64_t key, std::uint64_t j) {
        std::size_t h = hash(key);
        while (vals_[h] != empty) {
            if (keys_[h] == key)
                return; // keep the smallest exponent
            h = (h + 1) & mask_;
        }
        keys_[h] = key;
        vals_[h] = j;
    }
    template <class Fn> void for_each_match(std::uint64_t key, Fn&& fn) const {
        std::size_t h = hash(key);
        while (vals_[h] != empty) {
            if (keys_[h] == key)
                fn(vals_[h]);
            h = (h + 1) & mask_;
        }
    }

  private:
    static constexpr std::uint64_t empty = ~std::uint64_t{0};
    std::size_t hash(std::uint64_t k) const {
        k ^= k >> 33;
        k *= 0xff51afd7ed558ccdULL;
        k ^= k >> 33;
        return static_cast<std::size_t>(k) & mask_;
    }
    std::vector<std::uint64_t> keys_;
    std::vector<std::uint64_t> vals_;
    std::size_t mask_ = 0;
};

// Solves g^x = h_i for every target in a subgroup of prime order p.
inline std::vector<Integer> prime_order_dlogs(const Integer& g, const std::vector<Integer>& hs,
                                              const Integer& p, const Integer& ell,
                                              DlogMethod method, DlogStats* stats) {
    std::vector<Integer> out(hs.size());
    if (stats && p > stats->largest_subsearch)
        stats->largest_subsearch = p;
    std::vector<bool> done(hs.size(), false);
    std::size_t remaining = hs.size();
    for (std::size_t i = 0; i < hs.size(); ++i)
        if (hs[i] == 1) {
            out[i] = 0;
            done[i] = true;
            --remaining;
        }
    if (remaining == 0)
        return out;
    if (method == DlogMethod::exhaustive || p <= 64) {
        Integer cur = 1;
        for (Integer x = 0; x < p && remaining > 0; ++x) {
            for (std::size_t i = 0; i < hs.size(); ++i)
                if (!done[i] && cur == hs[i]) {
                    out[i] = x;
                    done[i] = true;
                    --remaining;
                }
            cur = cur * g % ell;
            if (stats)
                ++stats->group_operations;
        }
        if (remaining > 0)
            throw NotInSubgroup();
        return out;
    }
    // Baby steps g^j, j < m; giant steps h * g^(-m i).
    Integer sq;
    mpz_sqrt(sq.get_mpz_t(), p.get_mpz_t());
    Integer m = sq + 1;
    const Integer max_table = Integer(1) << 23;
    if (m > max_table)
        m = max_table;
    std::size_t msz = m.get_ui();
    BabyTable table(msz);
    Integer cur = 1;
    for (std::size_t j = 0; j < msz; ++j) {
        table.insert(residue_key(cur), j);
        cur = cur * g % ell;
    }
    Integer giant = invmod(powmod(g, m, ell), ell);
    Integer giant_steps = (p + m - 1) / m;
    std::vector<Integer> ys = hs;
    for (Integer i = 0; i < giant_steps && remaining > 0; ++i) {
        for (std::size_t t = 0; t < hs.size(); ++t) {
            if (done[t])
                continue;
            table.for_each_match(residue_key(ys[t]), [&](std::uint64_t j) {
                if (done[t])
                    return;
                Integer x = i * m + j;
                if (powmod(g, x, ell) == hs[t]) {
                    out[t] = mod(x, p);
                    done[t] = true;
                    --remaining;
                }
            });
            ys[t] = ys[t] * giant % ell;
        }
        if (stats)
            stats->group_operations += hs.size();
    }
    if (stats)
        stats->group_operations += msz;
    if (remaining > 0)
        throw NotInSubgroup();
    return out;
}

} // namespace detail

/// Pohlig-Hellman over the factorization of ord(base); each prime-order
/// sub-problem is solved by baby-step giant-step or by exhaustive search.
/// Solves all targets together so baby-step tables are shared.
inline std::vector<Integer> dlog_many(const RootOfUnity& base, const std::vector<Integer>& targets,
                                      DlogMethod method = DlogMethod::baby_step_giant_step,
                                      DlogStats* stats = nullptr) {
    const Integer& ell = base.ell;
    const Integer& n = base.order;
    std::vector<Integer> hs;
    hs.reserve(targets.size());
    for (const auto& t : targets) {
        Integer h = mod(t, ell);
        if (h == 0 || powmod(h, n, ell) != 1)
            throw NotInSubgroup();
        hs.push_back(h);
    }
    std::vector<Integer> residues(targets.size(), Integer(0));
    Integer modulus = 1;
    for (const auto& [p, e] : base.order_factors) {
        Integer pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
        Integer cof = n / pe;
        Integer g_pe = powmod(base.zeta, cof, ell);    // order p^e
        Integer gamma = powmod(g_pe, pe / p, ell);     // order p
        Integer g_pe_inv = invmod(g_pe, ell);
        std::vector<Integer> h_pe(hs.size()), x(hs.size(), Integer(0));
        for (std::size_t t = 0; t < hs.size(); ++t)
            h_pe[t] = powmod(hs[t], cof, ell);
        Integer pk = 1;
        for (unsigned k = 0; k < e; ++k) {
            std::vector<Integer> digit_targets(hs.size());
            Integer shift = pe / (pk * p);
            for (std::size_t t = 0; t < hs.size(); ++t) {
                Integer reduced = h_pe[t] * powmod(g_pe_inv, x[t], ell) % ell;
                digit_targets[t] = powmod(reduced, shift, ell);
            }
            auto digits = detail::prime_order_dlogs(gamma, digit_targets, p, ell, method, stats);
            for (std::size_t t = 0; t < hs.size(); ++t)
                x[t] += digits[t] * pk;
            pk *= p;
        }
        // CRT merge of x (mod p^e) into residues (mod modulus)
        for (std::size_t t = 0; t < hs.size(); ++t) {
            Integer diff = mod(x[t] - residues[t], pe);
            Integer step = diff * invmod(mod(modulus, pe), pe) % pe;
            residues[t] += modulus * step;
        }
        modulus *= pe;
    }
    for (std::size_t t = 0; t < hs.size(); ++t) {
        residues[t] = mod(residues[t], n);
        if (powmod(base.zeta, residues[t], ell) != hs[t])
            throw NotInSubgroup();
    }
    return residues;
}

inline Integer dlog(const RootOfUnity& base, const Integer& target,
                    DlogMethod method = DlogMethod::baby_step_giant_step,
                    DlogStats* stats = nullptr) {
    return dlog_many(base, {target}, method, stats).front();
}

} // namespace lensid
