#pragma once

#include "lensid/cells.hpp"
#include "lensid/homology.hpp"
#include "lensid/integer.hpp"
#include "lensid/numbertheory.hpp"
#include "lensid/triangulation.hpp"
#include "lensid/twisted.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lensid {

class NotCandidate : public std::runtime_error {
  public:
    explicit NotCandidate(std::vector<Integer> factors)
        : std::runtime_error("first homology is not cyclic; not a lens space candidate"),
          factors_(std::move(factors)) {}
    const std::vector<Integer>& factors() const { return factors_; }

  private:
    std::vector<Integer> factors_;
};

class RetryBudgetExceeded : public std::runtime_error {
  public:
    explicit RetryBudgetExceeded(const std::string& last)
        : std::runtime_error("retry budget exceeded" + (last.empty() ? "" : " (last failure: " + last + ")")) {}
};

/// The torsion does not have the two-factor lens space form.
class FormulaMismatch : public std::runtime_error {
  public:
    explicit FormulaMismatch(const std::string& what) : std::runtime_error("formula mismatch: " + what) {}
};

class NonUnitRatio : public std::runtime_error {
  public:
    NonUnitRatio() : std::runtime_error("exponent ratio is not a unit") {}
};

/// Everything the identification needs that depends only on the triangulation.
struct PreparedManifold {
    CellStructure cs;
    std::vector<int> orientation; // coherent, tetrahedron 0 positive
    H1Result homology;
    Integer n;
    std::optional<Cocycle> omega;          // n >= 2
    SignFix fix;
    std::optional<ExponentComplex> complex; // n >= 2
};

/// Cells, H_1, generator cocycle, sign fix and exponent complex.
/// Throws NotCandidate when H_1 is not cyclic.
inline PreparedManifold prepare(const Triangulation& tri) {
    PreparedManifold pm;
    pm.cs = cells(tri);
    pm.orientation = coherent_orientation(tri);
    pm.homology = h1(pm.cs);
    if (!pm.homology.cyclic)
        throw NotCandidate(pm.homology.factors);
    pm.n = pm.homology.order;
    pm.fix = orientation_sign_fix(pm.cs, pm.orientation, pm.n);
    if (pm.n >= 2) {
        pm.omega = generator_cocycle(pm.cs, pm.homology);
        pm.complex = twisted_exponent_complex(pm.cs, *pm.omega, pm.fix.signs);
    }
    return pm;
}

using KClass = std::array<Integer, 2>;

/// {k, 1/k} mod n, smaller representative first. n = 1 gives {1, 1}.
inline KClass k_class_of(const Integer& k, const Integer& n) {
    if (n == 1)
        return {Integer(1), Integer(1)};
    Integer a = mod(k, n);
    Integer b = invmod(a, n);
    if (b < a)
        std::swap(a, b);
    return {a, b};
}

struct TorsionTriple {
    Integer ell, zeta;
    std::array<Integer, 3> f; // f(zeta), f(zeta^2), f(zeta^4)
};

inline TorsionTriple torsion_triple(const ExponentComplex& X, const Integer& ell, const Integer& zeta) {
    TorsionTriple tt{ell, mod(zeta, ell), {}};
    Integer z = tt.zeta;
    for (std::size_t i = 0; i < 3; ++i) {
        if (z == 1)
            throw NotAcyclic(0);
        tt.f[i] = twisted_torsion(X, ell, z);
        if (tt.f[i] == 0)
            throw NotAcyclic(0);
        z = z * z % ell;
    }
    return tt;
}

/// Intermediate values of the quadratic reconstruction, all residues mod ell.
struct PairSolution {
    Integer f_plus, f_plus_sq; // f+(zeta), f+(zeta^2)
    Integer g_plus, g_minus, g_plus_sq, h;
    std::array<Integer, 2> first_roots;  // {zeta^c, zeta^(a+b+c)}, ascending
    std::array<Integer, 2> second_roots; // {zeta^(a+c), zeta^(b+c)}, ascending
    std::array<Integer, 2> pair;         // {zeta^(sa), zeta^(sb)}, ascending
};

namespace detail {

inline std::array<Integer, 2> solve_monic_quadratic(const Integer& sum, const Integer& prod,
                                                    const Integer& ell) {
    Integer inv2 = (ell + 1) / 2;
    Integer disc = mod(sum * sum - 4 * prod, ell);
    auto r = sqrt_mod(disc, ell);
    if (!r)
        throw FormulaMismatch("quadratic has no root in Z/ell");
    Integer x1 = mod((sum + r->first) * inv2, ell), x2 = mod((sum - r->first) * inv2, ell);
    if (x2 < x1)
        std::swap(x1, x2);
    return {x1, x2};
}

} // namespace detail

/// Recovers {zeta^(sa), zeta^(sb)} from f(zeta), f(zeta^2), f(zeta^4) when
/// f(x) = x^c (1 - x^a)(1 - x^b).
inline PairSolution solve_pair(const TorsionTriple& tt) {
    const Integer& ell = tt.ell;
    if (ell < 3)
        throw std::domain_error("solve_pair: ell must be an odd prime");
    Integer inv2 = (ell + 1) / 2;
    PairSolution s;
    s.f_plus = tt.f[1] * invmod(tt.f[0], ell) % ell;
    s.f_plus_sq = tt.f[2] * invmod(tt.f[1], ell) % ell;
    s.g_plus = mod((s.f_plus + tt.f[0]) * inv2, ell);
    s.g_minus = mod((s.f_plus - tt.f[0]) * inv2, ell);
    s.g_plus_sq = mod((s.f_plus_sq + tt.f[1]) * inv2, ell);
    s.h = mod((s.g_plus * s.g_plus - s.g_plus_sq) * inv2, ell);
    s.first_roots = detail::solve_monic_quadratic(s.g_plus, s.h, ell);
    s.second_roots = detail::solve_monic_quadratic(s.g_minus, s.h, ell);
    if (s.first_roots[0] == 0)
        throw FormulaMismatch("zero root");
    Integer inv = invmod(s.first_roots[0], ell);
    s.pair = {s.second_roots[0] * inv % ell, s.second_roots[1] * inv % ell};
    if (s.pair[1] < s.pair[0])
        std::swap(s.pair[0], s.pair[1]);
    // the reconstruction must reproduce the first two evaluations
    Integer c = s.first_roots[0];
    Integer p0 = s.pair[0], p1 = s.pair[1];
    if (mod(c * (1 - p0) * (1 - p1) - tt.f[0], ell) != 0 ||
        mod(c * c * (1 - p0 * p0) * (1 - p1 * p1) - tt.f[1], ell) != 0)
        throw FormulaMismatch("reconstruction does not reproduce the torsion");
    return s;
}

struct KExtraction {
    std::array<Integer, 2> exponents; // discrete logs of the pair
    KClass k_class;
};

/// Discrete logs of both pair members, then k = a / b mod n.
inline KExtraction extract_k(const std::array<Integer, 2>& pair, const RootOfUnity& zeta,
                             DlogMethod method = DlogMethod::baby_step_giant_step,
                             DlogStats* stats = nullptr) {
    auto logs = dlog_many(zeta, {pair[0], pair[1]}, method, stats);
    const Integer& n = zeta.order;
    if (gcd(logs[0], n) != 1 || gcd(logs[1], n) != 1)
        throw NonUnitRatio();
    Integer k = logs[0] * invmod(logs[1], n) % n;
    return {{logs[0], logs[1]}, k_class_of(k, n)};
}

struct IdentifyOptions {
    std::uint64_t seed = 0x5eed;
    std::optional<Integer> ell;         // force this prime
    Integer small_threshold = 64;
    int max_primes = 8;
    int zeta_samples = 32;
    DlogMethod dlog_method = DlogMethod::baby_step_giant_step;
};

struct IdentifyResult {
    Integer n;
    KClass k_class;
    Integer ell = 0, zeta = 0;
    std::size_t retries = 0;
    bool small_n = false;
    std::optional<TorsionTriple> triple; // general path only
    DlogStats dlog_stats;
    std::string last_failure;
};

namespace detail {

inline Integer pick_prime(const Integer& n, const IdentifyOptions& opt, Rng& rng) {
    if (opt.ell) {
        if (mod(*opt.ell - 1, n) != 0 || !is_probable_prime(*opt.ell))
            throw std::invalid_argument("requested ell is not a prime congruent to 1 mod n");
        return *opt.ell;
    }
    return find_prime_1modn(n, rng).ell;
}

} // namespace detail

/// Brute-force identification for small n: enumerates x^c (1-x^a)(1-x^(ak))
/// against f at several powers of zeta (sharing c) until one class survives.
inline KClass small_n_classes_at(const ExponentComplex& X, const Integer& n, const Integer& ell,
                                 const Integer& zeta, std::set<KClass>& classes) {
    const unsigned long nn = n.get_ui();
    std::vector<unsigned long> units;
    for (unsigned long u = 1; u < nn; ++u)
        if (std::gcd(u, nn) == 1)
            units.push_back(u);
    if (nn == 2)
        units = {1};
    std::vector<unsigned long> js;
    std::vector<std::vector<Integer>> table; // table[t][e] = zeta^(j_t e)
    std::vector<Integer> values;
    auto add_j = [&](unsigned long j) {
        Integer zj = powmod(zeta, j, ell);
        if (zj == 1)
            return;
        js.push_back(j);
        std::vector<Integer> row(nn);
        Integer p = 1;
        for (unsigned long e = 0; e < nn; ++e) {
            row[e] = p;
            p = p * zj % ell;
        }
        table.push_back(std::move(row));
        values.push_back(twisted_torsion(X, ell, zj));
    };
    auto enumerate = [&]() {
        classes.clear();
        for (unsigned long x : units)
            for (unsigned long k : units)
                for (unsigned long c = 0; c < nn; ++c) {
                    bool ok = true;
                    for (std::size_t t = 0; t < js.size() && ok; ++t) {
                        const auto& row = table[t];
                        Integer v = row[c] * (1 - row[x]) % ell * (1 - row[x * k % nn]) % ell;
                        ok = mod(v - values[t], ell) == 0;
                    }
                    if (ok)
                        classes.insert(k_class_of(Integer(k), n));
                }
    };
    for (unsigned long j : {1ul, 2ul, 4ul})
        add_j(j);
    enumerate();
    for (unsigned long j = 3; classes.size() > 1 && j < 2 * nn; ++j) {
        if (j == 4)
            continue;
        add_j(j);
        enumerate();
    }
    if (classes.size() == 1)
        return *classes.begin();
    return {Integer(0), Integer(0)};
}

inline IdentifyResult small_n_identify(const PreparedManifold& pm, const IdentifyOptions& opt = {}) {
    IdentifyResult res;
    res.n = pm.n;
    res.small_n = true;
    if (pm.n == 1) {
        res.k_class = {Integer(1), Integer(1)};
        return res;
    }
    if (pm.n > opt.small_threshold)
        throw std::domain_error("small_n_identify: n above threshold");
    Rng rng(opt.seed);
    Factorization fac = factor(pm.n);
    for (int prime = 0; prime < opt.max_primes; ++prime) {
        Integer ell = detail::pick_prime(pm.n, opt, rng);
        for (int sample = 0; sample < opt.zeta_samples; ++sample, ++res.retries) {
            auto z = sample_root_of_unity(ell, pm.n, fac, rng, 1);
            if (!z) {
                if (res.last_failure.empty())
                    res.last_failure = "root of unity of too small order";
                continue;
            }
            std::set<KClass> classes;
            try {
                KClass kc = small_n_classes_at(*pm.complex, pm.n, ell, z->zeta, classes);
                if (kc[0] != 0) {
                    res.k_class = kc;
                    res.ell = ell;
                    res.zeta = z->zeta;
                    return res;
                }
                res.last_failure = classes.empty() ? "formula mismatch" : "ambiguous classes";
            } catch (const NotAcyclic& e) {
                res.last_failure = e.what();
            }
        }
    }
    throw RetryBudgetExceeded(res.last_failure);
}

/// Full pipeline: H_1, then either small-n enumeration or the three-evaluation
/// reconstruction with discrete logarithms, resampling zeta and ell on failure.
inline IdentifyResult identify(const PreparedManifold& pm, const IdentifyOptions& opt = {}) {
    if (pm.n <= opt.small_threshold || pm.n <= 4)
        return small_n_identify(pm, opt);
    IdentifyResult res;
    res.n = pm.n;
    Rng rng(opt.seed);
    Factorization fac = factor(pm.n, opt.seed);
    for (int prime = 0; prime < opt.max_primes; ++prime) {
        Integer ell = detail::pick_prime(pm.n, opt, rng);
        for (int sample = 0; sample < opt.zeta_samples; ++sample, ++res.retries) {
            auto r = root_of_unity(ell, pm.n, fac, rng.uniform(2, ell - 1));
            auto* z = std::get_if<RootOfUnity>(&r);
            if (!z) {
                if (res.last_failure.empty())
                    res.last_failure = "root of unity of too small order";
                continue;
            }
            try {
                TorsionTriple tt = torsion_triple(*pm.complex, ell, z->zeta);
                PairSolution ps = solve_pair(tt);
                KExtraction kx = extract_k(ps.pair, *z, opt.dlog_method, &res.dlog_stats);
                res.k_class = kx.k_class;
                res.ell = ell;
                res.zeta = z->zeta;
                res.triple = tt;
                return res;
            } catch (const NotAcyclic& e) {
                res.last_failure = e.what();
            } catch (const FormulaMismatch& e) {
                res.last_failure = e.what();
            } catch (const NonUnitRatio& e) {
                res.last_failure = e.what();
            } catch (const NotInSubgroup& e) {
                res.last_failure = e.what();
            }
        }
    }
    throw RetryBudgetExceeded(res.last_failure);
}

inline IdentifyResult identify(const Triangulation& tri, const IdentifyOptions& opt = {}) {
    return identify(prepare(tri), opt);
}

} // namespace lensid
