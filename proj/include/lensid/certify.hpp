#pragma once

#include "lensid/identify.hpp"
#include "lensid/integer.hpp"
#include "lensid/numbertheory.hpp"
#include "lensid/triangulation.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lensid {

/// Conventions the verifier needs to reproduce the prover's gauge.
struct Gauge {
    std::string orientation = "tet0-positive";
    unsigned long tree_root = 0;
    bool sign_flip = false;
    std::vector<Integer> torsion; // f(zeta^j) for j = 1, 2, 4 with zeta^j != 1
    friend bool operator==(const Gauge&, const Gauge&) = default;
};

struct Certificate {
    Integer n, k, ell, zeta;
    Factorization factors;
    Gauge gauge;
    friend bool operator==(const Certificate&, const Certificate&) = default;
};

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::json integer_to_json(const Integer& x) {
    if (fits_u64(x))
        return to_u64(x);
    return to_string(x);
}

inline Integer integer_from_json(const nlohmann::json& j, const char* what) {
    if (j.is_number_unsigned())
        return from_u64(j.get<std::uint64_t>());
    if (j.is_number_integer())
        return Integer(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string())
        return parse_integer(j.get<std::string>());
    throw std::invalid_argument(std::string("certificate: field '") + what + "' is not an integer");
}

} // namespace detail

inline nlohmann::json to_json(const Certificate& c) {
    using detail::integer_to_json;
    nlohmann::json j;
    j["n"] = integer_to_json(c.n);
    j["k"] = integer_to_json(c.k);
    j["ell"] = integer_to_json(c.ell);
    j["zeta"] = integer_to_json(c.zeta);
    j["factors"] = nlohmann::json::array();
    for (const auto& [p, e] : c.factors)
        j["factors"].push_back({integer_to_json(p), e});
    nlohmann::json g;
    g["orientation"] = c.gauge.orientation;
    g["tree_root"] = c.gauge.tree_root;
    g["sign_flip"] = c.gauge.sign_flip;
    g["torsion"] = nlohmann::json::array();
    for (const auto& t : c.gauge.torsion)
        g["torsion"].push_back(integer_to_json(t));
    j["gauge"] = g;
    return j;
}

inline Certificate certificate_from_json(const nlohmann::json& j) {
    using detail::integer_from_json;
    if (!j.is_object())
        throw std::invalid_argument("certificate: expected a JSON object");
    Certificate c;
    c.n = integer_from_json(j.at("n"), "n");
    c.k = integer_from_json(j.at("k"), "k");
    c.ell = integer_from_json(j.at("ell"), "ell");
    c.zeta = integer_from_json(j.at("zeta"), "zeta");
    for (const auto& pe : j.at("factors")) {
        if (!pe.is_array() || pe.size() != 2 || !pe[1].is_number_unsigned())
            throw std::invalid_argument("certificate: malformed factor entry");
        c.factors.push_back({integer_from_json(pe[0], "factors"), pe[1].get<unsigned>()});
    }
    const auto& g = j.at("gauge");
    c.gauge.orientation = g.at("orientation").get<std::string>();
    c.gauge.tree_root = g.at("tree_root").get<unsigned long>();
    c.gauge.sign_flip = g.at("sign_flip").get<bool>();
    for (const auto& t : g.at("torsion"))
        c.gauge.torsion.push_back(integer_from_json(t, "torsion"));
    return c;
}

inline std::string serialize_certificate(const Certificate& c) { return to_json(c).dump(2) + "\n"; }

inline Certificate parse_certificate(const std::string& text) {
    try {
        return certificate_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("certificate: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Prover and verifier
// ---------------------------------------------------------------------------

/// Torsion at zeta^j for j = 1, 2, 4, skipping powers equal to 1.
inline std::vector<Integer> gauge_torsion(const PreparedManifold& pm, const Integer& ell, const Integer& zeta) {
    std::vector<Integer> out;
    if (pm.n < 2)
        return out;
    for (unsigned long j : {1ul, 2ul, 4ul}) {
        Integer z = powmod(zeta, j, ell);
        if (z != 1)
            out.push_back(twisted_torsion(*pm.complex, ell, z));
    }
    return out;
}

inline Certificate make_certificate(const PreparedManifold& pm, const IdentifyResult& r) {
    Certificate c;
    c.n = pm.n;
    c.k = r.k_class[0];
    c.factors = factor(pm.n);
    if (pm.n == 1) {
        c.ell = 2;
        c.zeta = 1;
    } else {
        c.ell = r.ell;
        c.zeta = r.zeta;
    }
    c.gauge.sign_flip = pm.fix.flipped;
    c.gauge.torsion = gauge_torsion(pm, c.ell, c.zeta);
    return c;
}

inline Certificate make_certificate(const Triangulation& tri, std::uint64_t seed) {
    PreparedManifold pm = prepare(tri);
    IdentifyOptions opt;
    opt.seed = seed;
    return make_certificate(pm, identify(pm, opt));
}

struct Verdict {
    enum class Kind { accept, reject, inconclusive };
    Kind kind = Kind::reject;
    std::string reason;

    static Verdict accept() { return {Kind::accept, {}}; }
    static Verdict reject(std::string why) { return {Kind::reject, std::move(why)}; }
    static Verdict inconclusive(std::string why) { return {Kind::inconclusive, std::move(why)}; }
    bool accepted() const { return kind == Kind::accept; }
    bool rejected() const { return kind == Kind::reject; }
};

namespace detail {

// (x^k == y) or (y^k == x) in Z/ell.
inline bool pair_test(const std::array<Integer, 2>& pair, const Integer& k, const Integer& ell) {
    return powmod(pair[0], k, ell) == pair[1] || powmod(pair[1], k, ell) == pair[0];
}

} // namespace detail

/// Deterministic check of a certificate against a triangulation.
inline Verdict verify_certificate(const Triangulation& tri, const Certificate& c) {
    if (c.n < 1)
        return Verdict::reject("n");
    if (!is_valid_factorization(c.factors) || multiply_out(c.factors) != c.n)
        return Verdict::reject("factorization");
    if (!is_probable_prime(c.ell) || mod(c.ell - 1, c.n) != 0)
        return Verdict::reject("ell");
    if (c.zeta < 1 || c.zeta >= c.ell || !has_order(c.zeta, c.ell, c.n, c.factors))
        return Verdict::reject("zeta");
    if (c.k < 1 || (c.n > 1 && (c.k >= c.n || gcd(c.k, c.n) != 1)))
        return Verdict::reject("k not a unit");
    if (c.gauge.orientation != "tet0-positive" || c.gauge.tree_root != 0)
        return Verdict::reject("gauge");
    if (!involution_error(tri).empty() || !validate(tri).ok())
        return Verdict::reject("triangulation");
    PreparedManifold pm;
    try {
        pm = prepare(tri);
    } catch (const NotCandidate&) {
        return Verdict::reject("homology");
    }
    if (pm.n != c.n)
        return Verdict::reject("homology");
    if (pm.fix.flipped != c.gauge.sign_flip)
        return Verdict::reject("gauge");
    if (c.n == 1)
        return c.gauge.torsion.empty() ? Verdict::accept() : Verdict::reject("torsion");
    std::vector<Integer> values;
    try {
        values = gauge_torsion(pm, c.ell, c.zeta);
    } catch (const NotAcyclic&) {
        return Verdict::reject("torsion");
    }
    if (values != c.gauge.torsion)
        return Verdict::reject("torsion");
    if (c.n >= 5) {
        try {
            PairSolution ps = solve_pair({c.ell, c.zeta, {values[0], values[1], values[2]}});
            return detail::pair_test(ps.pair, c.k, c.ell) ? Verdict::accept() : Verdict::reject("k mismatch");
        } catch (const FormulaMismatch&) {
            return Verdict::reject("formula");
        }
    }
    std::set<KClass> classes;
    KClass kc = small_n_classes_at(*pm.complex, c.n, c.ell, c.zeta, classes);
    if (kc[0] == 0)
        return Verdict::reject("formula");
    return (kc[0] == c.k || kc[1] == c.k) ? Verdict::accept() : Verdict::reject("k mismatch");
}

struct CorpOptions {
    std::uint64_t seed = 0x5eed;
    int trials = 20;
    bool require_full_order = false; // discard samples with ord(zeta) < n
};

/// Randomized test of a claimed k: every trial that passes validates k modulo
/// ord(zeta); Accept once those moduli have lcm n. Any failed test rejects.
inline Verdict corp_check(const PreparedManifold& pm, const Integer& k, const CorpOptions& opt = {}) {
    const Integer& n = pm.n;
    if (n == 1)
        return Verdict::accept();
    if (k < 1 || gcd(k, n) != 1)
        return Verdict::reject("k not a unit");
    if (n <= 4) {
        // no zeta with zeta^4 != 1 exists: decide by direct enumeration
        IdentifyOptions io;
        io.seed = opt.seed;
        KClass kc = small_n_identify(pm, io).k_class;
        Integer km = mod(k, n);
        return (kc[0] == km || kc[1] == km) ? Verdict::accept() : Verdict::reject("k mismatch");
    }
    Rng rng(opt.seed);
    Factorization fac = factor(n);
    Integer validated = 1;
    for (int trial = 0; trial < opt.trials; ++trial) {
        Integer ell = find_prime_1modn(n, rng).ell;
        Integer zeta, m;
        // forced full order: redraw alpha until zeta has order exactly n
        for (int draw = 0; draw < (opt.require_full_order ? 256 : 1); ++draw) {
            zeta = powmod(rng.uniform(2, ell - 1), (ell - 1) / n, ell);
            m = order_dividing(zeta, ell, n, fac);
            if (m == n)
                break;
        }
        if (mod(Integer(4), m) == 0)
            continue; // zeta^4 = 1: choose another alpha
        if (opt.require_full_order && m != n)
            continue;
        try {
            TorsionTriple tt = torsion_triple(*pm.complex, ell, zeta);
            PairSolution ps = solve_pair(tt);
            if (!detail::pair_test(ps.pair, k, ell))
                return Verdict::reject("k mismatch");
        } catch (const FormulaMismatch&) {
            return Verdict::reject("formula");
        } catch (const NotAcyclic&) {
            continue;
        }
        validated = lcm(validated, m);
        if (validated == n)
            return Verdict::accept();
    }
    return Verdict::inconclusive("validated modulus " + to_string(validated) + " of " + to_string(n));
}

class FactorTooLarge : public std::domain_error {
  public:
    explicit FactorTooLarge(const Integer& p)
        : std::domain_error("prime factor " + to_string(p) + " exceeds the smoothness bound") {}
};

/// identify with Pohlig-Hellman over exhaustive per-prime searches; requires
/// every prime factor of n to be at most `bound`.
inline IdentifyResult smooth_identify(const PreparedManifold& pm, const Integer& bound,
                                      std::uint64_t seed = 0x5eed) {
    for (const auto& [p, e] : factor(pm.n))
        if (p > bound)
            throw FactorTooLarge(p);
    IdentifyOptions opt;
    opt.seed = seed;
    opt.dlog_method = DlogMethod::exhaustive;
    opt.small_threshold = 4;
    return identify(pm, opt);
}

} // namespace lensid
