#include "lensid/certify.hpp"
#include "lensid/exactoracle.hpp"
#include "lensid/generators.hpp"
#include "lensid/identify.hpp"
#include "lensid/pachner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace lensid;

namespace {

enum Exit { ok = 0, usage = 2, not_candidate = 3, retry = 4, reject = 5, inconclusive = 6 };

// Input problems that map to exit 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw InputError("cannot write " + path);
}

Triangulation load(const std::string& path) {
    try {
        return parse_tri(read_file(path));
    } catch (const TriangulationError& e) {
        throw InputError(path + ": " + e.what());
    }
}

PreparedManifold load_prepared(const std::string& path) {
    Triangulation tri = load(path);
    ValidationReport rep = validate(tri);
    if (!rep.ok())
        throw InputError(path + ": " + rep.problem);
    return prepare(tri);
}

std::uint64_t parse_seed(const std::string& s) {
    if (s == "random")
        return (std::uint64_t(std::random_device{}()) << 32) ^ std::random_device{}();
    try {
        std::size_t used = 0;
        std::uint64_t v = std::stoull(s, &used, 0);
        if (used == s.size())
            return v;
    } catch (const std::exception&) {
    }
    throw InputError("bad seed '" + s + "'");
}

Integer parse_int_arg(const std::string& s, const char* what) {
    try {
        return parse_integer(s);
    } catch (const std::exception&) {
        throw InputError(std::string("bad ") + what + " '" + s + "'");
    }
}

nlohmann::json jint(const Integer& x) { return detail::integer_to_json(x); }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lens space recognition from triangulations"};
    app.require_subcommand(1);

    std::string seed_arg = "0x5eed", out_path, in_path, cert_path;

    auto* gen = app.add_subcommand("gen", "generate a lens space triangulation");
    gen->require_subcommand(1);
    std::uint64_t fan_n = 0, fan_k = 0;
    auto* gen_fan = gen->add_subcommand("fan", "fan_lens(N, K)");
    gen_fan->add_option("N", fan_n)->required();
    gen_fan->add_option("K", fan_k)->required();
    gen_fan->add_option("-o,--output", out_path);
    std::string seq_arg;
    auto* gen_layered = gen->add_subcommand("layered", "layered lens from a1,a2,... (entries 1..5, a1 >= 2)");
    gen_layered->add_option("SEQ", seq_arg)->required();
    gen_layered->add_option("-o,--output", out_path);

    std::size_t moves = 100;
    auto* obf = app.add_subcommand("obfuscate", "apply random 2-3/3-2 moves");
    obf->add_option("FILE", in_path)->required();
    obf->add_option("--moves", moves);
    obf->add_option("--seed", seed_arg);
    obf->add_option("-o,--output", out_path);

    auto* hom = app.add_subcommand("homology", "first homology as JSON");
    hom->add_option("FILE", in_path)->required();

    std::string ell_arg, zeta_arg;
    bool exact = false;
    unsigned order = 0;
    auto* tor = app.add_subcommand("torsion", "twisted torsion at zeta in Z/ell, or exact over Q(zeta_m)");
    tor->add_option("FILE", in_path)->required();
    auto* tor_ell = tor->add_option("--ell", ell_arg);
    auto* tor_zeta = tor->add_option("--zeta", zeta_arg);
    auto* tor_exact = tor->add_flag("--exact", exact);
    auto* tor_order = tor->add_option("--order", order);
    tor_ell->needs(tor_zeta);
    tor_zeta->needs(tor_ell);
    tor_exact->needs(tor_order);
    tor_order->needs(tor_exact);
    tor_exact->excludes(tor_ell);

    bool json = false;
    auto* idf = app.add_subcommand("identify", "recover {k, k^-1} for L(n, k)");
    idf->add_option("FILE", in_path)->required();
    idf->add_option("--seed", seed_arg);
    idf->add_option("--ell", ell_arg);
    idf->add_flag("--json", json, "JSON on stdout (always on; accepted for scripts)");

    auto* cert = app.add_subcommand("certify", "write an identification certificate");
    cert->add_option("FILE", in_path)->required();
    cert->add_option("--seed", seed_arg);
    cert->add_option("-o,--output", out_path);

    auto* ver = app.add_subcommand("verify", "check a certificate");
    ver->add_option("FILE", in_path)->required();
    ver->add_option("CERT", cert_path)->required();

    std::string k_arg;
    int trials = 20;
    bool full_order = false;
    auto* chk = app.add_subcommand("check-k", "randomized test of a claimed k");
    chk->add_option("FILE", in_path)->required();
    chk->add_option("--k", k_arg)->required();
    chk->add_option("--trials", trials)->check(CLI::PositiveNumber);
    chk->add_option("--seed", seed_arg);
    chk->add_flag("--full-order", full_order, "only use zeta of order exactly n");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }

    try {
        if (*gen_fan) {
            if (fan_n < 1 || (fan_n > 1 && std::gcd(fan_n, fan_k % fan_n) != 1))
                throw InputError("K must be a unit mod N");
            write_output(out_path, serialize_tri(fan_lens(fan_n, fan_k)));
            return ok;
        }
        if (*gen_layered) {
            MonodromySequence seq;
            std::stringstream ss(seq_arg);
            for (std::string tok; std::getline(ss, tok, ',');) {
                try {
                    std::size_t used = 0;
                    seq.a.push_back(std::stoi(tok, &used));
                    if (used != tok.size())
                        throw std::invalid_argument(tok);
                } catch (const std::exception&) {
                    throw InputError("bad sequence entry '" + tok + "'");
                }
            }
            if (!seq.valid())
                throw InputError("sequence needs entries in 1..5 with a1 >= 2");
            LayeredLens L = layered_lens(seq);
            std::cerr << "L(" << L.n << ", " << L.k << "), " << L.tri.size() << " tetrahedra\n";
            write_output(out_path, serialize_tri(L.tri));
            return ok;
        }
        if (*obf) {
            Triangulation tri = load(in_path);
            ValidationReport rep = validate(tri);
            if (!rep.ok())
                throw InputError(in_path + ": " + rep.problem);
            write_output(out_path, serialize_tri(pachner_obfuscate(tri, moves, parse_seed(seed_arg))));
            return ok;
        }
        if (*hom) {
            Triangulation tri = load(in_path);
            ValidationReport rep = validate(tri);
            if (!rep.ok())
                throw InputError(in_path + ": " + rep.problem);
            H1Result h = h1(cells(tri));
            nlohmann::json j;
            if (h.cyclic) {
                j["h1"] = jint(h.order);
            } else {
                j["h1_factors"] = nlohmann::json::array();
                for (const auto& f : h.factors)
                    j["h1_factors"].push_back(jint(f));
            }
            std::cout << j.dump() << "\n";
            return ok;
        }
        if (*tor) {
            PreparedManifold pm = load_prepared(in_path);
            if (pm.n < 2)
                throw InputError("H1 is trivial: no nontrivial twist");
            if (exact) {
                if (order < 2 || order > 200 || mod(pm.n, Integer(order)) != 0)
                    throw InputError("--order must divide n, with 2 <= m <= 200");
                auto v = exact_twisted_torsion(*pm.complex, order);
                for (std::size_t i = 0; i < v.size(); ++i)
                    std::cout << (i ? " " : "") << v[i];
                std::cout << "\n";
                return ok;
            }
            if (ell_arg.empty())
                throw InputError("torsion needs --ell/--zeta or --exact --order");
            Integer ell = parse_int_arg(ell_arg, "ell"), zeta = parse_int_arg(zeta_arg, "zeta");
            if (ell < 3 || !is_probable_prime(ell))
                throw InputError("ell must be an odd prime");
            zeta = mod(zeta, ell);
            if (zeta == 1 || powmod(zeta, pm.n, ell) != 1)
                throw InputError("zeta must satisfy zeta^n = 1, zeta != 1");
            std::cout << twisted_torsion(*pm.complex, ell, zeta) << "\n";
            return ok;
        }
        if (*idf) {
            PreparedManifold pm = load_prepared(in_path);
            IdentifyOptions opt;
            opt.seed = parse_seed(seed_arg);
            if (!ell_arg.empty()) {
                Integer ell = parse_int_arg(ell_arg, "ell");
                if (pm.n > 1 && (mod(ell - 1, pm.n) != 0 || !is_probable_prime(ell)))
                    throw InputError("--ell must be a prime congruent to 1 mod n");
                opt.ell = ell;
            }
            IdentifyResult r = identify(pm, opt);
            nlohmann::json j;
            j["n"] = jint(r.n);
            j["k_class"] = {jint(r.k_class[0]), jint(r.k_class[1])};
            j["ell"] = jint(r.ell);
            j["zeta"] = jint(r.zeta);
            std::cout << j.dump() << "\n";
            std::cerr << "L(" << r.n << ", " << r.k_class[0] << ") ~ L(" << r.n << ", " << r.k_class[1]
                      << "), " << r.retries << " retries" << (r.small_n ? ", small-n path" : "") << "\n";
            return ok;
        }
        if (*cert) {
            PreparedManifold pm = load_prepared(in_path);
            IdentifyOptions opt;
            opt.seed = parse_seed(seed_arg);
            Certificate c = make_certificate(pm, identify(pm, opt));
            write_output(out_path, serialize_certificate(c));
            return ok;
        }
        if (*ver) {
            Triangulation tri = load(in_path);
            Certificate c;
            try {
                c = parse_certificate(read_file(cert_path));
            } catch (const std::invalid_argument& e) {
                throw InputError(e.what());
            }
            Verdict v = verify_certificate(tri, c);
            if (v.accepted()) {
                std::cout << "accept\n";
                return ok;
            }
            std::cout << "reject: " << v.reason << "\n";
            return reject;
        }
        if (*chk) {
            PreparedManifold pm = load_prepared(in_path);
            CorpOptions opt;
            opt.seed = parse_seed(seed_arg);
            opt.trials = trials;
            opt.require_full_order = full_order;
            Verdict v = corp_check(pm, parse_int_arg(k_arg, "k"), opt);
            switch (v.kind) {
            case Verdict::Kind::accept:
                std::cout << "accept\n";
                return ok;
            case Verdict::Kind::reject:
                std::cout << "reject: " << v.reason << "\n";
                return reject;
            case Verdict::Kind::inconclusive:
                std::cout << "inconclusive: " << v.reason << "\n";
                return inconclusive;
            }
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const NotCandidate& e) {
        std::cerr << "error: " << e.what() << "\n";
        return not_candidate;
    } catch (const RetryBudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return retry;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    }
    return usage;
}
