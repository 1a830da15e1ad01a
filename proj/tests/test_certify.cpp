#include "fixtures.hpp"
#include "lensid/certify.hpp"
#include "lensid/generators.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace lensid;

TEST(Certificate, JsonRoundTrip) {
    Certificate c = make_certificate(fan_lens(7, 2), 1);
    EXPECT_EQ(c.n, 7);
    EXPECT_TRUE(c.k == 2 || c.k == 4);
    EXPECT_EQ(c.gauge.torsion.size(), 3u);
    EXPECT_EQ(parse_certificate(serialize_certificate(c)), c);

    Certificate big = c;
    big.ell = Integer("340282366920938463463374607431768211297");
    auto j = to_json(big);
    EXPECT_TRUE(j["ell"].is_string());
    EXPECT_TRUE(j["n"].is_number_unsigned());
    EXPECT_EQ(certificate_from_json(j), big);
}

TEST(Certificate, MalformedJson) {
    EXPECT_THROW(parse_certificate("{"), std::invalid_argument);
    EXPECT_THROW(parse_certificate("[1,2]"), std::invalid_argument);
    EXPECT_THROW(parse_certificate(R"({"n": 7})"), std::invalid_argument);
    EXPECT_THROW(parse_certificate(R"({"n": "x7", "k": 2, "ell": 29, "zeta": 16, "factors": [], "gauge": {}})"),
                 std::invalid_argument);
}

TEST(Certificate, HonestAccepts) {
    for (unsigned n = 1; n <= 40; ++n)
        for (unsigned k = 1; k <= n; ++k) {
            if (std::gcd(n, k) != 1 || (n > 1 && k == n))
                continue;
            Triangulation t = n == 1 ? fan_lens(1, 0) : layered_lens_nk(n, k);
            Certificate c = make_certificate(t, n * 131 + k);
            Verdict v = verify_certificate(t, parse_certificate(serialize_certificate(c)));
            EXPECT_TRUE(v.accepted()) << n << " " << k << " " << v.reason;
        }
}

TEST(Certificate, CorruptionsReject) {
    std::mt19937_64 g(2024);
    for (unsigned n = 2; n <= 30; ++n)
        for (unsigned k = 1; k < n; ++k) {
            if (std::gcd(n, k) != 1)
                continue;
            Triangulation t = layered_lens_nk(n, k);
            Certificate c = make_certificate(t, n + k);
            for (int f = 0; f < static_cast<int>(fixtures::Field::count); ++f) {
                auto which = static_cast<fixtures::Field>(f);
                Certificate d = fixtures::corrupt(c, which, g);
                ASSERT_NE(d, c);
                EXPECT_TRUE(verify_certificate(t, d).rejected()) << n << " " << k << " " << fixtures::field_name(which);
            }
        }
}

TEST(Certificate, SpecificReasons) {
    Triangulation t = fan_lens(7, 2);
    Certificate c = make_certificate(t, 3);
    Certificate wrong_k = c;
    wrong_k.k = 3;
    EXPECT_EQ(verify_certificate(t, wrong_k).reason, "k mismatch");
    Certificate wrong_f = c;
    wrong_f.factors = {{Integer(7), 2}};
    EXPECT_EQ(verify_certificate(t, wrong_f).reason, "factorization");
    // right certificate, wrong manifold
    EXPECT_TRUE(verify_certificate(fan_lens(7, 3), c).rejected());
    EXPECT_EQ(verify_certificate(fan_lens(8, 3), c).reason, "homology");
    EXPECT_EQ(verify_certificate(fixtures::data_file("free_h1.tri"), c).reason, "homology");
}

TEST(Certificate, VerifierIsDeterministic) {
    Triangulation t = layered_lens_nk(101, 30);
    Certificate c = make_certificate(t, 5);
    EXPECT_EQ(verify_certificate(t, c).kind, verify_certificate(t, c).kind);
    EXPECT_EQ(serialize_certificate(make_certificate(t, 5)), serialize_certificate(c));
}

TEST(CorpCheck, AcceptsTrueRejectsWrong) {
    CorpOptions opt;
    opt.require_full_order = true;
    for (unsigned n = 2; n <= 24; ++n) {
        for (unsigned k = 1; k < n; ++k) {
            if (std::gcd(n, k) != 1)
                continue;
            PreparedManifold pm = prepare(layered_lens_nk(n, k));
            Integer kinv = invmod(Integer(k), Integer(n));
            for (unsigned u = 1; u < n; ++u) {
                if (std::gcd(n, u) != 1)
                    continue;
                opt.seed = n * 1000 + k * 10 + u;
                Verdict v = corp_check(pm, Integer(u), opt);
                if (u == k || Integer(u) == kinv)
                    EXPECT_TRUE(v.accepted()) << n << " " << k << " " << u << " " << v.reason;
                else
                    EXPECT_TRUE(v.rejected()) << n << " " << k << " " << u;
            }
        }
    }
}

TEST(CorpCheck, NonUnitAndInconclusive) {
    PreparedManifold pm = prepare(layered_lens_nk(10, 3));
    EXPECT_TRUE(corp_check(pm, Integer(5)).rejected());
    bool seen = false;
    for (std::uint64_t seed = 1; seed < 200 && !seen; ++seed) {
        CorpOptions opt;
        opt.seed = seed;
        opt.trials = 1;
        Verdict v = corp_check(pm, Integer(3), opt);
        EXPECT_FALSE(v.rejected());
        seen = v.kind == Verdict::Kind::inconclusive;
    }
    EXPECT_TRUE(seen);
}

TEST(SmoothIdentify, TwoThreeSmooth) {
    // n = 2^10 3^5
    const std::uint64_t n = 248832, k = 1001;
    PreparedManifold pm = prepare(layered_lens_nk(n, k));
    ASSERT_EQ(pm.n, Integer(static_cast<unsigned long>(n)));
    IdentifyResult r = smooth_identify(pm, Integer(3));
    EXPECT_EQ(r.k_class, k_class_of(Integer(static_cast<unsigned long>(k)), pm.n));
    EXPECT_LE(r.dlog_stats.largest_subsearch, 3);
    EXPECT_THROW(smooth_identify(pm, Integer(2)), FactorTooLarge);
}
