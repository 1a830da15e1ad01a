#pragma once

#include "lensid/certify.hpp"
#include "lensid/numbertheory.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace fixtures {

using namespace lensid;

inline std::string read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Triangulation data_file(const std::string& name) {
    return parse_tri(read(std::string(LENSID_TEST_DATA) + "/" + name));
}

enum class Field { n, k, ell, zeta, factors, torsion, sign_flip, count };

inline const char* field_name(Field f) {
    switch (f) {
    case Field::n: return "n";
    case Field::k: return "k";
    case Field::ell: return "ell";
    case Field::zeta: return "zeta";
    case Field::factors: return "factors";
    case Field::torsion: return "torsion";
    case Field::sign_flip: return "sign_flip";
    default: return "?";
    }
}

// Changes one field so that the certificate no longer states a true fact.
// k moves outside {k, 1/k}; ell to another prime or a composite.
inline Certificate corrupt(const Certificate& c, Field which, std::mt19937_64& g) {
    Certificate d = c;
    const Integer& n = c.n;
    switch (which) {
    case Field::n:
        d.n = c.n + 1 + static_cast<long>(g() % 5);
        break;
    case Field::k: {
        std::vector<Integer> wrong;
        for (Integer u = 1; u < n; ++u)
            if (gcd(u, n) == 1 && u != c.k && mod(u * c.k, n) != 1)
                wrong.push_back(u);
        if (wrong.empty())
            d.k = (g() % 2) ? Integer(0) : n; // not a unit
        else
            d.k = wrong[g() % wrong.size()];
        break;
    }
    case Field::ell:
        switch (g() % 3) {
        case 0:
            d.ell = c.ell + 1;
            break;
        case 1:
            d.ell = c.ell * 3;
            break;
        default: {
            Integer e = c.ell + n;
            while (!is_probable_prime(e))
                e += n;
            d.ell = e;
        }
        }
        break;
    case Field::zeta: {
        // off the subgroup of n-th roots. Another root of order n with the
        // same torsion values would be a valid certificate, not a corruption.
        if (c.ell - 1 == n) { // every unit is an n-th root
            d.zeta = (g() % 2) ? Integer(0) : c.ell;
            break;
        }
        Integer z = c.zeta;
        do
            z = mod(z + 1 + static_cast<long>(g() % 7), c.ell);
        while (z == 0 || powmod(z, n, c.ell) == 1);
        d.zeta = z;
        break;
    }
    case Field::factors:
        if (d.factors.empty()) {
            d.factors.push_back({2, 1});
        } else {
            auto& pe = d.factors[g() % d.factors.size()];
            if (g() % 2)
                pe.e += 1;
            else
                pe.p += 2;
        }
        break;
    case Field::torsion:
        if (d.gauge.torsion.empty())
            d.gauge.torsion.push_back(1);
        else {
            auto& t = d.gauge.torsion[g() % d.gauge.torsion.size()];
            t = mod(t + 1 + static_cast<long>(g() % 5), c.ell);
        }
        break;
    case Field::sign_flip:
        d.gauge.sign_flip = !d.gauge.sign_flip;
        break;
    default:
        break;
    }
    return d;
}

} // namespace fixtures
