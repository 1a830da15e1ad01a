#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lensid {

/// Permutation of {0,1,2,3}; image[v] is where v goes.
struct Perm4 {
    std::array<std::uint8_t, 4> image{0, 1, 2, 3};

    constexpr Perm4() = default;
    constexpr Perm4(int a, int b, int c, int d)
        : image{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                static_cast<std::uint8_t>(c), static_cast<std::uint8_t>(d)} {}

    constexpr int operator[](int v) const { return image[static_cast<std::size_t>(v)]; }

    constexpr bool valid() const {
        unsigned seen = 0;
        for (auto x : image) {
            if (x > 3)
                return false;
            seen |= 1u << x;
        }
        return seen == 0xF;
    }

    constexpr Perm4 inverse() const {
        Perm4 r;
        for (int v = 0; v < 4; ++v)
            r.image[image[v]] = static_cast<std::uint8_t>(v);
        return r;
    }

    /// +1 for even, -1 for odd.
    constexpr int sign() const {
        int inversions = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (image[i] > image[j])
                    ++inversions;
        return inversions % 2 ? -1 : 1;
    }

    std::string str() const {
        std::string s(4, '0');
        for (int v = 0; v < 4; ++v)
            s[v] = static_cast<char>('0' + image[v]);
        return s;
    }

    static Perm4 parse(std::string_view s) {
        if (s.size() != 4)
            throw std::invalid_argument("malformed permutation '" + std::string(s) + "'");
        Perm4 p;
        for (int v = 0; v < 4; ++v) {
            if (s[v] < '0' || s[v] > '3')
                throw std::invalid_argument("malformed permutation '" + std::string(s) + "'");
            p.image[v] = static_cast<std::uint8_t>(s[v] - '0');
        }
        if (!p.valid())
            throw std::invalid_argument("malformed permutation '" + std::string(s) + "'");
        return p;
    }

    friend constexpr bool operator==(const Perm4&, const Perm4&) = default;
};

/// (a * b)[v] = a[b[v]]: apply b first.
constexpr Perm4 operator*(const Perm4& a, const Perm4& b) {
    Perm4 r;
    for (int v = 0; v < 4; ++v)
        r.image[v] = a.image[b.image[v]];
    return r;
}

/// Sign of the permutation taking position i to position of seq[i] in sorted order.
template <class Seq> int sequence_parity(const Seq& seq) {
    int inversions = 0;
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = i + 1; j < seq.size(); ++j)
            if (seq[i] > seq[j])
                ++inversions;
    return inversions % 2 ? -1 : 1;
}

} // namespace lensid
