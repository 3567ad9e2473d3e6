#pragma once

#include <array>
#include <cstdint>

namespace veerkit {

// Permutation of {0,1,2,3}, stored as its image list.
class Perm4 {
public:
    constexpr Perm4() : img_{0, 1, 2, 3} {}
    constexpr Perm4(int a, int b, int c, int d)
        : img_{std::uint8_t(a), std::uint8_t(b), std::uint8_t(c), std::uint8_t(d)} {}

    constexpr int operator[](int i) const { return img_[i]; }

    // (p * q)(i) = p(q(i))
    constexpr Perm4 operator*(const Perm4& q) const {
        return Perm4(img_[q[0]], img_[q[1]], img_[q[2]], img_[q[3]]);
    }

    constexpr Perm4 inverse() const {
        Perm4 r;
        for (int i = 0; i < 4; ++i) r.img_[img_[i]] = std::uint8_t(i);
        return r;
    }

    constexpr int sign() const {
        int inv = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (img_[i] > img_[j]) ++inv;
        return (inv % 2) ? -1 : 1;
    }

    constexpr bool operator==(const Perm4& o) const { return img_ == o.img_; }
    constexpr bool operator!=(const Perm4& o) const { return !(*this == o); }

    // Index in lexicographic order of image lists, 0..23.
    int index() const;
    static Perm4 from_index(int idx);
    static bool valid(const std::array<int, 4>& img);

private:
    std::array<std::uint8_t, 4> img_;
};

// Edge numbering inside a tetrahedron: 01,02,03,12,13,23.  Edge e is opposite 5-e.
constexpr int kEdgeVerts[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

constexpr int edge_index(int a, int b) {
    if (a > b) { int t = a; a = b; b = t; }
    if (a == 0) return b - 1;
    if (a == 1) return b + 1;
    return 5;
}

// Opposite pairs {e, 5-e}: pair 0 = 01/23, pair 1 = 02/13, pair 2 = 03/12.
constexpr int edge_pair(int e) { return e < 3 ? e : 5 - e; }

}  // namespace veerkit
