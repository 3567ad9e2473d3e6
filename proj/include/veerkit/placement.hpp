#pragma once

// Bipyramid placement shared by floating and interval shape transport.  Points
// on the Riemann sphere are kept homogeneous, (a : b) meaning a/b, so that the
// first tetrahedron can put a vertex at infinity without special cases.

#include <array>
#include <stdexcept>
#include <vector>

#include "veerkit/perm.hpp"

namespace veerkit {

template <class C>
struct HPoint {
    C a, b;
};

template <class C>
C hdet(const HPoint<C>& x, const HPoint<C>& y) {
    return x.a * y.b - x.b * y.a;
}

// (d-b)(c-a) / ((c-b)(d-a))
template <class C>
C cross_ratio(const HPoint<C>& p, const HPoint<C>& q, const HPoint<C>& r, const HPoint<C>& s) {
    return (hdet(s, q) * hdet(r, p)) / (hdet(r, q) * hdet(s, p));
}

// Shape parameters of one tetrahedron: index p is the parameter on edge pair p.
template <class C>
using Params = std::array<C, 3>;

// Even orderings (i,j,k,l) ending in each vertex l; the cross ratio in that
// order is the parameter of edge ij.
inline constexpr int kEvenEndingIn[4][4] = {{1, 3, 2, 0}, {0, 2, 3, 1}, {0, 3, 1, 2}, {0, 1, 2, 3}};

// Places the five bipyramid points from the shapes of the given tetrahedra.
// points[k][v] is the bipyramid point of local vertex v of tetrahedron k.
// `one` and `zero` are the constants of the number type.
template <class C>
std::array<HPoint<C>, 5> place_bipyramid(const std::vector<std::array<int, 4>>& points,
                                         const std::vector<Params<C>>& params, const C& zero, const C& one) {
    std::array<HPoint<C>, 5> P{};
    std::array<bool, 5> known{};
    const auto& first = points[0];
    P[first[0]] = {one, zero};
    P[first[1]] = {zero, one};
    P[first[2]] = {one, one};
    P[first[3]] = {params[0][0], one};
    for (int v = 0; v < 4; ++v) known[first[v]] = true;
    bool progress = true;
    while (progress) {
        progress = false;
        for (size_t k = 1; k < points.size(); ++k) {
            int unknown = -1, count = 0;
            for (int v = 0; v < 4; ++v)
                if (!known[points[k][v]]) {
                    unknown = v;
                    ++count;
                }
            if (count != 1) continue;
            const int* ord = kEvenEndingIn[unknown];
            const HPoint<C>& Pi = P[points[k][ord[0]]];
            const HPoint<C>& Pj = P[points[k][ord[1]]];
            const HPoint<C>& Pk = P[points[k][ord[2]]];
            const C w = params[k][edge_pair(edge_index(ord[0], ord[1]))];
            const C c1 = hdet(Pk, Pi), c2 = hdet(Pk, Pj);
            const C wc2 = w * c2;
            P[points[k][unknown]] = {Pj.a * c1 - wc2 * Pi.a, Pj.b * c1 - wc2 * Pi.b};
            known[points[k][unknown]] = true;
            progress = true;
        }
    }
    for (bool b : known)
        if (!b) throw std::logic_error("bipyramid placement did not reach every point");
    return P;
}

// Shape (edge-pair-0 parameter) of a tetrahedron with the given point labels.
template <class C>
C shape_from_points(const std::array<HPoint<C>, 5>& P, const std::array<int, 4>& pts) {
    return cross_ratio(P[pts[0]], P[pts[1]], P[pts[2]], P[pts[3]]);
}

}  // namespace veerkit
