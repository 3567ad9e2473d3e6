#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "veerkit/homology.hpp"
#include "veerkit/triangulation.hpp"

namespace veerkit {

// pi_pair[t] in {0,1,2} picks the opposite edge pair with angle pi
// (0: edges 01/23, 1: 02/13, 2: 03/12).  top_edge[t] is the local index of
// the upper pi-edge; faces containing it are the top faces of t.
struct TautStructure {
    std::vector<int> pi_pair;
    std::vector<int> top_edge;
};

enum class Color { Red, Blue };

struct VeeringStructure {
    TautStructure taut;
    std::vector<Color> colors;  // per edge class
};

// Every taut structure: angle assignment with two pi's per edge class, times
// every consistent coorientation (one global flip per component).
std::vector<TautStructure> find_taut_structures(const IdealTriangulation& tri);
std::optional<VeeringStructure> find_veering_structure(const IdealTriangulation& tri);

// Edge sums, coorientation, equatorial alternation, both colors on every face.
bool is_veering(const IdealTriangulation& tri, const VeeringStructure& v);

// Color forced on an equatorial edge of `tet` when `pi_pair` carries angle pi.
// Name the lower pi-edge W,E and the upper one N,S so that (W,E,N,S) is
// positively ordered: then NW and SE are Red, NE and SW are Blue.  Flipping
// the coorientation gives the same colors.
Color equatorial_color(const IdealTriangulation& tri, int tet, int pi_pair, int edge);

// ---------------------------------------------------------------------------
// Cusp cross-sections
//
// Triangle (t,v) is the corner of tet t at vertex v.  Its link vertices are the
// local vertices w != v (standing for the edge vw), and side f (f != v) lies in
// face f, opposite link vertex f.

struct CuspTriangle {
    int tet;
    int vertex;
    std::array<int, 3> ccw;  // link vertices in counterclockwise order
};

// A normal arc through one triangle, in through side `enter`, out through `exit`.
struct Passage {
    int triangle;
    int enter;
    int exit;
};
using DualCurve = std::vector<Passage>;

// A step along side `side` of a triangle, between link vertices `from` -> `to`.
struct SideStep {
    int triangle;
    int side;
    int from;
    int to;
};
using PrimalCurve = std::vector<SideStep>;

struct CuspCrossSection {
    int vertex_class = -1;
    std::vector<CuspTriangle> triangles;
    std::vector<int> index;                      // 4*tet+vertex -> triangle, or -1
    std::vector<std::array<int, 4>> link_vertex;  // triangle, local vertex -> link vertex id
    int link_vertex_count = 0;
    DualCurve basis[2];  // intersection(basis[0], basis[1]) = +1

    int triangle_at(int tet, int vertex) const { return index[4 * tet + vertex]; }
    int euler_characteristic() const;
};

std::vector<CuspCrossSection> cusp_cross_section(const IdealTriangulation& tri);

// Neighbour across side `side` of triangle `t`: (triangle, side).
std::pair<int, int> across(const IdealTriangulation& tri, const CuspCrossSection& cs, int t, int side);

// Simple closed dual curves used as basis candidates, in a fixed order.
std::vector<DualCurve> candidate_cycles(const IdealTriangulation& tri, const CuspCrossSection& cs);

// Checks that consecutive passages are glued and the curve closes up.
bool is_closed(const IdealTriangulation& tri, const CuspCrossSection& cs, const DualCurve& c);

long long intersection(const IdealTriangulation& tri, const CuspCrossSection& cs, const DualCurve& a,
                       const DualCurve& b);
long long intersection(const IdealTriangulation& tri, const CuspCrossSection& cs, const PrimalCurve& a,
                       const DualCurve& b);

// Coordinates (p,q) in the basis: p = i(c, basis[1]), q = i(basis[0], c).
Slope curve_class(const IdealTriangulation& tri, const CuspCrossSection& cs, const DualCurve& c);
Slope curve_class(const IdealTriangulation& tri, const CuspCrossSection& cs, const PrimalCurve& c);

// Corner cut off by a passage: (sign, local tetrahedron edge).  The sign is
// +1 when the corner lies to the left of the arc.
std::pair<int, int> passage_corner(const CuspCrossSection& cs, const Passage& p);

// Closed curves of cusp sides whose two ends have the same color.
std::vector<PrimalCurve> ladderpoles(const IdealTriangulation& tri, const VeeringStructure& v,
                                     const CuspCrossSection& cs);
Color ladderpole_color(const IdealTriangulation& tri, const VeeringStructure& v, const CuspCrossSection& cs,
                       const PrimalCurve& pole);

Slope degeneracy_slope(const IdealTriangulation& tri, const VeeringStructure& v, const CuspCrossSection& cs);

// Number of points in which a curve of slope `boundary` meets the ladderpoles
// of one color, i.e. the prong count of that foliation at the puncture.
long long prong_count(const IdealTriangulation& tri, const VeeringStructure& v, const CuspCrossSection& cs,
                      const Slope& boundary, Color color);

// Primitive cusp slope that dies in H_1(M; Q).  For a fibered manifold with
// one cusp and b_1 = 1 this is the boundary slope of the fiber.
Slope homological_longitude(const IdealTriangulation& tri, const CuspCrossSection& cs);

bool is_principal_fiber(const std::vector<Slope>& boundary_slopes, const std::vector<Slope>& degeneracy_slopes);

}  // namespace veerkit
