#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "veerkit/field.hpp"
#include "veerkit/triangulation.hpp"
#include "veerkit/veering.hpp"

namespace veerkit {

struct Vec2 {
    AlgebraicReal x, y;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(int s) const { return s > 0 ? *this : -*this; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
    bool operator!=(const Vec2& o) const { return !(*this == o); }
};

AlgebraicReal cross(const Vec2& a, const Vec2& b);
// y > 0, or y == 0 and x > 0.
bool upper(const Vec2& v);

// Edge k of polygon p (from vertex k to k+1) is glued to edge `edge` of
// polygon `poly` by x -> sign*x + c.
struct EdgeGlue {
    int poly = -1;
    int edge = -1;
    int sign = 1;
};

struct CornerRef {
    int poly;
    int vertex;
};

// A marked point.  Corners are listed counterclockwise; the total angle is
// angle_pi * pi.
struct ConePoint {
    std::vector<CornerRef> corners;
    int angle_pi = 0;
};

// A direction at a cone point.  Directions are lifted to an angle
// half_turns * pi + arg(u) with u in the upper half plane (or on the positive
// x axis); the sector is half_turns mod angle_pi.
struct Direction {
    int point = -1;
    int sector = 0;
    Vec2 u;
};

// Total order: point, sector, then u by coefficients.  Only for bookkeeping.
bool operator<(const Direction& a, const Direction& b);
bool operator==(const Direction& a, const Direction& b);

class FlatSurface {
public:
    // Polygons strictly convex and counterclockwise, coordinates in `field`.
    // identifications: [p1, e1, p2, e2, sign].  Throws InvalidSurface.
    static FlatSurface build(Field field, std::vector<std::vector<Vec2>> polygons,
                             const std::vector<std::array<int, 5>>& identifications);

    const Field& field() const { return field_; }
    int polygon_count() const { return int(polys_.size()); }
    const std::vector<Vec2>& polygon(int p) const { return polys_[p]; }
    const EdgeGlue& glue(int p, int k) const { return glue_[p][k]; }
    const std::vector<std::array<int, 5>>& identifications() const { return ident_; }

    const std::vector<ConePoint>& cone_points() const { return points_; }
    int point_at(int p, int v) const { return corner_[p][v].point; }
    // Chart sign of a corner relative to its cone point's frame.
    int corner_sign(int p, int v) const { return corner_[p][v].sign; }
    // Lifted half-turn count of the corner's starting edge direction.
    int corner_start(int p, int v) const { return corner_[p][v].start; }

    int edge_count() const;
    int genus() const;
    // Edges of an ideal triangulation of the punctured surface.
    int ideal_edge_count() const;

    // Lift of a local direction `w` leaving corner (p, v); w must lie in the
    // corner's half-open angle [edge v, edge v-1).
    Direction lift(int p, int v, const Vec2& w) const;
    bool in_corner(int p, int v, const Vec2& w) const;

private:
    struct CornerInfo {
        int point = -1;
        int sign = 1;
        int start = 0;
    };
    Field field_;
    std::vector<std::vector<Vec2>> polys_;
    std::vector<std::vector<EdgeGlue>> glue_;
    std::vector<std::array<int, 5>> ident_;
    std::vector<ConePoint> points_;
    std::vector<std::vector<CornerInfo>> corner_;
};

// The affine pseudo-Anosov, derivative diag(lambda, 1/lambda).  On directions
// it sends (c, h, u) to (point_map[c], h + sector_shift[c], (lambda u.x, u.y / lambda)).
struct AffinePA {
    AlgebraicReal lambda;
    std::vector<int> point_map;
    std::vector<int> sector_shift;

    Direction apply(const FlatSurface& s, const Direction& d, int power = 1) const;
};

struct SaddleConnection {
    Direction from;  // canonical end: the smaller of the two end directions
    Direction to;
    Vec2 holonomy;            // == from.u
    std::vector<int> witness;  // polygons crossed, in order
};

// Every saddle connection with |dx| <= bound_x and |dy| <= bound_y, once each,
// sorted by `from`.  Throws HorizontalOrVerticalSaddle.
std::vector<SaddleConnection> saddle_connections(const FlatSurface& s, const AlgebraicReal& bound_x,
                                                 const AlgebraicReal& bound_y);

struct TraceResult {
    Direction end;              // direction back along the segment at its far end
    std::vector<int> witness;
};

// Follows the straight segment leaving d.point in direction d with holonomy
// d.u.  Empty when it meets a cone point early or does not end at one.
std::optional<TraceResult> trace(const FlatSurface& s, const Direction& d);

bool spans_empty_rectangle(const FlatSurface& s, const SaddleConnection& sc);
bool spans_empty_rectangle(const FlatSurface& s, const Direction& d);

// Checks lambda > 1, point_map a permutation respecting cone angles, and that
// the map carries every saddle connection within the given bounds onto a
// saddle connection.  Throws InvalidSurface.
void validate(const FlatSurface& s, const AffinePA& pa);

// Positions are in the rectangle's frame: bottom singularity at the origin,
// top at diagonal.from.u.
struct MaximalRectangle {
    SaddleConnection diagonal;            // bottom -> top
    std::array<int, 4> points;            // cone points at left, right, top, bottom
    std::array<Vec2, 4> positions;        // same order
    AlgebraicReal width, height;
};

std::vector<MaximalRectangle> maximal_rectangles(const FlatSurface& s, const AffinePA& pa);

struct Layering {
    std::vector<int> order;            // tetrahedra from bottom to top within one period
    std::vector<double> time;          // flip time of each tetrahedron, 0.5 log(height/width)
    std::vector<std::array<int, 2>> flips;  // per step: (removed, added) edge class
    double period = 0;                 // log lambda
    int surface_edges = 0;
};

struct GueritaudResult {
    IdealTriangulation tri;
    VeeringStructure veering;
    Layering layering;
    std::vector<MaximalRectangle> rectangles;  // rectangle of each tetrahedron
};

// Tetrahedron labels (0,1,2,3) = (left, right, top, bottom); edge 01 is the
// lower pi-edge and 23 the upper.  Red means positive slope.
GueritaudResult gueritaud_triangulation(const FlatSurface& s, const AffinePA& pa);

// Checks timing consistency of the layering; false on mismatch.
bool check_layering(const GueritaudResult& g);

// Matrix for a word in R = [[1,1],[0,1]] and L = [[1,0],[1,1]].
std::array<long long, 4> word_matrix(const std::string& word);

struct FlatInput {
    FlatSurface surface;
    std::optional<AffinePA> pa;
};

// Square torus sheared into the eigenbasis of the word's matrix.  Throws
// NotPseudoAnosov when trace <= 2.
FlatInput ptorus_surface(const std::string& word);
GueritaudResult ptorus_bundle(const std::string& word);

FlatInput read_flat_surface(std::istream& in);
FlatInput read_flat_surface_file(const std::string& path);
void write_flat_surface(std::ostream& out, const FlatInput& in);

}  // namespace veerkit
