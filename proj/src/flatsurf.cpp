#include "veerkit/flatsurf.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "veerkit/error.hpp"

namespace veerkit {

using AR = AlgebraicReal;

AlgebraicReal cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

bool upper(const Vec2& v) {
    int sy = v.y.sign();
    return sy > 0 || (sy == 0 && v.x.sign() > 0);
}

namespace {

bool coeff_less(const AR& a, const AR& b) { return CoeffLess{}(a, b); }

bool vec_less(const Vec2& a, const Vec2& b) {
    if (coeff_less(a.x, b.x)) return true;
    if (coeff_less(b.x, a.x)) return false;
    return coeff_less(a.y, b.y);
}

AR dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

const AR& min_of(const AR& a, const AR& b) { return b < a ? b : a; }
const AR& max_of(const AR& a, const AR& b) { return a < b ? b : a; }

int mod(int a, int m) { return ((a % m) + m) % m; }

}  // namespace

bool operator<(const Direction& a, const Direction& b) {
    if (a.point != b.point) return a.point < b.point;
    if (a.sector != b.sector) return a.sector < b.sector;
    return vec_less(a.u, b.u);
}

bool operator==(const Direction& a, const Direction& b) {
    return a.point == b.point && a.sector == b.sector && a.u == b.u;
}

// ---------------------------------------------------------------------------
// Surface

FlatSurface FlatSurface::build(Field field, std::vector<std::vector<Vec2>> polygons,
                               const std::vector<std::array<int, 5>>& identifications) {
    auto bad = [](const std::string& m) { return Error(ErrorKind::InvalidSurface, m); };
    if (!field) throw bad("no field");
    if (polygons.empty()) throw bad("no polygons");
    FlatSurface s;
    s.field_ = field;
    for (size_t p = 0; p < polygons.size(); ++p) {
        const auto& P = polygons[p];
        const int n = int(P.size());
        if (n < 3) throw bad("polygon " + std::to_string(p) + " has fewer than 3 vertices");
        for (const auto& v : P)
            for (const AR* c : {&v.x, &v.y})
                if (!c->field() || !(c->field() == field || c->field()->same_as(*field)))
                    throw bad("coordinate outside the declared field");
        int wraps = 0;
        for (int i = 0; i < n; ++i) {
            Vec2 e0 = P[(i + 1) % n] - P[i], e1 = P[(i + 2) % n] - P[(i + 1) % n];
            if (cross(e0, e1).sign() <= 0)
                throw bad("polygon " + std::to_string(p) + " is not strictly convex and counterclockwise");
            if (upper(e0) && !upper(e1)) ++wraps;
        }
        if (wraps != 1) throw bad("polygon " + std::to_string(p) + " winds more than once");
    }
    s.polys_ = std::move(polygons);
    s.glue_.resize(s.polys_.size());
    for (size_t p = 0; p < s.polys_.size(); ++p) s.glue_[p].assign(s.polys_[p].size(), EdgeGlue{});

    auto set_glue = [&](int p, int k, int q, int j, int sign) {
        EdgeGlue& g = s.glue_[p][k];
        if (g.poly >= 0) {
            if (g.poly != q || g.edge != j || g.sign != sign) throw bad("edge glued twice");
            return;
        }
        g = {q, j, sign};
    };
    for (const auto& id : identifications) {
        const int p = id[0], k = id[1], q = id[2], j = id[3], sign = id[4];
        if (p < 0 || q < 0 || p >= s.polygon_count() || q >= s.polygon_count()) throw bad("bad polygon index");
        if (k < 0 || j < 0 || k >= int(s.polys_[p].size()) || j >= int(s.polys_[q].size()))
            throw bad("bad edge index");
        if (sign != 1 && sign != -1) throw bad("identification sign must be +1 or -1");
        if (p == q && k == j) throw bad("edge glued to itself");
        const auto &P = s.polys_[p], &Q = s.polys_[q];
        Vec2 ep = P[(k + 1) % P.size()] - P[k];
        Vec2 eq = Q[(j + 1) % Q.size()] - Q[j];
        if (eq != -(ep * sign)) throw bad("identified edges are not parallel of equal length");
        set_glue(p, k, q, j, sign);
        set_glue(q, j, p, k, sign);
        s.ident_.push_back(id);
    }
    for (size_t p = 0; p < s.glue_.size(); ++p)
        for (size_t k = 0; k < s.glue_[p].size(); ++k)
            if (s.glue_[p][k].poly < 0) throw bad("unglued edge");

    // connectivity
    std::vector<char> seen(s.polys_.size(), 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    while (!stack.empty()) {
        int p = stack.back();
        stack.pop_back();
        for (const auto& g : s.glue_[p])
            if (!seen[g.poly]) {
                seen[g.poly] = 1;
                stack.push_back(g.poly);
            }
    }
    if (std::count(seen.begin(), seen.end(), 0)) throw bad("surface is disconnected");

    // Walk corners counterclockwise around each marked point.
    s.corner_.resize(s.polys_.size());
    for (size_t p = 0; p < s.polys_.size(); ++p) s.corner_[p].assign(s.polys_[p].size(), CornerInfo{});
    for (int p0 = 0; p0 < s.polygon_count(); ++p0)
        for (int v0 = 0; v0 < int(s.polys_[p0].size()); ++v0) {
            if (s.corner_[p0][v0].point >= 0) continue;
            ConePoint cp;
            const int id = int(s.points_.size());
            const auto& P0 = s.polys_[p0];
            int p = p0, v = v0, sign = 1;
            int h = upper(P0[(v0 + 1) % P0.size()] - P0[v0]) ? 0 : 1;
            const int h0 = h;
            for (;;) {
                if (s.corner_[p][v].point >= 0) {
                    if (p != p0 || v != v0) throw bad("corner cycle does not close");
                    break;
                }
                s.corner_[p][v] = {id, sign, h};
                cp.corners.push_back({p, v});
                const auto& P = s.polys_[p];
                const int n = int(P.size());
                Vec2 end = P[(v + n - 1) % n] - P[v];
                int par = upper(end * sign) ? 0 : 1;
                if (par != h % 2) ++h;
                const EdgeGlue& g = s.glue_[p][(v + n - 1) % n];
                sign *= g.sign;
                p = g.poly;
                v = g.edge;
            }
            cp.angle_pi = h - h0;
            if (cp.angle_pi < 1) throw bad("degenerate cone angle");
            s.points_.push_back(std::move(cp));
        }
    return s;
}

int FlatSurface::edge_count() const {
    int e = 0;
    for (const auto& P : polys_) e += int(P.size());
    return e / 2;
}

int FlatSurface::genus() const {
    const int chi = int(points_.size()) - edge_count() + polygon_count();
    return (2 - chi) / 2;
}

int FlatSurface::ideal_edge_count() const { return 3 * (edge_count() - polygon_count()); }

bool FlatSurface::in_corner(int p, int v, const Vec2& w) const {
    const auto& P = polys_[p];
    const int n = int(P.size());
    Vec2 start = P[(v + 1) % n] - P[v], end = P[(v + n - 1) % n] - P[v];
    return cross(start, w).sign() >= 0 && cross(w, end).sign() > 0;
}

Direction FlatSurface::lift(int p, int v, const Vec2& w) const {
    const CornerInfo& c = corner_[p][v];
    Vec2 g = w * c.sign;
    int par = upper(g) ? 0 : 1;
    int h = (c.start % 2 == par) ? c.start : c.start + 1;
    return Direction{c.point, mod(h, points_[c.point].angle_pi), par ? -g : g};
}

Direction AffinePA::apply(const FlatSurface& s, const Direction& d, int power) const {
    Direction r = d;
    const int np = int(point_map.size());
    for (; power > 0; --power) {
        int m = s.cone_points()[point_map[r.point]].angle_pi;
        r.sector = mod(r.sector + sector_shift[r.point], m);
        r.point = point_map[r.point];
        r.u = {r.u.x * lambda, r.u.y / lambda};
    }
    for (; power < 0; ++power) {
        int pre = -1;
        for (int c = 0; c < np; ++c)
            if (point_map[c] == r.point) pre = c;
        int m = s.cone_points()[pre].angle_pi;
        r.sector = mod(r.sector - sector_shift[pre], m);
        r.point = pre;
        r.u = {r.u.x / lambda, r.u.y * lambda};
    }
    return r;
}

// ---------------------------------------------------------------------------
// Developing

namespace {

// dev(x) = eps * x + t
struct Piece {
    int poly;
    int eps;
    Vec2 t;
};

struct PieceLess {
    bool operator()(const Piece& a, const Piece& b) const {
        if (a.poly != b.poly) return a.poly < b.poly;
        if (a.eps != b.eps) return a.eps < b.eps;
        return vec_less(a.t, b.t);
    }
};

Vec2 dev(const Piece& pc, const Vec2& x) { return x * pc.eps + pc.t; }

Piece across_edge(const FlatSurface& s, const Piece& pc, int k) {
    const auto& P = s.polygon(pc.poly);
    const EdgeGlue& g = s.glue(pc.poly, k);
    const Vec2 c = P[(k + 1) % P.size()] - s.polygon(g.poly)[g.edge] * g.sign;
    return Piece{g.poly, pc.eps * g.sign, c * pc.eps + pc.t};
}

struct Box {
    AR x0, x1, y0, y1;  // open
};

bool strictly_inside(const Box& b, const Vec2& p) {
    return b.x0 < p.x && p.x < b.x1 && b.y0 < p.y && p.y < b.y1;
}

// Open segment against open box, separating axis test.
bool meets_open_box(const Vec2& A, const Vec2& B, const Box& b) {
    if (max_of(A.x, B.x) <= b.x0 || min_of(A.x, B.x) >= b.x1) return false;
    if (max_of(A.y, B.y) <= b.y0 || min_of(A.y, B.y) >= b.y1) return false;
    const Vec2 d = B - A;
    int pos = 0, neg = 0;
    for (const AR* x : {&b.x0, &b.x1})
        for (const AR* y : {&b.y0, &b.y1}) {
            int s = cross(d, Vec2{*x, *y} - A).sign();
            if (s > 0) ++pos;
            if (s < 0) ++neg;
        }
    return pos > 0 && neg > 0;
}

// Closed segment against closed box.
bool meets_closed_box(const Vec2& A, const Vec2& B, const Box& b) {
    if (max_of(A.x, B.x) < b.x0 || min_of(A.x, B.x) > b.x1) return false;
    if (max_of(A.y, B.y) < b.y0 || min_of(A.y, B.y) > b.y1) return false;
    const Vec2 d = B - A;
    int pos = 0, neg = 0;
    for (const AR* x : {&b.x0, &b.x1})
        for (const AR* y : {&b.y0, &b.y1}) {
            int s = cross(d, Vec2{*x, *y} - A).sign();
            if (s >= 0) ++pos;
            if (s <= 0) ++neg;
        }
    return pos > 0 && neg > 0;
}

constexpr size_t kMaxPieces = 200000;

std::vector<Piece> develop_box(const FlatSurface& s, const Piece& start, const Box& box) {
    std::set<Piece, PieceLess> seen = {start};
    std::vector<Piece> out = {start};
    for (size_t i = 0; i < out.size(); ++i) {
        const Piece pc = out[i];
        const auto& P = s.polygon(pc.poly);
        const int n = int(P.size());
        for (int k = 0; k < n; ++k) {
            if (!meets_open_box(dev(pc, P[k]), dev(pc, P[(k + 1) % n]), box)) continue;
            Piece next = across_edge(s, pc, k);
            if (seen.insert(next).second) out.push_back(next);
        }
        if (out.size() > kMaxPieces) throw Error(ErrorKind::BoundExhausted, "development too large");
    }
    return out;
}

struct DevPoint {
    Vec2 pos;
    int poly, vertex, eps;
};

std::vector<DevPoint> dev_points(const FlatSurface& s, const std::vector<Piece>& pieces) {
    std::vector<DevPoint> out;
    for (const auto& pc : pieces) {
        const auto& P = s.polygon(pc.poly);
        for (int k = 0; k < int(P.size()); ++k) out.push_back({dev(pc, P[k]), pc.poly, k, pc.eps});
    }
    return out;
}

// Lift of dev-frame direction w leaving dev-frame point at.
std::optional<Direction> lift_at(const FlatSurface& s, const std::vector<DevPoint>& pts, const Vec2& at,
                                 const Vec2& w) {
    for (const auto& dp : pts) {
        if (dp.pos != at) continue;
        Vec2 local = w * dp.eps;
        if (s.in_corner(dp.poly, dp.vertex, local)) return s.lift(dp.poly, dp.vertex, local);
    }
    return std::nullopt;
}

// Piece placing d.point at the origin with d heading along d.u.
std::optional<Piece> start_piece(const FlatSurface& s, const Direction& d) {
    if (d.point < 0 || d.point >= int(s.cone_points().size())) return std::nullopt;
    for (const auto& c : s.cone_points()[d.point].corners) {
        const int e = s.corner_sign(c.poly, c.vertex);
        for (int sg : {1, -1}) {
            Vec2 local = d.u * (e * sg);
            if (!s.in_corner(c.poly, c.vertex, local)) continue;
            Direction l = s.lift(c.poly, c.vertex, local);
            if (l.sector != d.sector) continue;
            const int eps = e * sg;
            return Piece{c.poly, eps, -(s.polygon(c.poly)[c.vertex] * eps)};
        }
    }
    return std::nullopt;
}

AR zero(const Field& f) { return AR(f, Rational(0)); }

}  // namespace

// ---------------------------------------------------------------------------
// Saddle connections

std::optional<TraceResult> trace(const FlatSurface& s, const Direction& d) {
    auto sp = start_piece(s, d);
    if (!sp || d.u.y.sign() < 0) return std::nullopt;
    const Vec2 target = d.u;
    const AR len2 = dot(target, target);
    TraceResult out;
    Piece pc = *sp;
    int entry = -1;  // entry edge, or -1 for the start polygon
    int start_vertex = -1;
    {
        const auto& P = s.polygon(pc.poly);
        for (int k = 0; k < int(P.size()); ++k)
            if (dev(pc, P[k]).x.is_zero() && dev(pc, P[k]).y.is_zero()) start_vertex = k;
    }
    for (int steps = 0; steps < 1000000; ++steps) {
        out.witness.push_back(pc.poly);
        const auto& P = s.polygon(pc.poly);
        const int n = int(P.size());
        for (int k = 0; k < n; ++k) {
            if (entry < 0 && k == start_vertex) continue;
            Vec2 w = dev(pc, P[k]);
            if (w == target) {
                out.end = s.lift(pc.poly, k, (-target) * pc.eps);
                return out;
            }
            if (cross(target, w).is_zero()) {
                AR t = dot(w, target);
                if (t.sign() > 0 && t < len2) return std::nullopt;
            }
        }
        int exit = -1;
        for (int k = 0; k < n && exit < 0; ++k) {
            if (k == entry) continue;
            if (entry < 0 && (k == start_vertex || (k + 1) % n == start_vertex)) continue;
            Vec2 A = dev(pc, P[k]), B = dev(pc, P[(k + 1) % n]);
            if (cross(A, B).sign() <= 0) continue;
            if (cross(A, target).sign() > 0 && cross(target, B).sign() > 0) exit = k;
        }
        if (exit < 0) return std::nullopt;
        Vec2 A = dev(pc, P[exit]), B = dev(pc, P[(exit + 1) % n]);
        if (cross(B - A, target - A).sign() >= 0) return std::nullopt;  // ends before leaving
        const EdgeGlue& g = s.glue(pc.poly, exit);
        pc = across_edge(s, pc, exit);
        entry = g.edge;
    }
    throw Error(ErrorKind::BoundExhausted, "trace did not terminate");
}

std::vector<SaddleConnection> saddle_connections(const FlatSurface& s, const AlgebraicReal& bound_x,
                                                 const AlgebraicReal& bound_y) {
    const Field& F = s.field();
    const Box bound{-bound_x, bound_x, -bound_y, bound_y};
    std::map<Direction, SaddleConnection> found;

    struct Node {
        Piece pc;
        int entry;
        Vec2 a, b;  // open wedge, b counterclockwise of a
        int parent;
    };

    for (int p0 = 0; p0 < s.polygon_count(); ++p0)
        for (int v0 = 0; v0 < int(s.polygon(p0).size()); ++v0) {
            const auto& P0 = s.polygon(p0);
            const int n0 = int(P0.size());
            std::vector<Node> nodes;
            auto record = [&](int node, const Piece& pc, int k) {
                const Vec2 w = dev(pc, s.polygon(pc.poly)[k]);
                if (abs(w.x) > bound_x || abs(w.y) > bound_y) return;
                if (w.x.is_zero() || w.y.is_zero())
                    throw Error(ErrorKind::HorizontalOrVerticalSaddle,
                                "saddle connection with holonomy (" + w.x.to_string() + ", " + w.y.to_string() + ")");
                Direction a = s.lift(p0, v0, w);
                Direction b = s.lift(pc.poly, k, (-w) * pc.eps);
                SaddleConnection sc;
                if (b < a) std::swap(a, b);
                sc.from = a;
                sc.to = b;
                sc.holonomy = a.u;
                for (int i = node; i >= 0; i = nodes[i].parent) sc.witness.push_back(nodes[i].pc.poly);
                std::reverse(sc.witness.begin(), sc.witness.end());
                found.emplace(sc.from, std::move(sc));
            };

            Piece first{p0, 1, -P0[v0]};
            Vec2 a = P0[(v0 + 1) % n0] - P0[v0], b = P0[(v0 + n0 - 1) % n0] - P0[v0];
            nodes.push_back({first, -1, a, b, -1});
            record(0, first, (v0 + 1) % n0);

            for (size_t i = 0; i < nodes.size(); ++i) {
                const Node nd = nodes[i];
                const auto& P = s.polygon(nd.pc.poly);
                const int n = int(P.size());
                for (int k = 0; k < n; ++k) {
                    if (i == 0 && k == v0) continue;
                    if (nd.entry >= 0 && (k == nd.entry || k == (nd.entry + 1) % n)) continue;
                    Vec2 w = dev(nd.pc, P[k]);
                    if (cross(nd.a, w).sign() > 0 && cross(w, nd.b).sign() > 0) record(int(i), nd.pc, k);
                }
                for (int k = 0; k < n; ++k) {
                    if (k == nd.entry) continue;
                    if (i == 0 && (k == v0 || (k + 1) % n == v0)) continue;
                    Vec2 A = dev(nd.pc, P[k]), B = dev(nd.pc, P[(k + 1) % n]);
                    if (cross(A, B).sign() <= 0) continue;
                    if (!meets_closed_box(A, B, bound)) continue;
                    Vec2 na = cross(nd.a, A).sign() > 0 ? A : nd.a;
                    Vec2 nb = cross(B, nd.b).sign() > 0 ? B : nd.b;
                    if (cross(na, nb).sign() <= 0) continue;
                    const EdgeGlue& g = s.glue(nd.pc.poly, k);
                    nodes.push_back({across_edge(s, nd.pc, k), g.edge, na, nb, int(i)});
                    if (nodes.size() > kMaxPieces)
                        throw Error(ErrorKind::BoundExhausted, "saddle connection search too large");
                }
            }
        }
    (void)F;
    std::vector<SaddleConnection> out;
    for (auto& kv : found) out.push_back(std::move(kv.second));
    return out;
}

bool spans_empty_rectangle(const FlatSurface& s, const Direction& d) {
    if (d.u.x.is_zero() || d.u.y.sign() <= 0) return false;
    auto sp = start_piece(s, d);
    if (!sp) return false;
    const AR z = zero(s.field());
    Box box{min_of(z, d.u.x), max_of(z, d.u.x), z, d.u.y};
    for (const auto& dp : dev_points(s, develop_box(s, *sp, box)))
        if (strictly_inside(box, dp.pos)) return false;
    return true;
}

bool spans_empty_rectangle(const FlatSurface& s, const SaddleConnection& sc) {
    return spans_empty_rectangle(s, sc.from);
}

namespace {

// Bounds covering every polygon twice over.
std::pair<AR, AR> working_bounds(const FlatSurface& s) {
    AR bx = zero(s.field()), by = bx;
    for (int p = 0; p < s.polygon_count(); ++p) {
        const auto& P = s.polygon(p);
        for (const auto& a : P)
            for (const auto& b : P) {
                bx = max_of(bx, abs(a.x - b.x));
                by = max_of(by, abs(a.y - b.y));
            }
    }
    return {bx * Rational(2), by * Rational(2)};
}

}  // namespace

void validate(const FlatSurface& s, const AffinePA& pa) {
    auto bad = [](const std::string& m) { return Error(ErrorKind::InvalidSurface, m); };
    const int np = int(s.cone_points().size());
    if (!pa.lambda.field()) throw bad("affine map has no expansion factor");
    if (!(pa.lambda > AR(s.field(), Rational(1)))) throw bad("expansion factor must exceed 1");
    if (int(pa.point_map.size()) != np || int(pa.sector_shift.size()) != np)
        throw bad("affine map must list every cone point");
    std::vector<char> hit(np, 0);
    for (int c = 0; c < np; ++c) {
        int t = pa.point_map[c];
        if (t < 0 || t >= np || hit[t]) throw bad("point map is not a permutation");
        hit[t] = 1;
        if (s.cone_points()[t].angle_pi != s.cone_points()[c].angle_pi) throw bad("point map changes a cone angle");
        if (pa.sector_shift[c] < 0 || pa.sector_shift[c] >= s.cone_points()[t].angle_pi)
            throw bad("sector shift out of range");
    }
    auto [bx, by] = working_bounds(s);
    for (const auto& sc : saddle_connections(s, bx, by)) {
        Direction img = pa.apply(s, sc.from);
        auto tr = trace(s, img);
        if (!tr || !(tr->end == pa.apply(s, sc.to)))
            throw bad("affine map does not carry saddle connections to saddle connections");
    }
}

// ---------------------------------------------------------------------------
// Maximal rectangles and the layered triangulation

namespace {

constexpr int kMaxDoublings = 48;
constexpr int kMaxTets = 4096;

struct Tet {
    Direction tall;  // canonical rep: bottom at origin, top at tall.u
    Direction top;   // rep of the same edge from the top
    std::vector<DevPoint> pts;
    std::array<Vec2, 4> pos;  // l r t b
    std::array<int, 4> point;
    AR width, height;
};

enum { kL = 0, kR = 1, kT = 2, kB = 3 };

Vec2 find_point(const std::vector<DevPoint>& pts, const Vec2& at, int& point, const FlatSurface& s) {
    for (const auto& dp : pts)
        if (dp.pos == at) {
            point = s.point_at(dp.poly, dp.vertex);
            return at;
        }
    throw Error(ErrorKind::NonManifoldGluing, "rectangle corner point missing from development");
}

// Pushes one vertical side of the box outward until it meets a singularity.
// dir = +1 moves the right side, -1 the left.  Returns the singularity.
Vec2 expand_side(const FlatSurface& s, const Piece& start, const AR& fixed, AR known, int dir, const AR& h,
                 AR width) {
    const AR z = zero(s.field());
    auto box_to = [&](const AR& X) {
        return dir > 0 ? Box{fixed, X, z, h} : Box{X, fixed, z, h};
    };
    auto beyond = [&](const AR& x) { return dir > 0 ? known < x : x < known; };
    auto nearer = [&](const AR& x, const AR& y) { return dir > 0 ? x < y : y < x; };
    for (int doublings = 0; doublings < kMaxDoublings;) {
        AR far = dir > 0 ? known + width : known - width;
        std::optional<AR> X;
        for (const auto& dp : dev_points(s, develop_box(s, start, box_to(far))))
            if (strictly_inside(box_to(far), dp.pos) && beyond(dp.pos.x) && (!X || nearer(dp.pos.x, *X)))
                X = dp.pos.x;
        if (!X) {
            width = width * Rational(2);
            ++doublings;
            continue;
        }
        // Shrink until the development up to X is singularity free.
        for (;;) {
            Box b = box_to(*X);
            auto pts = dev_points(s, develop_box(s, start, b));
            std::optional<AR> inner;
            bool any = false;
            for (const auto& dp : pts)
                if (strictly_inside(b, dp.pos)) {
                    any = true;
                    if (beyond(dp.pos.x) && (!inner || nearer(dp.pos.x, *inner))) inner = dp.pos.x;
                }
            if (any) {
                if (!inner) throw Error(ErrorKind::NonManifoldGluing, "inconsistent development");
                X = inner;
                continue;
            }
            std::vector<Vec2> hits;
            for (const auto& dp : pts)
                if (dp.pos.x == *X && z < dp.pos.y && dp.pos.y < h &&
                    std::find(hits.begin(), hits.end(), dp.pos) == hits.end())
                    hits.push_back(dp.pos);
            if (hits.size() > 1)
                throw Error(ErrorKind::HorizontalOrVerticalSaddle, "two singularities on one vertical side");
            if (hits.size() == 1) return hits[0];
            known = *X;
            break;
        }
    }
    throw Error(ErrorKind::BoundExhausted, "rectangle expansion exceeded its bound");
}

// Horizontal expansion of the rectangle spanned by the saddle connection d.
Tet expand_tall(const FlatSurface& s, const Direction& d) {
    auto sp = start_piece(s, d);
    if (!sp) throw Error(ErrorKind::NonManifoldGluing, "direction not found at its cone point");
    const AR z = zero(s.field());
    const Vec2 u = d.u;
    const AR& h = u.y;
    AR x0 = min_of(z, u.x), x1 = max_of(z, u.x);
    AR width = max_of(abs(u.x), h);
    Vec2 r = expand_side(s, *sp, x0, x1, +1, h, width);
    Vec2 l = expand_side(s, *sp, r.x, x0, -1, h, width);
    Box box{l.x, r.x, z, h};
    Tet t;
    t.pts = dev_points(s, develop_box(s, *sp, box));
    for (const auto& dp : t.pts) {
        if (strictly_inside(box, dp.pos))
            throw Error(ErrorKind::NonManifoldGluing, "maximal rectangle is not empty");
        bool on_rim = (dp.pos.y.is_zero() || dp.pos.y == h) && l.x < dp.pos.x && dp.pos.x < r.x;
        if (on_rim && dp.pos != u && !(dp.pos.x.is_zero() && dp.pos.y.is_zero()))
            throw Error(ErrorKind::HorizontalOrVerticalSaddle, "singularity on a horizontal side");
    }
    t.tall = d;
    t.pos = {l, r, u, Vec2{z, z}};
    for (int i = 0; i < 4; ++i) find_point(t.pts, t.pos[i], t.point[i], s);
    auto top = lift_at(s, t.pts, u, -u);
    if (!top) throw Error(ErrorKind::NonManifoldGluing, "cannot lift the diagonal at its top");
    t.top = *top;
    t.width = r.x - l.x;
    t.height = h;
    return t;
}

int lambda_power(double ratio, double lambda) { return int(std::floor(std::log(ratio) / std::log(lambda))); }

struct Builder {
    const FlatSurface& s;
    const AffinePA& pa;
    AR a0;  // orbit window for |dx| of tall edges: [a0, lambda a0)
    std::vector<Tet> tets;
    std::map<Direction, int> index;

    // Apply the power of the map that moves |u.x| into the window.
    int window_power(const Vec2& u) const {
        AR ax = abs(u.x);
        int k = -lambda_power(ax.to_double() / a0.to_double(), pa.lambda.to_double());
        AR lo = a0, hi = a0 * pa.lambda;
        AR scaled = ax;
        if (k > 0)
            for (int i = 0; i < k; ++i) scaled = scaled * pa.lambda;
        else
            for (int i = 0; i < -k; ++i) scaled = scaled / pa.lambda;
        while (scaled < lo) { scaled = scaled * pa.lambda; ++k; }
        while (!(scaled < hi)) { scaled = scaled / pa.lambda; --k; }
        return k;
    }

    // Canonical rep of an edge given by its reps at the lower and upper end of
    // the current frame.  rotated: the canonical frame is turned by pi.
    struct Canon {
        Direction rep;
        bool rotated;
        int power;
    };
    Canon canonical(const Direction& lower, const Direction& up) const {
        int k = window_power(lower.u);
        Direction nl = pa.apply(s, lower, k), nu = pa.apply(s, up, k);
        return nu < nl ? Canon{nu, true, k} : Canon{nl, false, k};
    }

    int move_point(int c, int k) const {
        for (; k > 0; --k) c = pa.point_map[c];
        for (; k < 0; ++k)
            c = int(std::find(pa.point_map.begin(), pa.point_map.end(), c) - pa.point_map.begin());
        return c;
    }

    int get(const Direction& canon, std::deque<int>& queue) {
        auto it = index.find(canon);
        if (it != index.end()) return it->second;
        if (int(tets.size()) >= kMaxTets) throw Error(ErrorKind::BoundExhausted, "too many tetrahedra");
        tets.push_back(expand_tall(s, canon));
        int id = int(tets.size()) - 1;
        index.emplace(canon, id);
        queue.push_back(id);
        return id;
    }
};

Perm4 perm_from(const std::array<int, 4>& img) { return Perm4(img[0], img[1], img[2], img[3]); }

}  // namespace

namespace {

struct Construction {
    std::vector<Tet> tets;
    GluingData gluing;
    AR lambda;
};

Construction construct(const FlatSurface& s, const AffinePA& pa) {
    validate(s, pa);
    auto [bx, by] = working_bounds(s);
    auto scs = saddle_connections(s, bx, by);
    // The connection with the smallest |dx| + |dy| spans an empty rectangle.
    const SaddleConnection* best = nullptr;
    for (const auto& sc : scs)
        if (!best || abs(sc.holonomy.x) + sc.holonomy.y < abs(best->holonomy.x) + best->holonomy.y) best = &sc;
    if (!best) throw Error(ErrorKind::BoundExhausted, "no saddle connection within the working bounds");
    if (!spans_empty_rectangle(s, *best))
        throw Error(ErrorKind::NonManifoldGluing, "shortest saddle connection spans a nonempty rectangle");

    Builder B{s, pa, abs(best->holonomy.x), {}, {}};
    std::deque<int> queue;
    B.get(B.canonical(best->from, best->to).rep, queue);

    GluingData glue;
    std::vector<std::array<char, 4>> set;
    auto mark = [&](int t, int f, int t2, int f2, Perm4 p) {
        if (int(glue.size()) <= std::max(t, t2)) {
            glue.resize(std::max(t, t2) + 1);
            set.resize(glue.size(), {0, 0, 0, 0});
        }
        if (set[t][f]) throw Error(ErrorKind::NonManifoldGluing, "face glued twice");
        set[t][f] = 1;
        glue[t][f] = FaceGluing{t2, f2, p};
    };

    while (!queue.empty()) {
        const int id = queue.front();
        queue.pop_front();
        const Tet T = B.tets[id];
        const int hi = T.pos[kL].y < T.pos[kR].y ? kR : kL;
        const int lo = 1 - hi;
        for (int missing : {kT, kB}) {
            // Face missing the top lies under the rectangle spanned by
            // bottom-hi; face missing the bottom under lo-top.
            int from = missing == kT ? kB : lo;
            int to = missing == kT ? hi : kT;
            int side = missing == kT ? lo : hi;
            Vec2 w = T.pos[to] - T.pos[from];
            auto lower = lift_at(s, T.pts, T.pos[from], w);
            auto up = lift_at(s, T.pts, T.pos[to], -w);
            if (!lower || !up) throw Error(ErrorKind::NonManifoldGluing, "cannot lift a face edge");
            const auto cn = B.canonical(*lower, *up);
            const int nb = B.get(cn.rep, queue);
            std::array<int, 4> img{};
            img[from] = kB;
            img[to] = kT;
            img[side] = side;  // left stays left
            img[missing] = 1 - side;
            if (cn.rotated)
                for (int& v : img) v = v ^ 1;
            Perm4 p = perm_from(img);
            const Tet& N = B.tets[nb];
            for (int v = 0; v < 4; ++v)
                if (v != missing && N.point[img[v]] != B.move_point(T.point[v], cn.power))
                    throw Error(ErrorKind::NonManifoldGluing, "face vertices disagree across a gluing");
            mark(id, missing, nb, img[missing], p);
            mark(nb, img[missing], id, missing, p.inverse());
        }
    }
    const int n = int(B.tets.size());
    glue.resize(n);
    set.resize(n, {0, 0, 0, 0});
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f)
            if (!set[t][f]) throw Error(ErrorKind::NonManifoldGluing, "unglued face");
    return Construction{std::move(B.tets), std::move(glue), pa.lambda};
}

MaximalRectangle to_rectangle(const FlatSurface& s, const Tet& t) {
    MaximalRectangle m;
    m.diagonal.from = t.tall;
    m.diagonal.to = t.top;
    m.diagonal.holonomy = t.tall.u;
    if (auto tr = trace(s, t.tall)) m.diagonal.witness = tr->witness;
    m.points = t.point;
    m.positions = t.pos;
    m.width = t.width;
    m.height = t.height;
    return m;
}

MaximalRectangle push(const AffinePA& pa, MaximalRectangle m, int k) {
    for (; k > 0; --k) {
        for (auto& p : m.positions) p = {p.x * pa.lambda, p.y / pa.lambda};
        for (auto& c : m.points) c = pa.point_map[c];
        m.width = m.width * pa.lambda;
        m.height = m.height / pa.lambda;
    }
    for (; k < 0; ++k) {
        for (auto& p : m.positions) p = {p.x / pa.lambda, p.y * pa.lambda};
        for (auto& c : m.points) c = int(std::find(pa.point_map.begin(), pa.point_map.end(), c) - pa.point_map.begin());
        m.width = m.width / pa.lambda;
        m.height = m.height * pa.lambda;
    }
    return m;
}

}  // namespace

std::vector<MaximalRectangle> maximal_rectangles(const FlatSurface& s, const AffinePA& pa) {
    Construction c = construct(s, pa);
    std::vector<MaximalRectangle> out;
    for (const auto& t : c.tets) out.push_back(to_rectangle(s, t));
    if (out.empty()) return out;
    // Put widths into [w0, lambda w0) with w0 the smallest width of the orbit window.
    auto into = [&](MaximalRectangle m, const AR& lo) {
        int k = 0;
        AR w = m.width;
        while (w < lo) { w = w * pa.lambda; ++k; }
        while (!(w < lo * pa.lambda)) { w = w / pa.lambda; --k; }
        return k;
    };
    AR ref = out[0].width;
    AR w0;
    bool have = false;
    for (const auto& m : out) {
        int k = into(m, ref);
        AR w = push(pa, m, k).width;
        if (!have || w < w0) { w0 = w; have = true; }
    }
    for (auto& m : out) {
        int k = into(m, w0);
        MaximalRectangle moved = push(pa, m, k);
        moved.diagonal.from = pa.apply(s, m.diagonal.from, k);
        moved.diagonal.to = pa.apply(s, m.diagonal.to, k);
        moved.diagonal.holonomy = moved.diagonal.from.u;
        m = std::move(moved);
    }
    return out;
}

namespace {

double tau(const AR& h, const AR& w) { return 0.5 * std::log(h.to_double() / w.to_double()); }

}  // namespace

GueritaudResult gueritaud_triangulation(const FlatSurface& s, const AffinePA& pa) {
    Construction c = construct(s, pa);
    IdealTriangulation tri;
    try {
        tri = IdealTriangulation::from_gluing_data(c.gluing);
    } catch (const Error& e) {
        throw Error(ErrorKind::NonManifoldGluing, std::string("rectangle gluing is not a triangulation: ") + e.what());
    }
    const int n = tri.tet_count();

    VeeringStructure v;
    v.taut.pi_pair.assign(n, 0);
    v.taut.top_edge.assign(n, 5);
    std::vector<int> color(tri.edge_count(), -1);
    for (int t = 0; t < n; ++t)
        for (int e = 0; e < 6; ++e) {
            Vec2 d = c.tets[t].pos[kEdgeVerts[e][1]] - c.tets[t].pos[kEdgeVerts[e][0]];
            int sx = d.x.sign(), sy = d.y.sign();
            if (sx == 0 || sy == 0) throw Error(ErrorKind::HorizontalOrVerticalSaddle, "axis-parallel edge");
            int col = sx * sy > 0 ? 0 : 1;
            int& slot = color[tri.edge_class(t, e)];
            if (slot >= 0 && slot != col) throw Error(ErrorKind::NonManifoldGluing, "edge class with two slopes");
            slot = col;
        }
    for (int col : color) v.colors.push_back(col == 0 ? Color::Red : Color::Blue);
    if (!is_veering(tri, v)) throw Error(ErrorKind::NonManifoldGluing, "rectangle triangulation is not veering");

    GueritaudResult g{tri, v, {}, {}};
    for (const auto& t : c.tets) g.rectangles.push_back(to_rectangle(s, t));

    Layering& L = g.layering;
    L.period = std::log(pa.lambda.to_double());
    L.surface_edges = s.ideal_edge_count();
    L.time.resize(n);
    for (int t = 0; t < n; ++t) L.time[t] = tau(c.tets[t].height, c.tets[t].width);
    const double t0 = *std::min_element(L.time.begin(), L.time.end());
    std::vector<double> phase(n);
    for (int t = 0; t < n; ++t) phase[t] = L.time[t] - t0 - L.period * std::floor((L.time[t] - t0) / L.period);
    L.order.resize(n);
    for (int t = 0; t < n; ++t) L.order[t] = t;
    std::stable_sort(L.order.begin(), L.order.end(), [&](int a, int b) { return phase[a] < phase[b]; });
    for (int t : L.order) L.flips.push_back({tri.edge_class(t, 0), tri.edge_class(t, 5)});
    if (!check_layering(g)) throw Error(ErrorKind::NonManifoldGluing, "layering is inconsistent");
    return g;
}

bool check_layering(const GueritaudResult& g) {
    const auto& tri = g.tri;
    const auto& L = g.layering;
    const int n = tri.tet_count(), E = tri.edge_count();
    if (int(L.order.size()) != n || L.period <= 0) return false;
    // Each edge class is the upper pi-edge of one tetrahedron and the lower of one.
    std::vector<int> tall(E, -1), wide(E, -1);
    for (int t = 0; t < n; ++t) {
        int up = tri.edge_class(t, 5), down = tri.edge_class(t, 0);
        if (tall[up] >= 0 || wide[down] >= 0) return false;
        tall[up] = t;
        wide[down] = t;
    }
    // Lifetime of each edge: from the flip creating it to the flip removing it,
    // measured on the same representative.
    std::vector<double> born(E), life(E);
    for (int e = 0; e < E; ++e) {
        const auto& T = g.rectangles[tall[e]];
        const auto& W = g.rectangles[wide[e]];
        double dx_t = std::fabs((T.positions[kT].x - T.positions[kB].x).to_double());
        double dx_w = std::fabs((W.positions[kR].x - W.positions[kL].x).to_double());
        double j = std::round(std::log(dx_w / dx_t) / L.period);
        born[e] = L.time[tall[e]];
        life[e] = L.time[wide[e]] + j * L.period - born[e];
        if (!(life[e] > 0)) return false;
    }
    auto copies = [&](int e, double t) {
        // k with born + kP < t < born + kP + life
        double lo = (t - born[e] - life[e]) / L.period, hi = (t - born[e]) / L.period;
        return int(std::ceil(hi) - std::floor(lo)) - 1;
    };
    const double eps = 1e-9;
    for (int i = 0; i < n; ++i) {
        const int t = L.order[i];
        // Just before the flip the lower pi-edge and the four equatorial edges
        // are present; just after, the upper pi-edge replaces the lower.
        const double before = L.time[t] - eps, after = L.time[t] + eps;
        for (int e : {1, 2, 3, 4})
            if (copies(tri.edge_class(t, e), before) < 1 || copies(tri.edge_class(t, e), after) < 1) return false;
        if (copies(tri.edge_class(t, 0), before) < 1) return false;
        if (copies(tri.edge_class(t, 5), after) < 1) return false;
        int total = 0;
        for (int e = 0; e < E; ++e) total += copies(e, after);
        if (total != L.surface_edges) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Punctured torus bundles

std::array<long long, 4> word_matrix(const std::string& word) {
    long long a = 1, b = 0, c = 0, d = 1;
    for (char ch : word) {
        if (ch == 'R') {  // M * [[1,1],[0,1]]
            b += a;
            d += c;
        } else if (ch == 'L') {  // M * [[1,0],[1,1]]
            a += b;
            c += d;
        } else {
            throw Error(ErrorKind::InvalidInput, std::string("word letter must be L or R, got '") + ch + "'");
        }
        if (std::max({std::llabs(a), std::llabs(b), std::llabs(c), std::llabs(d)}) > (1LL << 40))
            throw Error(ErrorKind::InvalidInput, "word too long");
    }
    return {a, b, c, d};
}

FlatInput ptorus_surface(const std::string& word) {
    auto [a, b, c, d] = word_matrix(word);
    const long long tr = a + d;
    if (tr <= 2) throw Error(ErrorKind::NotPseudoAnosov, "trace " + std::to_string(tr) + " is not above 2");
    Field F = quadratic_unit_field(tr);
    AR lam = AR::generator(F);
    AR inv = lam.inverse();
    AR A(F, Rational(a)), Bm(F, Rational(b));
    // Eigen coordinates of e1 and e2, scaled so that the frame keeps orientation.
    Vec2 E1{inv - A, lam - A};
    Vec2 E2{-Bm, -Bm};
    Vec2 O{AR(F, Rational(0)), AR(F, Rational(0))};
    std::vector<std::vector<Vec2>> polys = {{O, E1, E1 + E2, E2}};
    FlatSurface s = FlatSurface::build(F, polys, {{0, 0, 0, 2, 1}, {0, 1, 0, 3, 1}});
    AffinePA pa{lam, {0}, {0}};
    return FlatInput{std::move(s), pa};
}

GueritaudResult ptorus_bundle(const std::string& word) {
    FlatInput in = ptorus_surface(word);
    return gueritaud_triangulation(in.surface, *in.pa);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

BigInt parse_int(const json& j) {
    if (j.is_number_integer()) return BigInt(j.get<long long>());
    if (j.is_string()) return BigInt(j.get<std::string>());
    throw Error(ErrorKind::InvalidInput, "expected an integer");
}

Rational parse_rational(const json& j) {
    if (j.is_array() && j.size() == 2) {
        BigInt den = parse_int(j[1]);
        if (den == 0) throw Error(ErrorKind::InvalidInput, "zero denominator");
        return Rational(parse_int(j[0]), den);
    }
    return Rational(parse_int(j));
}

json int_json(const BigInt& v) {
    if (boost::multiprecision::abs(v) < BigInt(1LL << 53)) return v.convert_to<long long>();
    return v.str();
}

json rational_json(const Rational& q) {
    return json::array({int_json(boost::multiprecision::numerator(q)), int_json(boost::multiprecision::denominator(q))});
}

AR parse_element(const Field& F, const json& j) {
    if (!j.is_array()) throw Error(ErrorKind::InvalidInput, "field element must be a coefficient vector");
    std::vector<Rational> c;
    for (const auto& x : j) c.push_back(parse_rational(x));
    if (c.empty()) c.push_back(0);
    return AR(F, c);
}

json element_json(const AR& a) {
    json out = json::array();
    for (const auto& c : a.coeffs()) out.push_back(rational_json(c));
    return out;
}

}  // namespace

FlatInput read_flat_surface(std::istream& in) {
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
    }
    try {
        const json& fj = j.at("field");
        std::vector<BigInt> poly;
        for (const auto& c : fj.at("min_poly")) poly.push_back(parse_int(c));
        const json& iv = fj.at("root_interval");
        if (!iv.is_array() || iv.size() != 2) throw Error(ErrorKind::InvalidInput, "root_interval must be [lo, hi]");
        Field F = make_field(poly, parse_rational(iv[0]), parse_rational(iv[1]));
        std::vector<std::vector<Vec2>> polys;
        for (const auto& pj : j.at("polygons")) {
            std::vector<Vec2> P;
            for (const auto& vj : pj) {
                if (!vj.is_array() || vj.size() != 2) throw Error(ErrorKind::InvalidInput, "vertex must be [x, y]");
                P.push_back({parse_element(F, vj[0]), parse_element(F, vj[1])});
            }
            polys.push_back(std::move(P));
        }
        std::vector<std::array<int, 5>> ids;
        for (const auto& ij : j.at("identifications")) {
            if (!ij.is_array() || ij.size() != 5)
                throw Error(ErrorKind::InvalidInput, "identification must be [p1, e1, p2, e2, sign]");
            ids.push_back({ij[0].get<int>(), ij[1].get<int>(), ij[2].get<int>(), ij[3].get<int>(), ij[4].get<int>()});
        }
        FlatInput out{FlatSurface::build(F, std::move(polys), ids), std::nullopt};
        if (j.contains("automorphism")) {
            const json& aj = j.at("automorphism");
            AffinePA pa;
            pa.lambda = parse_element(F, aj.at("lambda"));
            const int np = int(out.surface.cone_points().size());
            if (aj.contains("polygon_map")) {
                const json& pm = aj.at("polygon_map");
                pa.point_map = pm.at("cone_points").get<std::vector<int>>();
                pa.sector_shift = pm.contains("sector_shift") ? pm.at("sector_shift").get<std::vector<int>>()
                                                              : std::vector<int>(np, 0);
            } else {
                for (int c = 0; c < np; ++c) pa.point_map.push_back(c);
                pa.sector_shift.assign(np, 0);
            }
            out.pa = pa;
        }
        return out;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidInput, std::string("bad flat surface JSON: ") + e.what());
    }
}

FlatInput read_flat_surface_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
    return read_flat_surface(f);
}

void write_flat_surface(std::ostream& out, const FlatInput& in) {
    const FlatSurface& s = in.surface;
    const NumberField& F = *s.field();
    json j;
    json poly = json::array();
    for (const auto& c : F.min_poly()) poly.push_back(int_json(c));
    j["field"] = {{"min_poly", poly},
                  {"root_interval", json::array({rational_json(F.input_interval().first),
                                                 rational_json(F.input_interval().second)})}};
    json polys = json::array();
    for (int p = 0; p < s.polygon_count(); ++p) {
        json P = json::array();
        for (const auto& v : s.polygon(p)) P.push_back(json::array({element_json(v.x), element_json(v.y)}));
        polys.push_back(P);
    }
    j["polygons"] = polys;
    json ids = json::array();
    for (const auto& id : s.identifications()) ids.push_back(id);
    j["identifications"] = ids;
    if (in.pa)
        j["automorphism"] = {{"lambda", element_json(in.pa->lambda)},
                             {"polygon_map", {{"cone_points", in.pa->point_map}, {"sector_shift", in.pa->sector_shift}}}};
    out << j.dump(2) << "\n";
}

}  // namespace veerkit
