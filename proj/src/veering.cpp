#include "veerkit/veering.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace veerkit {

namespace {

int perm_sign(int a, int b, int c, int d) {
    return Perm4(a, b, c, d).sign();
}

bool face_has_edge(int face, int edge) {
    return kEdgeVerts[edge][0] != face && kEdgeVerts[edge][1] != face;
}

// Coorientations compatible with the given pi pairs: top_edge per tet, or
// empty vectors if none.  All 2^components flips are produced.
std::vector<std::vector<int>> coorientations(const IdealTriangulation& tri, const std::vector<int>& pi) {
    const int n = tri.tet_count();
    std::vector<int> flip(n, -1), comp(n, -1);
    int comps = 0;
    for (int s = 0; s < n; ++s) {
        if (flip[s] >= 0) continue;
        flip[s] = 0;
        comp[s] = comps;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int t = q.front();
            q.pop();
            int top = flip[t] ? 5 - pi[t] : pi[t];
            for (int f = 0; f < 4; ++f) {
                const FaceGluing& g = tri.gluing(t, f);
                bool mine = face_has_edge(f, top);
                // A top face must meet a bottom face.
                bool other0 = face_has_edge(g.face, pi[g.tet]);
                int need = (other0 == !mine) ? 0 : 1;
                if (flip[g.tet] < 0) {
                    flip[g.tet] = need;
                    comp[g.tet] = comps;
                    q.push(g.tet);
                } else if (flip[g.tet] != need) {
                    return {};
                }
            }
        }
        ++comps;
    }
    std::vector<std::vector<int>> out;
    for (int mask = 0; mask < (1 << comps); ++mask) {
        std::vector<int> top(n);
        for (int t = 0; t < n; ++t) {
            int fl = flip[t] ^ ((mask >> comp[t]) & 1);
            top[t] = fl ? 5 - pi[t] : pi[t];
        }
        out.push_back(std::move(top));
    }
    return out;
}

}  // namespace

std::vector<TautStructure> find_taut_structures(const IdealTriangulation& tri) {
    const int n = tri.tet_count(), E = tri.edge_count();
    // gain[t][p][c]: pi slots tet t puts on class c when choosing pair p.
    std::vector<std::array<std::vector<int>, 3>> gain(n);
    for (int t = 0; t < n; ++t)
        for (int p = 0; p < 3; ++p) {
            gain[t][p].assign(E, 0);
            gain[t][p][tri.edge_class(t, p)]++;
            gain[t][p][tri.edge_class(t, 5 - p)]++;
        }
    // reach[k][c]: most pi slots tets k.. can still add to class c.
    std::vector<std::vector<int>> reach(n + 1, std::vector<int>(E, 0));
    for (int t = n - 1; t >= 0; --t)
        for (int c = 0; c < E; ++c)
            reach[t][c] = reach[t + 1][c] + std::max({gain[t][0][c], gain[t][1][c], gain[t][2][c]});

    std::vector<std::vector<int>> angles;
    std::vector<int> pi(n), count(E, 0);
    auto rec = [&](auto&& self, int t) -> void {
        for (int c = 0; c < E; ++c)
            if (count[c] > 2 || count[c] + reach[t][c] < 2) return;
        if (t == n) {
            angles.push_back(pi);
            return;
        }
        for (int p = 0; p < 3; ++p) {
            pi[t] = p;
            for (int c = 0; c < E; ++c) count[c] += gain[t][p][c];
            self(self, t + 1);
            for (int c = 0; c < E; ++c) count[c] -= gain[t][p][c];
        }
    };
    rec(rec, 0);

    std::vector<TautStructure> out;
    for (const auto& a : angles)
        for (auto& top : coorientations(tri, a)) out.push_back({a, std::move(top)});
    return out;
}

Color equatorial_color(const IdealTriangulation& tri, int tet, int pi_pair, int edge) {
    const int* lo = kEdgeVerts[pi_pair];
    const int* hi = kEdgeVerts[5 - pi_pair];
    int W = lo[0], E = lo[1], N = hi[0], S = hi[1];
    if (perm_sign(W, E, N, S) * tri.orientation(tet) < 0) std::swap(W, E);
    const int a = kEdgeVerts[edge][0], b = kEdgeVerts[edge][1];
    auto is = [&](int x, int y) { return (a == x && b == y) || (a == y && b == x); };
    if (is(N, W) || is(S, E)) return Color::Red;
    return Color::Blue;
}

namespace {

std::optional<std::vector<Color>> forced_colors(const IdealTriangulation& tri, const std::vector<int>& pi) {
    std::vector<int> col(tri.edge_count(), -1);
    for (int t = 0; t < tri.tet_count(); ++t)
        for (int e = 0; e < 6; ++e) {
            if (edge_pair(e) == pi[t]) continue;
            int c = int(equatorial_color(tri, t, pi[t], e));
            int& slot = col[tri.edge_class(t, e)];
            if (slot >= 0 && slot != c) return std::nullopt;
            slot = c;
        }
    std::vector<Color> out;
    for (int c : col) {
        if (c < 0) return std::nullopt;
        out.push_back(Color(c));
    }
    return out;
}

bool faces_bicolored(const IdealTriangulation& tri, const std::vector<Color>& colors) {
    for (int t = 0; t < tri.tet_count(); ++t)
        for (int f = 0; f < 4; ++f) {
            bool red = false, blue = false;
            for (int e = 0; e < 6; ++e)
                if (face_has_edge(f, e)) (colors[tri.edge_class(t, e)] == Color::Red ? red : blue) = true;
            if (!red || !blue) return false;
        }
    return true;
}

}  // namespace

std::optional<VeeringStructure> find_veering_structure(const IdealTriangulation& tri) {
    if (!tri.orientable()) return std::nullopt;
    for (const auto& taut : find_taut_structures(tri)) {
        auto colors = forced_colors(tri, taut.pi_pair);
        if (!colors || !faces_bicolored(tri, *colors)) continue;
        return VeeringStructure{taut, *colors};
    }
    return std::nullopt;
}

bool is_veering(const IdealTriangulation& tri, const VeeringStructure& v) {
    const int n = tri.tet_count(), E = tri.edge_count();
    if (!tri.orientable()) return false;
    if (int(v.taut.pi_pair.size()) != n || int(v.taut.top_edge.size()) != n || int(v.colors.size()) != E)
        return false;
    std::vector<int> count(E, 0);
    for (int t = 0; t < n; ++t) {
        int p = v.taut.pi_pair[t], top = v.taut.top_edge[t];
        if (p < 0 || p > 2 || top < 0 || top > 5 || edge_pair(top) != p) return false;
        count[tri.edge_class(t, p)]++;
        count[tri.edge_class(t, 5 - p)]++;
    }
    for (int c : count)
        if (c != 2) return false;
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            const FaceGluing& g = tri.gluing(t, f);
            if (face_has_edge(f, v.taut.top_edge[t]) == face_has_edge(g.face, v.taut.top_edge[g.tet])) return false;
        }
    for (int t = 0; t < n; ++t)
        for (int e = 0; e < 6; ++e)
            if (edge_pair(e) != v.taut.pi_pair[t] &&
                v.colors[tri.edge_class(t, e)] != equatorial_color(tri, t, v.taut.pi_pair[t], e))
                return false;
    return faces_bicolored(tri, v.colors);
}

// ---------------------------------------------------------------------------

int CuspCrossSection::euler_characteristic() const {
    const int F = int(triangles.size());
    return link_vertex_count - 3 * F / 2 + F;
}

std::pair<int, int> across(const IdealTriangulation& tri, const CuspCrossSection& cs, int t, int side) {
    const CuspTriangle& tr = cs.triangles[t];
    const FaceGluing& g = tri.gluing(tr.tet, side);
    return {cs.triangle_at(g.tet, g.perm[tr.vertex]), g.face};
}

namespace {

int third_vertex(int v, int a, int b) {
    for (int w = 0; w < 4; ++w)
        if (w != v && w != a && w != b) return w;
    return -1;
}

int ccw_pos(const CuspTriangle& tr, int w) {
    for (int i = 0; i < 3; ++i)
        if (tr.ccw[i] == w) return i;
    return -1;
}

// Endpoints of side `side` in triangle t, ascending.
std::pair<int, int> side_ends(const CuspTriangle& tr, int side) {
    int x = -1, y = -1;
    for (int w = 0; w < 4; ++w) {
        if (w == tr.vertex || w == side) continue;
        (x < 0 ? x : y) = w;
    }
    return {x, y};
}

using XY = std::array<long long, 2>;

XY corner_xy(const CuspTriangle& tr, int w) {
    static const XY pos[3] = {{0, 0}, {9, 0}, {0, 9}};
    return pos[ccw_pos(tr, w)];
}

// Point `thirds`/3 of the way along the side, measured from a start endpoint
// that both triangles sharing the side agree on.
XY side_point(const IdealTriangulation& tri, const CuspCrossSection& cs, int t, int side, int thirds) {
    const CuspTriangle& tr = cs.triangles[t];
    auto [t2, side2] = across(tri, cs, t, side);
    auto [x, y] = side_ends(tr, side);
    int start = x, other = y;
    if (4 * t2 + side2 < 4 * t + side) {
        const CuspTriangle& tr2 = cs.triangles[t2];
        int x2 = side_ends(tr2, side2).first;
        start = tri.gluing(tr2.tet, side2).perm[x2];
        other = start == x ? y : x;
    }
    XY s = corner_xy(tr, start), o = corner_xy(tr, other);
    return {s[0] + thirds * (o[0] - s[0]) / 3, s[1] + thirds * (o[1] - s[1]) / 3};
}

long long cross(const XY& a, const XY& b) { return a[0] * b[1] - a[1] * b[0]; }
XY sub(const XY& a, const XY& b) { return {a[0] - b[0], a[1] - b[1]}; }
int sgn(long long x) { return (x > 0) - (x < 0); }

DualCurve reversed(const DualCurve& c) {
    DualCurve r;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r.push_back({it->triangle, it->exit, it->enter});
    return r;
}

struct Move {
    int triangle;
    int exit;
};

DualCurve to_curve(const IdealTriangulation& tri, const CuspCrossSection& cs, const std::vector<Move>& moves) {
    DualCurve c;
    const int k = int(moves.size());
    for (int i = 0; i < k; ++i) {
        const Move& prev = moves[(i + k - 1) % k];
        int enter = across(tri, cs, prev.triangle, prev.exit).second;
        c.push_back({moves[i].triangle, enter, moves[i].exit});
    }
    return c;
}

}  // namespace

bool is_closed(const IdealTriangulation& tri, const CuspCrossSection& cs, const DualCurve& c) {
    if (c.empty()) return false;
    const int k = int(c.size());
    for (int i = 0; i < k; ++i) {
        const Passage& p = c[i];
        const CuspTriangle& tr = cs.triangles[p.triangle];
        if (p.enter == p.exit || p.enter == tr.vertex || p.exit == tr.vertex) return false;
        auto [nt, ns] = across(tri, cs, p.triangle, p.exit);
        if (nt != c[(i + 1) % k].triangle || ns != c[(i + 1) % k].enter) return false;
    }
    return true;
}

std::vector<DualCurve> candidate_cycles(const IdealTriangulation& tri, const CuspCrossSection& cs) {
    const int F = int(cs.triangles.size());
    std::vector<DualCurve> out;
    if (F == 0) return out;

    // BFS spanning tree of the dual graph.
    std::vector<int> parent(F, -1), via(F, -1), depth(F, -1);
    std::vector<int> order{0};
    depth[0] = 0;
    for (size_t h = 0; h < order.size(); ++h) {
        int u = order[h];
        for (int s = 0; s < 4; ++s) {
            if (s == cs.triangles[u].vertex) continue;
            int w = across(tri, cs, u, s).first;
            if (depth[w] >= 0) continue;
            depth[w] = depth[u] + 1;
            parent[w] = u;
            via[w] = s;
            order.push_back(w);
        }
    }
    auto tree_edge = [&](int u, int s) {
        auto [w, s2] = across(tri, cs, u, s);
        return (parent[w] == u && via[w] == s) || (parent[u] == w && via[u] == s2);
    };
    auto root_path = [&](int u) {
        std::vector<int> p;
        for (; u >= 0; u = parent[u]) p.push_back(u);
        std::reverse(p.begin(), p.end());
        return p;
    };
    // Side of u leading to its parent.
    auto up_side = [&](int u) { return across(tri, cs, parent[u], via[u]).second; };

    for (int u = 0; u < F; ++u)
        for (int s = 0; s < 4; ++s) {
            if (s == cs.triangles[u].vertex) continue;
            auto [w, s2] = across(tri, cs, u, s);
            if (4 * w + s2 < 4 * u + s || tree_edge(u, s)) continue;
            auto pu = root_path(u), pw = root_path(w);
            size_t l = 0;
            while (l + 1 < pu.size() && l + 1 < pw.size() && pu[l + 1] == pw[l + 1]) ++l;
            std::vector<Move> moves;
            for (size_t j = l; j + 1 < pu.size(); ++j) moves.push_back({pu[j], via[pu[j + 1]]});
            moves.push_back({u, s});
            for (size_t j = pw.size() - 1; j > l; --j) moves.push_back({pw[j], up_side(pw[j])});
            out.push_back(to_curve(tri, cs, moves));
        }

    // Shortest cycle through each dual edge.
    for (int u = 0; u < F; ++u)
        for (int s = 0; s < 4; ++s) {
            if (s == cs.triangles[u].vertex) continue;
            auto [w, s2] = across(tri, cs, u, s);
            if (4 * w + s2 < 4 * u + s) continue;
            std::vector<int> from(F, -1), side(F, -1);
            std::vector<char> seen(F, 0);
            std::vector<int> bfs{w};
            seen[w] = 1;
            for (size_t h = 0; h < bfs.size() && !seen[u]; ++h) {
                int a = bfs[h];
                for (int r = 0; r < 4; ++r) {
                    if (r == cs.triangles[a].vertex) continue;
                    if ((a == u && r == s) || (a == w && r == s2)) continue;
                    int b = across(tri, cs, a, r).first;
                    if (seen[b]) continue;
                    seen[b] = 1;
                    from[b] = a;
                    side[b] = r;
                    bfs.push_back(b);
                }
            }
            if (!seen[u]) continue;
            std::vector<Move> moves;
            std::vector<int> chain;
            for (int a = u; a != w; a = from[a]) chain.push_back(a);
            chain.push_back(w);
            std::reverse(chain.begin(), chain.end());
            for (size_t j = 0; j + 1 < chain.size(); ++j) moves.push_back({chain[j], side[chain[j + 1]]});
            moves.push_back({u, s});
            out.push_back(to_curve(tri, cs, moves));
        }
    return out;
}

long long intersection(const IdealTriangulation& tri, const CuspCrossSection& cs, const DualCurve& a,
                       const DualCurve& b) {
    long long total = 0;
    for (const Passage& p : a)
        for (const Passage& q : b) {
            if (p.triangle != q.triangle) continue;
            XY p1 = side_point(tri, cs, p.triangle, p.enter, 1), p2 = side_point(tri, cs, p.triangle, p.exit, 1);
            XY q1 = side_point(tri, cs, q.triangle, q.enter, 2), q2 = side_point(tri, cs, q.triangle, q.exit, 2);
            XY dp = sub(p2, p1), dq = sub(q2, q1);
            int o1 = sgn(cross(dp, sub(q1, p1))), o2 = sgn(cross(dp, sub(q2, p1)));
            int o3 = sgn(cross(dq, sub(p1, q1))), o4 = sgn(cross(dq, sub(p2, q1)));
            if (o1 * o2 < 0 && o3 * o4 < 0) total += sgn(cross(dp, dq));
        }
    return total;
}

long long intersection(const IdealTriangulation& tri, const CuspCrossSection& cs, const PrimalCurve& a,
                       const DualCurve& b) {
    long long total = 0;
    for (const SideStep& st : a) {
        const CuspTriangle& tr = cs.triangles[st.triangle];
        bool ccw_step = ccw_pos(tr, st.to) == (ccw_pos(tr, st.from) + 1) % 3;
        for (const Passage& p : b) {
            if (p.triangle == st.triangle && p.exit == st.side) total += ccw_step ? -1 : 1;
            auto [nt, ns] = across(tri, cs, p.triangle, p.exit);
            if (nt == st.triangle && ns == st.side) total += ccw_step ? 1 : -1;
        }
    }
    return total;
}

Slope curve_class(const IdealTriangulation& tri, const CuspCrossSection& cs, const DualCurve& c) {
    return {intersection(tri, cs, c, cs.basis[1]), intersection(tri, cs, cs.basis[0], c)};
}

Slope curve_class(const IdealTriangulation& tri, const CuspCrossSection& cs, const PrimalCurve& c) {
    return {intersection(tri, cs, c, cs.basis[1]), -intersection(tri, cs, c, cs.basis[0])};
}

std::pair<int, int> passage_corner(const CuspCrossSection& cs, const Passage& p) {
    const CuspTriangle& tr = cs.triangles[p.triangle];
    int w = third_vertex(tr.vertex, p.enter, p.exit);
    bool ccw = ccw_pos(tr, p.exit) == (ccw_pos(tr, p.enter) + 1) % 3;
    return {ccw ? -1 : 1, edge_index(tr.vertex, w)};
}

std::vector<CuspCrossSection> cusp_cross_section(const IdealTriangulation& tri) {
    if (!tri.orientable()) throw Error(ErrorKind::NotOrientable, "cusp sections need an orientable triangulation");
    auto chi = tri.vertex_link_euler();
    for (size_t c = 0; c < chi.size(); ++c)
        if (chi[c] != 0)
            throw Error(ErrorKind::NonTorusLink,
                        "vertex class " + std::to_string(c) + " has link Euler characteristic " + std::to_string(chi[c]));
    const int n = tri.tet_count();
    std::vector<CuspCrossSection> out(tri.vertex_count());
    for (int c = 0; c < tri.vertex_count(); ++c) {
        out[c].vertex_class = c;
        out[c].index.assign(4 * n, -1);
    }
    for (int t = 0; t < n; ++t)
        for (int v = 0; v < 4; ++v) {
            CuspCrossSection& cs = out[tri.vertex_class(t, v)];
            std::array<int, 3> rest{};
            int k = 0;
            for (int w = 0; w < 4; ++w)
                if (w != v) rest[k++] = w;
            if (perm_sign(v, rest[0], rest[1], rest[2]) * tri.orientation(t) < 0) std::swap(rest[1], rest[2]);
            cs.index[4 * t + v] = int(cs.triangles.size());
            cs.triangles.push_back({t, v, rest});
        }

    for (CuspCrossSection& cs : out) {
        const int F = int(cs.triangles.size());
        std::vector<int> uf(4 * F);
        std::iota(uf.begin(), uf.end(), 0);
        auto find = [&](int x) {
            while (uf[x] != x) x = uf[x] = uf[uf[x]];
            return x;
        };
        for (int t = 0; t < F; ++t) {
            const CuspTriangle& tr = cs.triangles[t];
            for (int s = 0; s < 4; ++s) {
                if (s == tr.vertex) continue;
                const FaceGluing& g = tri.gluing(tr.tet, s);
                int t2 = cs.triangle_at(g.tet, g.perm[tr.vertex]);
                for (int w = 0; w < 4; ++w) {
                    if (w == tr.vertex || w == s) continue;
                    int a = find(4 * t + w), b = find(4 * t2 + g.perm[w]);
                    if (a != b) uf[std::max(a, b)] = std::min(a, b);
                }
            }
        }
        cs.link_vertex.assign(F, {-1, -1, -1, -1});
        std::vector<int> id(4 * F, -1);
        for (int t = 0; t < F; ++t)
            for (int w = 0; w < 4; ++w) {
                if (w == cs.triangles[t].vertex) continue;
                int r = find(4 * t + w);
                if (id[r] < 0) id[r] = cs.link_vertex_count++;
                cs.link_vertex[t][w] = id[r];
            }

        auto cands = candidate_cycles(tri, cs);
        bool found = false;
        for (size_t i = 0; i < cands.size() && !found; ++i)
            for (size_t j = i + 1; j < cands.size() && !found; ++j) {
                long long x = intersection(tri, cs, cands[i], cands[j]);
                if (x != 1 && x != -1) continue;
                cs.basis[0] = cands[i];
                cs.basis[1] = x == 1 ? cands[j] : reversed(cands[j]);
                found = true;
            }
        if (!found) throw Error(ErrorKind::NonTorusLink, "no homology basis found on cusp " + std::to_string(cs.vertex_class));
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

Color vertex_color(const IdealTriangulation& tri, const VeeringStructure& v, const CuspTriangle& tr, int w) {
    return v.colors[tri.edge_class(tr.tet, edge_index(tr.vertex, w))];
}

}  // namespace

std::vector<PrimalCurve> ladderpoles(const IdealTriangulation& tri, const VeeringStructure& v,
                                     const CuspCrossSection& cs) {
    const int F = int(cs.triangles.size());
    // Ladderpole sides, each recorded once from its canonical triangle.
    struct Side {
        int t, s, x, y;
    };
    std::vector<Side> sides;
    std::vector<std::vector<int>> at(cs.link_vertex_count);
    for (int t = 0; t < F; ++t) {
        const CuspTriangle& tr = cs.triangles[t];
        for (int s = 0; s < 4; ++s) {
            if (s == tr.vertex) continue;
            auto [t2, s2] = across(tri, cs, t, s);
            if (4 * t2 + s2 < 4 * t + s) continue;
            auto [x, y] = side_ends(tr, s);
            if (vertex_color(tri, v, tr, x) != vertex_color(tri, v, tr, y)) continue;
            int id = int(sides.size());
            sides.push_back({t, s, x, y});
            at[cs.link_vertex[t][x]].push_back(id);
            at[cs.link_vertex[t][y]].push_back(id);
        }
    }
    for (const auto& a : at)
        if (a.size() != 2)
            throw Error(ErrorKind::InvalidInput, "link vertex meets " + std::to_string(a.size()) + " ladderpole sides");
    std::vector<char> used(sides.size(), 0);
    std::vector<PrimalCurve> out;
    for (size_t s0 = 0; s0 < sides.size(); ++s0) {
        if (used[s0]) continue;
        PrimalCurve pole;
        int cur = int(s0);
        int here = cs.link_vertex[sides[s0].t][sides[s0].x];
        while (!used[cur]) {
            used[cur] = 1;
            const Side& sd = sides[cur];
            int lx = cs.link_vertex[sd.t][sd.x];
            bool forward = lx == here;
            SideStep st{sd.t, sd.s, forward ? sd.x : sd.y, forward ? sd.y : sd.x};
            pole.push_back(st);
            here = cs.link_vertex[sd.t][st.to];
            const auto& nb = at[here];
            cur = nb[0] == cur ? nb[1] : nb[0];
        }
        out.push_back(std::move(pole));
    }
    return out;
}

Color ladderpole_color(const IdealTriangulation& tri, const VeeringStructure& v, const CuspCrossSection& cs,
                       const PrimalCurve& pole) {
    const SideStep& st = pole.front();
    return vertex_color(tri, v, cs.triangles[st.triangle], st.from);
}

Slope degeneracy_slope(const IdealTriangulation& tri, const VeeringStructure& v, const CuspCrossSection& cs) {
    auto poles = ladderpoles(tri, v, cs);
    if (poles.empty()) throw Error(ErrorKind::InvalidInput, "cusp has no ladderpoles");
    Slope first{0, 0};
    for (const auto& pole : poles) {
        Slope c = curve_class(tri, cs, pole);
        Slope s = normalize_slope(c.p, c.q);
        if (s == Slope{0, 0}) throw Error(ErrorKind::InvalidInput, "ladderpole is null-homologous");
        if (first == Slope{0, 0}) first = s;
        else if (!(s == first)) throw Error(ErrorKind::InvalidInput, "ladderpoles are not parallel");
    }
    return first;
}

long long prong_count(const IdealTriangulation& tri, const VeeringStructure& v, const CuspCrossSection& cs,
                      const Slope& boundary, Color color) {
    long long total = 0;
    for (const auto& pole : ladderpoles(tri, v, cs)) {
        if (ladderpole_color(tri, v, cs, pole) != color) continue;
        total += intersection_number(curve_class(tri, cs, pole), boundary);
    }
    return total;
}

Slope homological_longitude(const IdealTriangulation& tri, const CuspCrossSection& cs) {
    const IntegerMatrix d2 = dual_boundary_2(tri);
    const SmithForm snf = smith_normal_form(d2);
    const int rows = tri.face_count();
    std::array<std::vector<BigInt>, 2> img;
    for (int k = 0; k < 2; ++k) {
        std::vector<BigInt> z(rows, 0);
        for (const Passage& p : cs.basis[k]) {
            auto [idx, sign] = dual_face(tri, cs.triangles[p.triangle].tet, p.exit);
            z[idx] += sign;
        }
        for (int r = snf.rank; r < rows; ++r) {
            BigInt acc = 0;
            for (int c = 0; c < rows; ++c) acc += snf.U(r, c) * z[c];
            img[k].push_back(acc);
        }
    }
    // Find (p,q) != 0 with p*img0 + q*img1 = 0.
    size_t pivot = img[0].size();
    for (size_t r = 0; r < img[0].size(); ++r)
        if (img[0][r] != 0 || img[1][r] != 0) {
            pivot = r;
            break;
        }
    if (pivot == img[0].size()) throw Error(ErrorKind::InvalidInput, "whole cusp torus dies in homology");
    const BigInt a = img[0][pivot], b = img[1][pivot];
    for (size_t r = 0; r < img[0].size(); ++r)
        if (b * img[0][r] - a * img[1][r] != 0)
            throw Error(ErrorKind::InvalidInput, "cusp torus injects into rational homology");
    return normalize_slope(static_cast<long long>(b), static_cast<long long>(-a));
}

bool is_principal_fiber(const std::vector<Slope>& boundary_slopes, const std::vector<Slope>& degeneracy_slopes) {
    if (boundary_slopes.size() != degeneracy_slopes.size())
        throw Error(ErrorKind::MismatchedCuspCount, std::to_string(boundary_slopes.size()) + " boundary slopes vs " +
                                                        std::to_string(degeneracy_slopes.size()) + " degeneracy slopes");
    for (size_t i = 0; i < boundary_slopes.size(); ++i)
        if (intersection_number(boundary_slopes[i], degeneracy_slopes[i]) != 1) return false;
    return true;
}

}  // namespace veerkit
