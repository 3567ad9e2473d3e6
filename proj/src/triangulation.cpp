#include "veerkit/triangulation.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace veerkit {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

int parity_of(const std::array<int, 4>& seq) {
    int inv = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (seq[i] > seq[j]) ++inv;
    return inv % 2;
}

}  // namespace

IdealTriangulation IdealTriangulation::from_gluing_data(const GluingData& raw) {
    if (raw.empty()) throw Error(ErrorKind::UngluedFace, "no tetrahedra: nothing is glued");
    const int n = int(raw.size());
    for (int t = 0; t < n; ++t) {
        for (int f = 0; f < 4; ++f) {
            const FaceGluing& g = raw[t][f];
            if (g.tet < 0 || g.tet >= n || g.face < 0 || g.face > 3)
                throw Error(ErrorKind::UngluedFace,
                            "face " + std::to_string(f) + " of tet " + std::to_string(t) + " is unglued");
            if (!Perm4::valid({g.perm[0], g.perm[1], g.perm[2], g.perm[3]}) || g.perm[f] != g.face)
                throw Error(ErrorKind::InvalidPermutation,
                            "bad permutation on face " + std::to_string(f) + " of tet " + std::to_string(t));
        }
    }
    for (int t = 0; t < n; ++t) {
        for (int f = 0; f < 4; ++f) {
            const FaceGluing& g = raw[t][f];
            if (g.tet == t && g.face == f)
                throw Error(ErrorKind::NonInvolutiveGluing, "face glued to itself");
            const FaceGluing& back = raw[g.tet][g.face];
            if (back.tet != t || back.face != f || back.perm != g.perm.inverse())
                throw Error(ErrorKind::NonInvolutiveGluing,
                            "gluing of tet " + std::to_string(t) + " face " + std::to_string(f) +
                                " is not matched by its partner");
        }
    }
    IdealTriangulation tri;
    tri.glue_ = raw;
    tri.derive();
    return tri;
}

void IdealTriangulation::derive() {
    const int n = tet_count();

    UnionFind ue(6 * n), uv(4 * n);
    for (int t = 0; t < n; ++t) {
        for (int f = 0; f < 4; ++f) {
            const FaceGluing& g = glue_[t][f];
            for (int v = 0; v < 4; ++v) {
                if (v == f) continue;
                uv.unite(4 * t + v, 4 * g.tet + g.perm[v]);
                for (int w = v + 1; w < 4; ++w) {
                    if (w == f) continue;
                    ue.unite(6 * t + edge_index(v, w), 6 * g.tet + edge_index(g.perm[v], g.perm[w]));
                }
            }
        }
    }
    edge_class_.assign(n, {});
    vertex_class_.assign(n, {});
    edge_rep_.clear();
    std::vector<int> label(6 * n, -1);
    edge_count_ = 0;
    for (int s = 0; s < 6 * n; ++s) {
        int r = ue.find(s);
        if (label[r] < 0) {
            label[r] = edge_count_++;
            edge_rep_.push_back({s / 6, s % 6});
        }
        edge_class_[s / 6][s % 6] = label[r];
    }
    std::fill(label.begin(), label.end(), -1);
    vertex_count_ = 0;
    for (int s = 0; s < 4 * n; ++s) {
        int r = uv.find(s);
        if (label[r] < 0) label[r] = vertex_count_++;
        vertex_class_[s / 4][s % 4] = label[r];
    }

    orientation_.assign(n, 0);
    orientable_ = true;
    for (int s = 0; s < n; ++s) {
        if (orientation_[s] != 0) continue;
        orientation_[s] = 1;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int t = q.front();
            q.pop();
            for (int f = 0; f < 4; ++f) {
                const FaceGluing& g = glue_[t][f];
                int want = g.perm.sign() < 0 ? orientation_[t] : -orientation_[t];
                if (orientation_[g.tet] == 0) {
                    orientation_[g.tet] = want;
                    q.push(g.tet);
                } else if (orientation_[g.tet] != want) {
                    orientable_ = false;
                }
            }
        }
    }
    if (!orientable_) std::fill(orientation_.begin(), orientation_.end(), 0);
}

bool IdealTriangulation::is_oriented() const {
    for (const auto& tet : glue_)
        for (const auto& g : tet)
            if (g.perm.sign() > 0) return false;
    return true;
}

std::vector<int> IdealTriangulation::edge_valences() const {
    std::vector<int> val(edge_count_, 0);
    for (const auto& row : edge_class_)
        for (int c : row) ++val[c];
    return val;
}

std::vector<EdgeEmbedding> IdealTriangulation::edge_embeddings(int cls) const {
    auto [t0, e0] = edge_rep_.at(cls);
    int i = kEdgeVerts[e0][0], j = kEdgeVerts[e0][1];
    int k = -1, l = -1;
    for (int v = 0; v < 4; ++v) {
        if (v == i || v == j) continue;
        if (k < 0) k = v; else l = v;
    }
    const Perm4 start(i, j, k, l);
    std::vector<EdgeEmbedding> out;
    int t = t0;
    Perm4 ord = start;
    const int cap = 6 * tet_count() + 1;
    do {
        out.push_back({t, ord});
        const FaceGluing& g = glue_[t][ord[2]];
        Perm4 next(g.perm[ord[0]], g.perm[ord[1]], g.perm[ord[3]], g.perm[ord[2]]);
        t = g.tet;
        ord = next;
    } while (!(t == t0 && ord == start) && int(out.size()) < cap);
    return out;
}

std::vector<int> IdealTriangulation::vertex_link_euler() const {
    const int n = tet_count();
    // Link vertices: orbits of (tet, vertex, other vertex) slots.
    UnionFind u(16 * n);
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            const FaceGluing& g = glue_[t][f];
            for (int v = 0; v < 4; ++v)
                for (int w = 0; w < 4; ++w)
                    if (v != w && v != f && w != f)
                        u.unite(16 * t + 4 * v + w, 16 * g.tet + 4 * g.perm[v] + g.perm[w]);
        }
    std::vector<int> tri(vertex_count_, 0), verts(vertex_count_, 0);
    for (int t = 0; t < n; ++t)
        for (int v = 0; v < 4; ++v) {
            ++tri[vertex_class_[t][v]];
            for (int w = 0; w < 4; ++w) {
                int s = 16 * t + 4 * v + w;
                if (v != w && u.find(s) == s) ++verts[vertex_class_[t][v]];
            }
        }
    std::vector<int> chi(vertex_count_);
    for (int c = 0; c < vertex_count_; ++c) chi[c] = verts[c] - 3 * tri[c] / 2 + tri[c];
    return chi;
}

IdealTriangulation relabel(const IdealTriangulation& tri, const std::vector<int>& tet_map,
                           const std::vector<Perm4>& vertex_maps) {
    const int n = tri.tet_count();
    GluingData g(n);
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            const FaceGluing& old = tri.gluing(t, f);
            FaceGluing nw;
            nw.tet = tet_map[old.tet];
            nw.face = vertex_maps[old.tet][old.face];
            nw.perm = vertex_maps[old.tet] * old.perm * vertex_maps[t].inverse();
            g[tet_map[t]][vertex_maps[t][f]] = nw;
        }
    return IdealTriangulation::from_gluing_data(g);
}

IdealTriangulation oriented_copy(const IdealTriangulation& tri) {
    if (!tri.orientable()) throw Error(ErrorKind::NotOrientable, "triangulation is not orientable");
    std::vector<int> ident(tri.tet_count());
    std::iota(ident.begin(), ident.end(), 0);
    std::vector<Perm4> vm(tri.tet_count());
    for (int t = 0; t < tri.tet_count(); ++t)
        if (tri.orientation(t) < 0) vm[t] = Perm4(0, 1, 3, 2);
    return relabel(tri, ident, vm);
}

namespace {

int face_mask(const std::array<int, 4>& pts, int skip) {
    int m = 0;
    for (int v = 0; v < 4; ++v)
        if (v != skip) m |= 1 << pts[v];
    return m;
}

std::array<int, 5> invert_points(const std::array<int, 4>& pts) {
    std::array<int, 5> inv{-1, -1, -1, -1, -1};
    for (int v = 0; v < 4; ++v) inv[pts[v]] = v;
    return inv;
}

PachnerResult replace_bipyramid(const IdealTriangulation& tri, MoveKind kind, int target,
                                const std::vector<int>& old_tets,
                                const std::vector<std::array<int, 4>>& old_points,
                                const std::vector<std::array<int, 4>>& new_points) {
    const int n = tri.tet_count();
    std::vector<int> corr(n, -1);
    int kept = 0;
    for (int t = 0; t < n; ++t)
        if (std::find(old_tets.begin(), old_tets.end(), t) == old_tets.end()) corr[t] = kept++;
    const int nn = kept + int(new_points.size());
    std::vector<int> new_ids;
    for (size_t k = 0; k < new_points.size(); ++k) new_ids.push_back(kept + int(k));

    GluingData g(nn);
    for (int t = 0; t < n; ++t) {
        if (corr[t] < 0) continue;
        for (int f = 0; f < 4; ++f) {
            const FaceGluing& old = tri.gluing(t, f);
            g[corr[t]][f] = {corr[old.tet], old.face, old.perm};
        }
    }

    auto find_new_slot = [&](int mask, int skip_k, int skip_l) -> std::pair<int, int> {
        for (size_t k = 0; k < new_points.size(); ++k)
            for (int l = 0; l < 4; ++l)
                if (!(int(k) == skip_k && l == skip_l) && face_mask(new_points[k], l) == mask)
                    return {int(k), l};
        return {-1, -1};
    };
    auto old_index = [&](int t) -> int {
        auto it = std::find(old_tets.begin(), old_tets.end(), t);
        return it == old_tets.end() ? -1 : int(it - old_tets.begin());
    };

    for (size_t k = 0; k < new_points.size(); ++k) {
        const auto& pk = new_points[k];
        for (int l = 0; l < 4; ++l) {
            const int mask = face_mask(pk, l);
            auto [k2, l2] = find_new_slot(mask, int(k), l);
            if (k2 >= 0) {
                auto inv2 = invert_points(new_points[k2]);
                std::array<int, 4> img{};
                for (int v = 0; v < 4; ++v) img[v] = v == l ? l2 : inv2[pk[v]];
                g[new_ids[k]][l] = {new_ids[k2], l2, Perm4(img[0], img[1], img[2], img[3])};
                continue;
            }
            int oi = -1, of = -1, hits = 0;
            for (size_t j = 0; j < old_tets.size(); ++j)
                for (int f = 0; f < 4; ++f)
                    if (face_mask(old_points[j], f) == mask) {
                        oi = int(j);
                        of = f;
                        ++hits;
                    }
            if (hits != 1) throw Error(ErrorKind::NonManifoldGluing, "bipyramid face lookup failed");
            auto invo = invert_points(old_points[oi]);
            std::array<int, 4> mu{};
            for (int v = 0; v < 4; ++v) mu[v] = v == l ? of : invo[pk[v]];
            const Perm4 muP(mu[0], mu[1], mu[2], mu[3]);
            const FaceGluing& across = tri.gluing(old_tets[oi], of);
            const int j2 = old_index(across.tet);
            if (j2 >= 0) {
                const int mask2 = face_mask(old_points[j2], across.face);
                auto [k3, l3] = find_new_slot(mask2, -1, -1);
                if (k3 < 0) throw Error(ErrorKind::NonManifoldGluing, "bipyramid face lookup failed");
                auto inv3 = invert_points(new_points[k3]);
                std::array<int, 4> nu{};
                for (int w = 0; w < 4; ++w) nu[w] = w == across.face ? l3 : inv3[old_points[j2][w]];
                const Perm4 nuP(nu[0], nu[1], nu[2], nu[3]);
                g[new_ids[k]][l] = {new_ids[k3], l3, nuP * across.perm * muP};
            } else {
                const Perm4 p = across.perm * muP;
                g[new_ids[k]][l] = {corr[across.tet], across.face, p};
                g[corr[across.tet]][across.face] = {new_ids[k], l, p.inverse()};
            }
        }
    }

    PachnerResult res{IdealTriangulation::from_gluing_data(g),
                      PachnerMove{kind, target, old_tets, old_points, new_ids, new_points, corr}};
    return res;
}

}  // namespace

PachnerResult pachner_23(const IdealTriangulation& tri, int tet, int face) {
    const FaceGluing& g = tri.gluing(tet, face);
    if (g.tet == tet)
        throw Error(ErrorKind::SelfGluedFace, "both sides of the face lie on tet " + std::to_string(tet));
    std::array<int, 4> pt{};
    int next = 0;
    for (int v = 0; v < 4; ++v) pt[v] = v == face ? 3 : next++;
    if (parity_of(pt) != 0) {
        int a = -1, b = -1;
        for (int v = 0; v < 4; ++v) {
            if (pt[v] == 0) a = v;
            if (pt[v] == 1) b = v;
        }
        std::swap(pt[a], pt[b]);
    }
    std::array<int, 4> pt2{};
    for (int v = 0; v < 4; ++v) {
        if (v == face) pt2[g.face] = 4;
        else pt2[g.perm[v]] = pt[v];
    }
    std::vector<std::array<int, 4>> np;
    for (int k = 0; k < 3; ++k) np.push_back({(k + 1) % 3, (k + 2) % 3, 4, 3});
    return replace_bipyramid(tri, MoveKind::TwoThree, 4 * tet + face, {tet, g.tet}, {pt, pt2}, np);
}

PachnerResult pachner_32(const IdealTriangulation& tri, int edge_class) {
    auto val = tri.edge_valences();
    if (edge_class < 0 || edge_class >= int(val.size()))
        throw Error(ErrorKind::InvalidInput, "edge class out of range");
    if (val[edge_class] != 3)
        throw Error(ErrorKind::WrongValence,
                    "edge class " + std::to_string(edge_class) + " has valence " + std::to_string(val[edge_class]));
    auto emb = tri.edge_embeddings(edge_class);
    if (emb.size() != 3) throw Error(ErrorKind::NonManifoldGluing, "edge is identified with itself");
    if (emb[0].tet == emb[1].tet || emb[1].tet == emb[2].tet || emb[0].tet == emb[2].tet)
        throw Error(ErrorKind::RepeatedTetrahedron, "valence-3 edge meets a tetrahedron twice");

    static constexpr int slots[3][4] = {{3, 4, 1, 2}, {3, 4, 2, 0}, {3, 4, 0, 1}};
    std::vector<std::array<int, 4>> pts(3);
    for (int s = 0; s < 3; ++s)
        for (int m = 0; m < 4; ++m) pts[s][emb[s].order[m]] = slots[s][m];
    if (parity_of(pts[0]) != 1) {
        // Reflect the equator so the first tet maps to a positive point tuple.
        for (auto& p : pts)
            for (int& x : p) x = x == 1 ? 2 : x == 2 ? 1 : x;
    }
    std::vector<std::array<int, 4>> np{{0, 1, 2, 3}, {1, 0, 2, 4}};
    return replace_bipyramid(tri, MoveKind::ThreeTwo, edge_class, {emb[0].tet, emb[1].tet, emb[2].tet}, pts, np);
}

int created_edge(const PachnerResult& r) {
    return r.tri.edge_class(r.move.new_tets.at(0), edge_index(2, 3));
}

// ---------------------------------------------------------------------------
// Isomorphism signatures

namespace {

constexpr char kAlphabet[] = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789+-";

int decode_char(char c) {
    const char* p = std::find(kAlphabet, kAlphabet + 64, c);
    if (p == kAlphabet + 64) throw Error(ErrorKind::InvalidInput, std::string("bad signature character ") + c);
    return int(p - kAlphabet);
}

void put_digits(std::string& s, int value, int width) {
    for (int i = width - 1; i >= 0; --i) s += kAlphabet[(value >> (6 * i)) & 63];
}

// Encoding from one start; returns false as soon as it exceeds `best`.
bool encode_from(const IdealTriangulation& tri, int start, Perm4 start_map, std::vector<int>& out,
                 const std::vector<int>* best) {
    const int n = tri.tet_count();
    std::vector<int> index(n, -1), order;
    std::vector<Perm4> map(n);
    index[start] = 0;
    map[start] = start_map;
    order.push_back(start);
    out.clear();
    bool tied = best != nullptr;
    auto emit = [&](int x) {
        if (tied) {
            int b = (*best)[out.size()];
            if (x > b) return false;
            if (x < b) tied = false;
        }
        out.push_back(x);
        return true;
    };
    for (size_t c = 0; c < order.size(); ++c) {
        const int T = order[c];
        for (int F = 0; F < 4; ++F) {
            const FaceGluing& g = tri.gluing(T, map[T][F]);
            if (index[g.tet] < 0) {
                index[g.tet] = int(order.size());
                map[g.tet] = g.perm * map[T];
                order.push_back(g.tet);
            }
            Perm4 canon = map[g.tet].inverse() * g.perm * map[T];
            if (!emit(index[g.tet]) || !emit(canon.index())) return false;
        }
    }
    if (int(order.size()) != n) throw Error(ErrorKind::Disconnected, "triangulation is disconnected");
    return true;
}

}  // namespace

std::string isomorphism_signature(const IdealTriangulation& tri) {
    const int n = tri.tet_count();
    std::vector<int> best, cur;
    bool have = false;
    for (int s = 0; s < n; ++s)
        for (int p = 0; p < 24; ++p) {
            if (encode_from(tri, s, Perm4::from_index(p), cur, have ? &best : nullptr)) {
                if (!have || cur < best) best = cur;
                have = true;
            }
        }
    int width = 1;
    while ((1 << (6 * width)) <= n) ++width;
    std::string sig;
    sig += kAlphabet[width];
    put_digits(sig, n, width);
    for (size_t i = 0; i < best.size(); i += 2) {
        put_digits(sig, best[i], width);
        sig += kAlphabet[best[i + 1]];
    }
    return sig;
}

IdealTriangulation from_signature(const std::string& sig) {
    if (sig.empty()) throw Error(ErrorKind::InvalidInput, "empty signature");
    size_t pos = 0;
    const int width = decode_char(sig[pos++]);
    auto read = [&](int w) {
        if (pos + w > sig.size()) throw Error(ErrorKind::InvalidInput, "truncated signature");
        int v = 0;
        for (int i = 0; i < w; ++i) v = (v << 6) | decode_char(sig[pos++]);
        return v;
    };
    const int n = read(width);
    if (n <= 0) throw Error(ErrorKind::InvalidInput, "signature with no tetrahedra");
    GluingData g(n);
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            int partner = read(width);
            int pidx = read(1);
            if (pidx >= 24) throw Error(ErrorKind::InvalidInput, "bad permutation index");
            Perm4 p = Perm4::from_index(pidx);
            g[t][f] = {partner, p[f], p};
        }
    if (pos != sig.size()) throw Error(ErrorKind::InvalidInput, "trailing signature data");
    return IdealTriangulation::from_gluing_data(g);
}

}  // namespace veerkit
