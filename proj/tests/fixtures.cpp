#include "fixtures.hpp"

#include <algorithm>
#include <numeric>

using namespace veerkit;

namespace fixtures {

IdealTriangulation figure_eight() {
    GluingData g(2);
    const Perm4 p0(0, 1, 3, 2), p1(1, 2, 3, 0), p2(2, 3, 1, 0), p3(2, 1, 0, 3);
    const Perm4 q0(0, 1, 3, 2), q1(3, 2, 0, 1), q2(3, 0, 1, 2), q3(2, 1, 0, 3);
    g[0] = {FaceGluing{1, p0[0], p0}, FaceGluing{1, p1[1], p1}, FaceGluing{1, p2[2], p2}, FaceGluing{1, p3[3], p3}};
    g[1] = {FaceGluing{0, q0[0], q0}, FaceGluing{0, q1[1], q1}, FaceGluing{0, q2[2], q2}, FaceGluing{0, q3[3], q3}};
    return IdealTriangulation::from_gluing_data(g);
}

namespace {

int relax_count(const IdealTriangulation& tri, bool edges) {
    const int n = tri.tet_count();
    const int per = edges ? 6 : 4;
    std::vector<int> lab(per * n);
    std::iota(lab.begin(), lab.end(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int t = 0; t < n; ++t)
            for (int f = 0; f < 4; ++f) {
                const auto& g = tri.gluing(t, f);
                for (int a = 0; a < 4; ++a) {
                    if (a == f) continue;
                    if (!edges) {
                        int& x = lab[4 * t + a];
                        int& y = lab[4 * g.tet + g.perm[a]];
                        if (x != y) { x = y = std::min(x, y); changed = true; }
                        continue;
                    }
                    for (int b = a + 1; b < 4; ++b) {
                        if (b == f) continue;
                        int& x = lab[6 * t + edge_index(a, b)];
                        int& y = lab[6 * g.tet + edge_index(g.perm[a], g.perm[b])];
                        if (x != y) { x = y = std::min(x, y); changed = true; }
                    }
                }
            }
    }
    std::sort(lab.begin(), lab.end());
    return int(std::unique(lab.begin(), lab.end()) - lab.begin());
}

}  // namespace

int oracle_edge_orbit_count(const IdealTriangulation& tri) { return relax_count(tri, true); }
int oracle_vertex_orbit_count(const IdealTriangulation& tri) { return relax_count(tri, false); }

IdealTriangulation scramble(const IdealTriangulation& tri, std::mt19937_64& rng) {
    return scramble_with_maps(tri, rng).tri;
}

Relabelling scramble_with_maps(const IdealTriangulation& tri, std::mt19937_64& rng) {
    const int n = tri.tet_count();
    std::vector<int> tm(n);
    std::iota(tm.begin(), tm.end(), 0);
    std::shuffle(tm.begin(), tm.end(), rng);
    std::vector<Perm4> vm(n);
    for (auto& p : vm) p = Perm4::from_index(int(rng() % 24));
    auto out = relabel(tri, tm, vm);
    return {tm, vm, out};
}

IdealTriangulation random_gluing(std::mt19937_64& rng, int n, bool oriented) {
    std::vector<int> slots(4 * n);
    std::iota(slots.begin(), slots.end(), 0);
    std::shuffle(slots.begin(), slots.end(), rng);
    GluingData g(n);
    for (int i = 0; i < 4 * n; i += 2) {
        int a = slots[i], b = slots[i + 1];
        int ta = a / 4, fa = a % 4, tb = b / 4, fb = b % 4;
        Perm4 p;
        do {
            p = Perm4::from_index(int(rng() % 24));
        } while (p[fa] != fb || (oriented && p.sign() > 0));
        g[ta][fa] = FaceGluing{tb, fb, p};
        g[tb][fb] = FaceGluing{ta, fa, p.inverse()};
    }
    return IdealTriangulation::from_gluing_data(g);
}

IdealTriangulation random_pachner_walk(std::mt19937_64& rng, int max_tets) {
    IdealTriangulation tri = figure_eight();
    int steps = int(rng() % 12);
    for (int s = 0; s < steps; ++s) {
        if (tri.tet_count() < max_tets && rng() % 3 != 0) {
            int t = int(rng() % tri.tet_count()), f = int(rng() % 4);
            if (tri.gluing(t, f).tet == t) continue;
            tri = pachner_23(tri, t, f).tri;
        } else {
            auto val = tri.edge_valences();
            for (int e = 0; e < int(val.size()); ++e) {
                if (val[e] != 3) continue;
                try {
                    tri = pachner_32(tri, e).tri;
                    break;
                } catch (const Error&) {
                }
            }
        }
    }
    return tri;
}

}  // namespace fixtures
