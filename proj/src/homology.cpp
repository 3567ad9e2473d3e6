#include "veerkit/homology.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace veerkit {

IntegerMatrix IntegerMatrix::identity(int n) {
    IntegerMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntegerMatrix IntegerMatrix::from_rows(const std::vector<std::vector<long long>>& rows) {
    const int r = int(rows.size());
    const int c = r ? int(rows[0].size()) : 0;
    IntegerMatrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = rows[i].at(j);
    return m;
}

IntegerMatrix IntegerMatrix::operator*(const IntegerMatrix& o) const {
    IntegerMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const BigInt& x = (*this)(i, k);
            if (x == 0) continue;
            for (int j = 0; j < o.cols_; ++j) r(i, j) += x * o(k, j);
        }
    return r;
}

bool IntegerMatrix::operator==(const IntegerMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

IntegerMatrix IntegerMatrix::transpose() const {
    IntegerMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

bool IntegerMatrix::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const BigInt& x) { return x == 0; });
}

BigInt IntegerMatrix::determinant() const {
    const int n = rows_;
    if (n == 0) return 1;
    IntegerMatrix m = *this;
    BigInt prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m(k, k) == 0) {
            int sw = -1;
            for (int i = k + 1; i < n; ++i)
                if (m(i, k) != 0) { sw = i; break; }
            if (sw < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(m(k, j), m(sw, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

namespace {

struct Reducer {
    IntegerMatrix S, U, V;

    void swap_rows(int i, int j) {
        for (int c = 0; c < S.cols(); ++c) std::swap(S(i, c), S(j, c));
        for (int c = 0; c < U.cols(); ++c) std::swap(U(i, c), U(j, c));
    }
    void swap_cols(int i, int j) {
        for (int r = 0; r < S.rows(); ++r) std::swap(S(r, i), S(r, j));
        for (int r = 0; r < V.rows(); ++r) std::swap(V(r, i), V(r, j));
    }
    // row i += k * row j
    void add_row(int i, int j, const BigInt& k) {
        for (int c = 0; c < S.cols(); ++c) S(i, c) += k * S(j, c);
        for (int c = 0; c < U.cols(); ++c) U(i, c) += k * U(j, c);
    }
    void add_col(int i, int j, const BigInt& k) {
        for (int r = 0; r < S.rows(); ++r) S(r, i) += k * S(r, j);
        for (int r = 0; r < V.rows(); ++r) V(r, i) += k * V(r, j);
    }
};

}  // namespace

SmithForm smith_normal_form(const IntegerMatrix& A) {
    const int m = A.rows(), n = A.cols();
    Reducer R{A, IntegerMatrix::identity(m), IntegerMatrix::identity(n)};
    IntegerMatrix& S = R.S;
    int t = 0;
    for (; t < std::min(m, n); ++t) {
        int pi = -1, pj = -1;
        BigInt best;
        for (int i = t; i < m; ++i)
            for (int j = t; j < n; ++j)
                if (S(i, j) != 0 && (pi < 0 || abs(S(i, j)) < best)) {
                    best = abs(S(i, j));
                    pi = i;
                    pj = j;
                }
        if (pi < 0) break;
        if (pi != t) R.swap_rows(pi, t);
        if (pj != t) R.swap_cols(pj, t);
        for (;;) {
            // Smallest entry of row t and column t becomes the pivot.
            int bi = t, bj = t;
            for (int i = t + 1; i < m; ++i)
                if (S(i, t) != 0 && abs(S(i, t)) < abs(S(bi, bj))) { bi = i; bj = t; }
            for (int j = t + 1; j < n; ++j)
                if (S(t, j) != 0 && abs(S(t, j)) < abs(S(bi, bj))) { bi = t; bj = j; }
            if (bi != t) R.swap_rows(bi, t);
            if (bj != t) R.swap_cols(bj, t);
            bool clean = true;
            for (int i = t + 1; i < m; ++i) {
                if (S(i, t) == 0) continue;
                R.add_row(i, t, -(S(i, t) / S(t, t)));
                if (S(i, t) != 0) clean = false;
            }
            for (int j = t + 1; j < n; ++j) {
                if (S(t, j) == 0) continue;
                R.add_col(j, t, -(S(t, j) / S(t, t)));
                if (S(t, j) != 0) clean = false;
            }
            if (!clean) continue;
            bool divides = true;
            for (int i = t + 1; i < m && divides; ++i)
                for (int j = t + 1; j < n; ++j)
                    if (S(i, j) % S(t, t) != 0) {
                        R.add_row(t, i, 1);
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        if (S(t, t) < 0) {
            for (int c = 0; c < n; ++c) S(t, c) = -S(t, c);
            for (int c = 0; c < m; ++c) R.U(t, c) = -R.U(t, c);
        }
    }
    SmithForm out{R.U, R.S, R.V, t, {}};
    for (int i = 0; i < t; ++i) out.invariants.push_back(out.S(i, i));
    return out;
}

std::pair<int, int> dual_face(const IdealTriangulation& tri, int tet, int face) {
    const FaceGluing& g = tri.gluing(tet, face);
    const int slot = 4 * tet + face, other = 4 * g.tet + g.face;
    const int canon = std::min(slot, other);
    int idx = 0;
    for (int s = 0; s < canon; ++s) {
        const FaceGluing& h = tri.gluing(s / 4, s % 4);
        if (s < 4 * h.tet + h.face) ++idx;
    }
    return {idx, slot == canon ? 1 : -1};
}

IntegerMatrix dual_boundary_1(const IdealTriangulation& tri) {
    IntegerMatrix d(tri.tet_count(), tri.face_count());
    int idx = 0;
    for (int s = 0; s < 4 * tri.tet_count(); ++s) {
        const FaceGluing& g = tri.gluing(s / 4, s % 4);
        if (s > 4 * g.tet + g.face) continue;
        d(g.tet, idx) += 1;
        d(s / 4, idx) -= 1;
        ++idx;
    }
    return d;
}

IntegerMatrix dual_boundary_2(const IdealTriangulation& tri) {
    IntegerMatrix d(tri.face_count(), tri.edge_count());
    for (int e = 0; e < tri.edge_count(); ++e)
        for (const EdgeEmbedding& emb : tri.edge_embeddings(e)) {
            auto [f, sgn] = dual_face(tri, emb.tet, emb.order[2]);
            d(f, e) += sgn;
        }
    return d;
}

std::string HomologyGroups::describe() const {
    std::ostringstream os;
    bool first = true;
    if (betti_1 > 0) {
        os << "Z";
        if (betti_1 > 1) os << "^" << betti_1;
        first = false;
    }
    for (const BigInt& t : torsion) {
        os << (first ? "" : " + ") << "Z/" << t;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

HomologyGroups homology_groups(const IdealTriangulation& tri) {
    if (!tri.orientable()) throw Error(ErrorKind::NotOrientable, "homology requires an orientable triangulation");
    auto chi = tri.vertex_link_euler();
    for (size_t c = 0; c < chi.size(); ++c)
        if (chi[c] != 0)
            throw Error(ErrorKind::NonTorusLink,
                        "vertex class " + std::to_string(c) + " has link Euler characteristic " + std::to_string(chi[c]));
    const IntegerMatrix d1 = dual_boundary_1(tri), d2 = dual_boundary_2(tri);
    const SmithForm s1 = smith_normal_form(d1), s2 = smith_normal_form(d2);
    HomologyGroups h;
    h.betti_1 = (tri.face_count() - s1.rank) - s2.rank;
    for (const BigInt& d : s2.invariants)
        if (d > 1) h.torsion.push_back(d);
    // H_2(M, dM) is dual to H^1(M): cocycles of the transposed complex modulo coboundaries.
    const SmithForm c1 = smith_normal_form(d2.transpose()), c0 = smith_normal_form(d1.transpose());
    h.rank_h2_rel = (tri.face_count() - c1.rank) - c0.rank;
    return h;
}

Slope normalize_slope(long long p, long long q) {
    long long g = std::gcd(p < 0 ? -p : p, q < 0 ? -q : q);
    if (g == 0) return {0, 0};
    p /= g;
    q /= g;
    if (p < 0 || (p == 0 && q < 0)) {
        p = -p;
        q = -q;
    }
    return {p, q};
}

SlopeSumResult slope_sum(const std::vector<WeightedSlope>& terms) {
    SlopeSumResult r;
    for (const auto& t : terms) {
        r.p += t.multiplicity * t.slope.p;
        r.q += t.multiplicity * t.slope.q;
    }
    r.components = std::gcd(r.p < 0 ? -r.p : r.p, r.q < 0 ? -r.q : r.q);
    r.slope = normalize_slope(r.p, r.q);
    return r;
}

long long intersection_number(const Slope& a, const Slope& b) {
    long long d = a.p * b.q - a.q * b.p;
    return d < 0 ? -d : d;
}

FiberType fiber_type(const FaceData& face, long long a, long long b) {
    if (a < 0 || b < 0 || (a == 0 && b == 0))
        throw Error(ErrorKind::InvalidInput, "coefficients must be non-negative and not both zero");
    if (std::gcd(a, b) != 1) throw Error(ErrorKind::InvalidInput, "class is not primitive");
    if (face.v1.norm <= 0 || face.v2.norm <= 0) throw Error(ErrorKind::InvalidInput, "vertex norms must be positive");
    if (face.v1.boundary.size() != face.v2.boundary.size())
        throw Error(ErrorKind::InvalidInput, "vertices disagree on the number of cusps");
    FiberType ft;
    ft.norm = a * face.v1.norm + b * face.v2.norm;
    for (int c = 0; c < face.cusp_count(); ++c) {
        std::vector<WeightedSlope> terms;
        for (const auto& w : face.v1.boundary[c]) terms.push_back({a * w.multiplicity, w.slope});
        for (const auto& w : face.v2.boundary[c]) terms.push_back({b * w.multiplicity, w.slope});
        ft.boundary.push_back(slope_sum(terms));
        ft.punctures += ft.boundary.back().components;
    }
    // norm = -chi = 2g - 2 + n, so norm and n share parity.
    if ((ft.norm - ft.punctures) % 2 != 0)
        throw Error(ErrorKind::ParityViolation, "norm " + std::to_string(ft.norm) + " and puncture count " +
                                                    std::to_string(ft.punctures) + " have different parity");
    ft.genus = (ft.norm - ft.punctures + 2) / 2;
    if (ft.genus < 0) throw Error(ErrorKind::NonPositiveGenus, "derived genus is negative");
    return ft;
}

}  // namespace veerkit
