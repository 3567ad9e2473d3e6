#include "veerkit/certify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <istream>
#include <json.hpp>
#include <map>
#include <ostream>
#include <random>

#include "veerkit/io.hpp"
#include "veerkit/placement.hpp"

namespace veerkit {

const char* const kVersion = "veerkit 0.1.0";

std::string cert_verdict_name(CertVerdict v) {
    return v == CertVerdict::GeometricCertified ? "GeometricCertified" : "NonGeometricCertified";
}

namespace {

// prod over factors of z_t^a (1 - z_t)^b, a, b >= 0, one factor per tet.
struct Factor {
    int tet, a, b;
};
using Monomial = std::vector<Factor>;

// pos - sign * neg
struct PolyRow {
    Monomial pos, neg;
    int sign;
};

PolyRow poly_row(const GluingRow& row, int n) {
    PolyRow out{{}, {}, 1};
    int parity = row.target_pi;
    for (int t = 0; t < n; ++t) {
        const int c0 = row.coeff[3 * t], c1 = row.coeff[3 * t + 1], c2 = row.coeff[3 * t + 2];
        parity += c2;
        const int A = c0 - c2, B = c2 - c1;
        Factor p{t, std::max(A, 0), std::max(B, 0)}, q{t, std::max(-A, 0), std::max(-B, 0)};
        if (p.a || p.b) out.pos.push_back(p);
        if (q.a || q.b) out.neg.push_back(q);
    }
    out.sign = (parity % 2 == 0) ? 1 : -1;
    return out;
}

template <class T>
T ipow(const T& x, int k, const T& one) {
    T r = one;
    for (int i = 0; i < k; ++i) r = r * x;
    return r;
}

template <class T>
T factor_value(const Factor& f, const std::vector<T>& z, const T& one) {
    return ipow(z[f.tet], f.a, one) * ipow(one - z[f.tet], f.b, one);
}

template <class T>
T factor_derivative(const Factor& f, const std::vector<T>& z, const T& one) {
    const T& x = z[f.tet];
    const T y = one - x;
    T d = T(0.0);
    if (f.a) d = d + T(double(f.a)) * ipow(x, f.a - 1, one) * ipow(y, f.b, one);
    if (f.b) d = d - T(double(f.b)) * ipow(x, f.a, one) * ipow(y, f.b - 1, one);
    return d;
}

template <class T>
T mono_value(const Monomial& m, const std::vector<T>& z, const T& one) {
    T r = one;
    for (const Factor& f : m) r = r * factor_value(f, z, one);
    return r;
}

template <class T>
T mono_partial(const Monomial& m, const std::vector<T>& z, int tet, const T& one) {
    T r = one;
    bool found = false;
    for (const Factor& f : m) {
        if (f.tet == tet) {
            r = r * factor_derivative(f, z, one);
            found = true;
        } else {
            r = r * factor_value(f, z, one);
        }
    }
    return found ? r : T(0.0);
}

template <class T>
T row_value(const PolyRow& r, const std::vector<T>& z, const T& one) {
    return mono_value(r.pos, z, one) - T(double(r.sign)) * mono_value(r.neg, z, one);
}

template <class T>
T row_partial(const PolyRow& r, const std::vector<T>& z, int tet, const T& one) {
    return mono_partial(r.pos, z, tet, one) - T(double(r.sign)) * mono_partial(r.neg, z, tet, one);
}

std::vector<PolyRow> square_rows(const GluingSystem& sys) {
    std::vector<PolyRow> rows;
    for (int r : sys.square) rows.push_back(poly_row(sys.rows[r], sys.tets));
    return rows;
}

ComplexBox cbox(cplx z) { return ComplexBox::point(z.real(), z.imag()); }

// Floating preconditioner: inverse Jacobian of the polynomial system at c.
std::optional<Eigen::MatrixXcd> preconditioner(const std::vector<PolyRow>& rows, const std::vector<cplx>& c) {
    const int n = int(c.size());
    Eigen::MatrixXcd J(n, n);
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < n; ++t) J(i, t) = row_partial(rows[i], c, t, cplx(1.0));
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(J);
    if (!lu.isInvertible()) return std::nullopt;
    Eigen::MatrixXcd C = lu.inverse();
    if (!C.allFinite()) return std::nullopt;
    return C;
}

bool contracts(const std::vector<PolyRow>& rows, const std::vector<cplx>& c, const std::vector<ComplexBox>& X) {
    const int n = int(c.size());
    if (int(rows.size()) != n || int(X.size()) != n) return false;
    auto C = preconditioner(rows, c);
    if (!C) return false;
    const ComplexBox one(1.0);
    std::vector<ComplexBox> cb(n), dx(n);
    for (int t = 0; t < n; ++t) {
        cb[t] = cbox(c[t]);
        if (!X[t].valid() || !X[t].bounded() || !(X[t].re.contains(c[t].real()) && X[t].im.contains(c[t].imag())))
            return false;
        dx[t] = X[t] - cb[t];
    }
    std::vector<ComplexBox> Fc(n);
    for (int i = 0; i < n; ++i) Fc[i] = row_value(rows[i], cb, one);
    std::vector<std::vector<ComplexBox>> JX(n, std::vector<ComplexBox>(n));
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < n; ++t) JX[i][t] = row_partial(rows[i], X, t, one);
    for (int i = 0; i < n; ++i) {
        ComplexBox k = cb[i];
        for (int j = 0; j < n; ++j) k = k - cbox((*C)(i, j)) * Fc[j];
        for (int j = 0; j < n; ++j) {
            ComplexBox m(i == j ? 1.0 : 0.0);
            for (int l = 0; l < n; ++l) m = m - cbox((*C)(i, l)) * JX[l][j];
            k = k + m * dx[j];
        }
        if (!k.interior_of(X[i])) return false;
    }
    return true;
}

Params<ComplexBox> box_params(const ComplexBox& z) {
    const ComplexBox one(1.0);
    return {z, one / (one - z), one - one / z};
}

std::vector<cplx> midpoints(const std::vector<ComplexBox>& X) {
    std::vector<cplx> c;
    for (const auto& b : X) c.emplace_back(b.re.mid(), b.im.mid());
    return c;
}

double power_of_two_width(const Interval& iv) {
    const double w = sub_down(iv.hi, iv.lo);
    if (w != sub_up(iv.hi, iv.lo) || !(w > 0) || !std::isfinite(w)) return -1;
    int e = 0;
    return std::frexp(w, &e) == 0.5 ? w : -1;
}

// Square box of radius 2^k around a grid point near z; nullopt if the
// endpoints would not be exact.
std::optional<ComplexBox> square_box(cplx z, int k) {
    const double r = std::ldexp(1.0, k), u = std::ldexp(1.0, k - 4);
    Interval axes[2];
    const double xs[2] = {z.real(), z.imag()};
    for (int a = 0; a < 2; ++a) {
        const double q = xs[a] / u;
        if (!std::isfinite(q) || std::abs(q) > 0x1p50) return std::nullopt;
        const double c = std::nearbyint(q) * u;
        const double lo = c - r, hi = c + r;
        if (lo != sub_down(c, r) || lo != sub_up(c, r) || hi != add_down(c, r) || hi != add_up(c, r)) return std::nullopt;
        axes[a] = {lo, hi};
    }
    return ComplexBox(axes[0], axes[1]);
}

}  // namespace

bool krawczyk_contracts(const GluingSystem& sys, const std::vector<ComplexBox>& X) {
    return contracts(square_rows(sys), midpoints(X), X);
}

bool log_rows_hold(const GluingSystem& sys, const std::vector<ComplexBox>& X) {
    const int n = sys.tets;
    if (int(X.size()) != n) return false;
    std::vector<std::array<Interval, 3>> lre(n), lim(n);
    for (int t = 0; t < n; ++t) {
        auto p = box_params(X[t]);
        for (int k = 0; k < 3; ++k) {
            lre[t][k] = log(norm(p[k]));
            lim[t][k] = arg(p[k]);
            if (!lre[t][k].bounded() || !lim[t][k].bounded()) return false;
        }
    }
    for (const GluingRow& row : sys.rows) {
        Interval re(0.0), im(0.0);
        for (int t = 0; t < n; ++t)
            for (int k = 0; k < 3; ++k) {
                const int c = row.coeff[3 * t + k];
                if (!c) continue;
                re = re + Interval(double(c)) * lre[t][k];
                im = im + Interval(double(c)) * lim[t][k];
            }
        // re holds twice the log modulus; both must contain the target.
        const Interval target = Interval::pi() * Interval(double(row.target_pi));
        if (!re.contains_zero()) return false;
        if (!(im.lo <= target.hi && target.lo <= im.hi)) return false;
    }
    return true;
}

std::optional<BoxAssignment> try_krawczyk(const GluingSystem& sys, const ShapeAssignment& approx, double inflation) {
    const int n = sys.tets;
    if (approx.size() != n || int(sys.square.size()) != n) return std::nullopt;
    if (!(residual(sys, approx) <= 1e-8)) return std::nullopt;
    const auto rows = square_rows(sys);
    double scale = 1;
    for (cplx z : approx.z) scale = std::max(scale, std::abs(z));
    int k = int(std::ceil(std::log2(std::max(inflation, 1e-300) * scale)));
    for (; std::ldexp(1.0, k) <= 1e-5; ++k) {
        std::vector<ComplexBox> X;
        for (cplx z : approx.z) {
            auto b = square_box(z, k);
            if (!b) break;
            X.push_back(*b);
        }
        if (int(X.size()) != n) continue;
        if (std::any_of(X.begin(), X.end(), [](const ComplexBox& b) { return b.meets_real_axis(); })) return std::nullopt;
        if (!contracts(rows, midpoints(X), X)) continue;
        if (!log_rows_hold(sys, X)) return std::nullopt;
        return BoxAssignment{X, true};
    }
    return std::nullopt;
}

BoxAssignment krawczyk_verify(const GluingSystem& sys, const ShapeAssignment& approx, double inflation) {
    if (approx.size() != sys.tets) throw Error(ErrorKind::VerificationFailed, "shape count does not match the system");
    const double res = residual(sys, approx);
    if (!(res <= 1e-8))
        throw Error(ErrorKind::VerificationFailed, "approximate solution residual " + std::to_string(res) + " exceeds 1e-8");
    auto b = try_krawczyk(sys, approx, inflation);
    if (!b) throw Error(ErrorKind::VerificationFailed, "Krawczyk operator did not contract at any radius");
    return *b;
}

PachnerResult apply_move(const IdealTriangulation& tri, const MoveRecord& m) {
    if (m.kind == MoveKind::TwoThree) {
        if (m.target < 0 || m.target >= 4 * tri.tet_count()) throw Error(ErrorKind::InvalidInput, "2-3 target out of range");
        return pachner_23(tri, m.target / 4, m.target % 4);
    }
    return pachner_32(tri, m.target);
}

namespace {

// Box value with partial derivatives in up to three input shapes.
struct Dual {
    ComplexBox v;
    std::array<ComplexBox, 3> d{};

    Dual() = default;
    Dual(double x) : v(x) {}
    Dual(ComplexBox x) : v(x) {}
};

Dual operator+(const Dual& a, const Dual& b) {
    Dual r(a.v + b.v);
    for (int k = 0; k < 3; ++k) r.d[k] = a.d[k] + b.d[k];
    return r;
}
Dual operator-(const Dual& a, const Dual& b) {
    Dual r(a.v - b.v);
    for (int k = 0; k < 3; ++k) r.d[k] = a.d[k] - b.d[k];
    return r;
}
Dual operator*(const Dual& a, const Dual& b) {
    Dual r(a.v * b.v);
    for (int k = 0; k < 3; ++k) r.d[k] = a.d[k] * b.v + a.v * b.d[k];
    return r;
}
Dual operator/(const Dual& a, const Dual& b) {
    Dual r(a.v / b.v);
    for (int k = 0; k < 3; ++k) r.d[k] = (a.d[k] - r.v * b.d[k]) / b.v;
    return r;
}

template <class C>
Params<C> params_of(const C& z) {
    const C one(1.0);
    return {z, one / (one - z), one - one / z};
}

ComplexBox intersect(const ComplexBox& a, const ComplexBox& b) {
    ComplexBox r{{std::max(a.re.lo, b.re.lo), std::min(a.re.hi, b.re.hi)},
                 {std::max(a.im.lo, b.im.lo), std::min(a.im.hi, b.im.hi)}};
    return r.valid() ? r : a;
}

}  // namespace

// Centered form: f(X) lies in f(m) + sum_j f_j'(X) (X_j - m_j) because each
// box is convex and f is holomorphic in every input; intersected with the
// naive enclosure f(X).
std::vector<ComplexBox> transport_back(const PachnerResult& r, const std::vector<ComplexBox>& after) {
    const PachnerMove& mv = r.move;
    if (int(after.size()) != r.tri.tet_count()) throw Error(ErrorKind::InvalidInput, "box count does not match");
    std::vector<ComplexBox> out(mv.correspondence.size());
    for (size_t t = 0; t < mv.correspondence.size(); ++t)
        if (mv.correspondence[t] >= 0) out[t] = after[mv.correspondence[t]];
    if (mv.new_tets.size() > 3) throw std::logic_error("more than three new tetrahedra");

    std::vector<Params<ComplexBox>> mid_params;
    std::vector<Params<Dual>> box_params_d;
    std::vector<ComplexBox> offset;
    for (size_t k = 0; k < mv.new_tets.size(); ++k) {
        const ComplexBox& X = after[mv.new_tets[k]];
        const ComplexBox m = ComplexBox::point(X.re.mid(), X.im.mid());
        mid_params.push_back(params_of(m));
        Dual z(X);
        z.d[k] = ComplexBox(1.0);
        box_params_d.push_back(params_of(z));
        offset.push_back(X - m);
    }
    auto Pm = place_bipyramid(mv.new_points, mid_params, ComplexBox(0.0), ComplexBox(1.0));
    auto Pd = place_bipyramid(mv.new_points, box_params_d, Dual(0.0), Dual(1.0));
    for (size_t k = 0; k < mv.old_tets.size(); ++k) {
        ComplexBox centered = shape_from_points(Pm, mv.old_points[k]);
        const Dual naive = shape_from_points(Pd, mv.old_points[k]);
        for (size_t j = 0; j < offset.size(); ++j) centered = centered + naive.d[j] * offset[j];
        out[mv.old_tets[k]] = centered.bounded() ? intersect(centered, naive.v) : naive.v;
    }
    return out;
}

std::vector<ComplexBox> transport_back(const IdealTriangulation& before, const MoveRecord& m,
                                       const std::vector<ComplexBox>& after) {
    return transport_back(apply_move(before, m), after);
}

namespace {

const IdealTriangulation& oriented(const IdealTriangulation& tri, std::optional<IdealTriangulation>& store) {
    if (tri.is_oriented()) return tri;
    store = oriented_copy(tri);
    return *store;
}

bool all_upper(const std::vector<ComplexBox>& b) {
    return std::all_of(b.begin(), b.end(), [](const ComplexBox& x) { return x.im.lo > 0; });
}

std::optional<Certificate> try_single_step(const IdealTriangulation& tri, const GluingSystem& sys,
                                           const ShapeAssignment& approx, double inflation) {
    auto b = try_krawczyk(sys, approx, inflation);
    if (!b || !all_upper(b->boxes)) return std::nullopt;
    Certificate c;
    c.steps = {tri};
    c.boxes = {*b};
    c.verdict = CertVerdict::GeometricCertified;
    c.version = kVersion;
    return c;
}

}  // namespace

Certificate certify_geometric(const IdealTriangulation& tri, const ShapeAssignment& approx, double inflation) {
    if (!tri.is_oriented()) throw Error(ErrorKind::NotOrientable, "certify_geometric with shapes needs a positively labelled triangulation");
    auto c = try_single_step(tri, assemble(tri), approx, inflation);
    if (!c) throw Error(ErrorKind::NotCertified, "verification failed or some box is not in the upper half plane");
    return *c;
}

Certificate certify_geometric(const IdealTriangulation& input, const SolveOptions& opt) {
    std::optional<IdealTriangulation> store;
    const IdealTriangulation& tri = oriented(input, store);
    const GluingSystem sys = assemble(tri);
    ShapeAssignment s;
    try {
        s = solve(sys, std::nullopt, opt);
    } catch (const Error& e) {
        throw Error(ErrorKind::NotCertified, std::string("no approximate solution: ") + e.what());
    }
    auto c = try_single_step(tri, sys, s, 1e-13);
    if (!c) throw Error(ErrorKind::NotCertified, "verification failed or some box is not in the upper half plane");
    c->seed = opt.seed;
    return *c;
}

namespace {

constexpr double kPositive = 1e-9;
constexpr double kFlat = 1e-7;

bool floating_geometric(const ShapeAssignment& s) {
    return std::all_of(s.z.begin(), s.z.end(), [](cplx z) { return z.imag() > kPositive; });
}

// Shapes well away from the real axis; walks never pass through flat
// tetrahedra, whose boxes could not exclude R.
bool non_degenerate(const ShapeAssignment& s) {
    return std::all_of(s.z.begin(), s.z.end(), [](cplx z) { return std::abs(z.imag()) > kFlat * std::max(1.0, std::abs(z)); });
}

std::vector<MoveRecord> all_moves(const IdealTriangulation& tri, const std::vector<bool>* near) {
    std::vector<MoveRecord> out;
    for (int t = 0; t < tri.tet_count(); ++t) {
        if (near && !(*near)[t]) continue;
        for (int f = 0; f < 4; ++f)
            if (tri.gluing(t, f).tet != t) out.push_back({MoveKind::TwoThree, 4 * t + f});
    }
    auto val = tri.edge_valences();
    for (int e = 0; e < int(val.size()); ++e) {
        if (val[e] != 3) continue;
        auto emb = tri.edge_embeddings(e);
        if (emb.size() != 3 || emb[0].tet == emb[1].tet || emb[1].tet == emb[2].tet || emb[0].tet == emb[2].tet)
            continue;
        if (near && !(*near)[emb[0].tet] && !(*near)[emb[1].tet] && !(*near)[emb[2].tet]) continue;
        out.push_back({MoveKind::ThreeTwo, e});
    }
    return out;
}

struct Step {
    MoveRecord move;
    IdealTriangulation tri;
    ShapeAssignment shapes;
    std::pair<int, double> score;  // (tets not positive, total depth below the axis)
};

std::optional<Step> try_step(const IdealTriangulation& cur, const ShapeAssignment& s, const MoveRecord& m) {
    try {
        PachnerResult r = apply_move(cur, m);
        ShapeAssignment next = transport(s, r.move, cur, r.tri);
        if (!non_degenerate(next)) return std::nullopt;
        Step st{m, std::move(r.tri), std::move(next), {0, 0.0}};
        for (cplx z : st.shapes.z)
            if (z.imag() <= kPositive) {
                ++st.score.first;
                st.score.second -= z.imag() / std::abs(z);
            }
        return st;
    } catch (const Error&) {
        return std::nullopt;
    }
}

// Newton polish from transported shapes, then Krawczyk.
std::optional<Certificate> try_finish(const IdealTriangulation& tri, const ShapeAssignment& s, double inflation) {
    GluingSystem sys = assemble(tri);
    if (int(sys.square.size()) != sys.tets) return std::nullopt;
    ShapeAssignment polished;
    try {
        SolveOptions opt;
        opt.random_restarts = 0;
        polished = solve(sys, s, opt);
    } catch (const Error&) {
        return std::nullopt;
    }
    if (!floating_geometric(polished)) return std::nullopt;
    return try_single_step(tri, sys, polished, inflation);
}

ShapeAssignment initial_shapes(const IdealTriangulation& tri, const SearchBudget& budget, std::uint64_t seed) {
    const GluingSystem sys = assemble(tri);
    if (budget.initial) {
        ShapeAssignment s = *budget.initial;
        if (s.size() != tri.tet_count()) throw Error(ErrorKind::InvalidInput, "initial shapes have the wrong length");
        if (int(s.branch.size()) != s.size()) s.branch.assign(s.size(), {0, 0, 0});
        if (!(polynomial_residual(sys, s) <= 1e-8))
            throw Error(ErrorKind::InvalidInput, "initial shapes do not solve the gluing equations");
        return s;
    }
    SolveOptions opt;
    opt.seed = seed;
    return solve(sys, std::nullopt, opt);
}

}  // namespace

GeometricPath find_geometric_path(const IdealTriangulation& input, const SearchBudget& budget, std::uint64_t seed) {
    std::optional<IdealTriangulation> store;
    const IdealTriangulation& tri = oriented(input, store);
    const ShapeAssignment s0 = initial_shapes(tri, budget, seed);

    GeometricPath out;
    if (floating_geometric(s0))
        if (auto c = try_finish(tri, s0, budget.inflation)) {
            out.path = {{tri}, {}, {s0}};
            c->seed = seed;
            out.final_step = *c;
            return out;
        }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int walk = 0; walk < budget.restarts; ++walk) {
        PachnerPath path{{tri}, {}, {s0}};
        for (int depth = 0; depth < budget.max_length; ++depth) {
            const IdealTriangulation& cur = path.steps.back();
            const ShapeAssignment& s = path.shapes.back();
            std::vector<bool> near(cur.tet_count());
            for (int t = 0; t < cur.tet_count(); ++t) near[t] = s.z[t].imag() <= kPositive;
            const bool greedy = unit(rng) < budget.greedy;
            std::vector<MoveRecord> moves = all_moves(cur, greedy ? &near : nullptr);
            if (moves.empty()) moves = all_moves(cur, nullptr);
            std::shuffle(moves.begin(), moves.end(), rng);
            // Greedy: best score among all nearby moves; otherwise the first
            // move that works.
            std::optional<Step> best;
            for (const MoveRecord& m : moves) {
                auto st = try_step(cur, s, m);
                if (!st) continue;
                if (!best || st->score < best->score) best = std::move(st);
                if (!greedy) break;
            }
            if (!best && greedy) {
                moves = all_moves(cur, nullptr);
                std::shuffle(moves.begin(), moves.end(), rng);
                for (const MoveRecord& m : moves)
                    if ((best = try_step(cur, s, m))) break;
            }
            if (!best) break;
            path.moves.push_back(best->move);
            path.steps.push_back(std::move(best->tri));
            path.shapes.push_back(std::move(best->shapes));
            if (floating_geometric(path.shapes.back()))
                if (auto c = try_finish(path.steps.back(), path.shapes.back(), budget.inflation)) {
                    c->seed = seed;
                    out.path = std::move(path);
                    out.final_step = *c;
                    return out;
                }
        }
    }
    throw Error(ErrorKind::BudgetExhausted,
                "no certified geometric triangulation within " + std::to_string(budget.restarts) + " walks of length " +
                    std::to_string(budget.max_length));
}

Certificate certify_nongeometric(const IdealTriangulation& input, const SearchBudget& budget, std::uint64_t seed) {
    std::optional<IdealTriangulation> store;
    const IdealTriangulation& tri = oriented(input, store);
    SearchBudget b = budget;
    b.initial = initial_shapes(tri, budget, seed);
    // A flat input shape gives a box on the real axis whatever the path.
    if (!non_degenerate(*b.initial))
        throw Error(ErrorKind::TransportDegenerate, "the solution on the input has a flat tetrahedron");
    GeometricPath gp = find_geometric_path(tri, b, seed);
    if (gp.path.moves.empty()) throw Error(ErrorKind::NotNonGeometric, "the input itself is certified geometric");
    const int n = int(gp.path.steps.size());
    Certificate c;
    c.steps = gp.path.steps;
    c.moves = gp.path.moves;
    c.boxes.resize(n);
    c.boxes[n - 1] = gp.final_step.boxes[0];
    c.seed = seed;
    c.version = kVersion;
    for (int i = n - 2; i >= 0; --i) {
        PachnerResult r = apply_move(c.steps[i], c.moves[i]);
        c.boxes[i].boxes = transport_back(r, c.boxes[i + 1].boxes);
        for (int t = 0; t < int(c.boxes[i].boxes.size()); ++t) {
            const ComplexBox& b = c.boxes[i].boxes[t];
            if (!b.valid() || !b.bounded() || b.meets_real_axis())
                throw Error(ErrorKind::TransportDegenerate, "transported box of tetrahedron " + std::to_string(t) +
                                                                " at step " + std::to_string(i) + " meets the real axis");
        }
        c.boxes[i].unique = krawczyk_contracts(assemble(c.steps[i]), c.boxes[i].boxes);
    }
    const auto& first = c.boxes[0].boxes;
    if (!std::any_of(first.begin(), first.end(), [](const ComplexBox& b) { return b.im.hi < 0; }))
        throw Error(ErrorKind::NotNonGeometric, "every transported box on the input lies in the upper half plane");
    c.verdict = CertVerdict::NonGeometricCertified;
    return c;
}

namespace {

CheckReport fail(int step, const std::string& why) { return {false, step, why}; }

bool same_gluings(const IdealTriangulation& a, const IdealTriangulation& b) {
    if (a.tet_count() != b.tet_count()) return false;
    for (int t = 0; t < a.tet_count(); ++t)
        for (int f = 0; f < 4; ++f) {
            const FaceGluing &x = a.gluing(t, f), &y = b.gluing(t, f);
            if (x.tet != y.tet || x.face != y.face || x.perm != y.perm) return false;
        }
    return true;
}

CheckReport check_impl(const Certificate& cert) {
    const int n = int(cert.steps.size());
    if (n == 0) return fail(-1, "no steps");
    if (int(cert.moves.size()) != n - 1 || int(cert.boxes.size()) != n) return fail(-1, "step, move and box counts disagree");
    for (int i = 0; i < n; ++i) {
        if (!cert.steps[i].is_oriented()) return fail(i, "triangulation at step " + std::to_string(i) + " is not positively labelled");
        if (int(cert.boxes[i].boxes.size()) != cert.steps[i].tet_count())
            return fail(i, "box count mismatch at step " + std::to_string(i));
    }

    // (a) combinatorics
    std::vector<PachnerResult> results;
    for (int i = 0; i + 1 < n; ++i) {
        try {
            results.push_back(apply_move(cert.steps[i], cert.moves[i]));
        } catch (const Error&) {
            return fail(i, "move mismatch at step " + std::to_string(i));
        }
        if (!same_gluings(results.back().tri, cert.steps[i + 1])) return fail(i, "move mismatch at step " + std::to_string(i));
    }

    // (d) exclusions
    for (int i = 0; i < n; ++i)
        for (const ComplexBox& b : cert.boxes[i].boxes)
            if (!b.valid() || !b.bounded() || b.meets_real_axis())
                return fail(i, "degenerate box at step " + std::to_string(i));

    // (b) final step
    const int last = n - 1;
    const GluingSystem sys = assemble(cert.steps[last]);
    for (const ComplexBox& b : cert.boxes[last].boxes) {
        const double w = power_of_two_width(b.re);
        if (w < 0 || w != power_of_two_width(b.im)) return fail(last, "non-canonical box at step " + std::to_string(last));
    }
    if (!cert.boxes[last].unique || !krawczyk_contracts(sys, cert.boxes[last].boxes))
        return fail(last, "Krawczyk re-verification failed at step " + std::to_string(last));
    if (!log_rows_hold(sys, cert.boxes[last].boxes))
        return fail(last, "log-form gluing rows fail at step " + std::to_string(last));
    for (int i = 0; i < last; ++i)
        if (cert.boxes[i].unique && !krawczyk_contracts(assemble(cert.steps[i]), cert.boxes[i].boxes))
            return fail(i, "uniqueness flag not justified at step " + std::to_string(i));

    // (c) backward transport
    for (int i = last - 1; i >= 0; --i) {
        std::vector<ComplexBox> moved = transport_back(results[i], cert.boxes[i + 1].boxes);
        for (size_t t = 0; t < moved.size(); ++t) {
            if (!moved[t].subset_of(cert.boxes[i].boxes[t]))
                return fail(i, "transport enclosure fails at step " + std::to_string(i));
            if (!(moved[t] == cert.boxes[i].boxes[t]))
                return fail(i, "recorded box differs from its transport at step " + std::to_string(i));
        }
    }

    // (e) sign condition
    if (!all_upper(cert.boxes[last].boxes)) return fail(last, "sign condition fails at step " + std::to_string(last));
    const auto& first = cert.boxes[0].boxes;
    if (cert.verdict == CertVerdict::GeometricCertified) {
        if (!all_upper(first)) return fail(0, "sign condition fails at step 0");
    } else {
        if (!std::any_of(first.begin(), first.end(), [](const ComplexBox& b) { return b.im.hi < 0; }))
            return fail(0, "sign condition fails at step 0");
    }
    return {true, -1, ""};
}

}  // namespace

CheckReport check_certificate(const Certificate& cert) {
    try {
        return check_impl(cert);
    } catch (const std::exception& e) {
        return fail(-1, std::string("malformed certificate: ") + e.what());
    }
}

Interval interval_volume(const std::vector<ComplexBox>& boxes) {
    Interval total(0.0);
    const ComplexBox one(1.0);
    for (const ComplexBox& b : boxes) {
        if (!b.bounded() || b.meets_real_axis()) return Interval::entire();
        const double mre = b.re.mid(), mim = b.im.mid();
        const double d = bloch_wigner(cplx(mre, mim));
        const Interval az = abs(b), a1 = abs(one - b);
        const Interval grad = Interval(log(az).mag()) / a1 + Interval(log(a1).mag()) / az;
        const double spread = add_up(mul_up(grad.hi, b.rad()), 1e-12);
        total = total + Interval(sub_down(d, spread), add_up(d, spread));
    }
    return total;
}

using nlohmann::json;

void write_certificate(std::ostream& out, const Certificate& cert) {
    json steps = json::array();
    for (size_t i = 0; i < cert.steps.size(); ++i) {
        json boxes = json::array();
        for (const ComplexBox& b : cert.boxes[i].boxes)
            boxes.push_back({hex_double(b.re.lo), hex_double(b.re.hi), hex_double(b.im.lo), hex_double(b.im.hi)});
        steps.push_back({{"triangulation", triangulation_json(cert.steps[i])}, {"boxes", boxes}, {"unique", cert.boxes[i].unique}});
    }
    json moves = json::array();
    for (const MoveRecord& m : cert.moves) moves.push_back({{"kind", m.kind == MoveKind::TwoThree ? "23" : "32"}, {"target", m.target}});
    json j = {{"steps", steps},
              {"moves", moves},
              {"verdict", cert_verdict_name(cert.verdict)},
              {"seed", cert.seed},
              {"version", cert.version}};
    out << j.dump(1) << '\n';
}

Certificate read_certificate(std::istream& in) {
    Certificate c;
    try {
        json j = json::parse(in);
        for (const json& s : j.at("steps")) {
            c.steps.push_back(triangulation_from_json(s.at("triangulation")).tri);
            BoxAssignment ba;
            ba.unique = s.value("unique", false);
            for (const json& b : s.at("boxes")) {
                if (!b.is_array() || b.size() != 4) throw Error(ErrorKind::InvalidInput, "box needs four endpoints");
                double v[4];
                for (int k = 0; k < 4; ++k) v[k] = parse_hex_double(b[k].get<std::string>());
                ba.boxes.push_back(ComplexBox(Interval(v[0], v[1]), Interval(v[2], v[3])));
            }
            c.boxes.push_back(std::move(ba));
        }
        for (const json& m : j.at("moves")) {
            const std::string k = m.at("kind").get<std::string>();
            if (k != "23" && k != "32") throw Error(ErrorKind::InvalidInput, "move kind must be 23 or 32");
            c.moves.push_back({k == "23" ? MoveKind::TwoThree : MoveKind::ThreeTwo, m.at("target").get<int>()});
        }
        const std::string v = j.at("verdict").get<std::string>();
        if (v == "GeometricCertified") c.verdict = CertVerdict::GeometricCertified;
        else if (v == "NonGeometricCertified") c.verdict = CertVerdict::NonGeometricCertified;
        else throw Error(ErrorKind::InvalidInput, "unknown verdict " + v);
        c.seed = j.at("seed").get<std::uint64_t>();
        c.version = j.at("version").get<std::string>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidInput, std::string("certificate JSON: ") + e.what());
    }
    return c;
}

}  // namespace veerkit
