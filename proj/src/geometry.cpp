#include "veerkit/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "veerkit/homology.hpp"
#include "veerkit/placement.hpp"

namespace veerkit {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI(0.0, 1.0);

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Echelon basis over Q kept in lowest integer terms.
struct RankTracker {
    std::vector<std::vector<long long>> rows;
    std::vector<int> pivots;

    static void normalize(std::vector<long long>& r) {
        long long g = 0;
        for (long long x : r) g = std::gcd(g, x < 0 ? -x : x);
        if (g > 1)
            for (long long& x : r) x /= g;
    }
    // Adds r if independent; returns whether it was.
    bool add(std::vector<long long> r) {
        for (size_t k = 0; k < rows.size(); ++k) {
            const long long a = r[pivots[k]];
            if (a == 0) continue;
            const long long b = rows[k][pivots[k]];
            for (size_t j = 0; j < r.size(); ++j) r[j] = r[j] * b - rows[k][j] * a;
            normalize(r);
        }
        for (size_t j = 0; j < r.size(); ++j)
            if (r[j] != 0) {
                rows.push_back(r);
                pivots.push_back(int(j));
                return true;
            }
        return false;
    }
};

// Row in the coordinates (log z, log z') per tet, using log z'' = i*pi - log z - log z'.
std::vector<long long> reduced(const GluingRow& row, int n) {
    std::vector<long long> r(2 * n);
    for (int t = 0; t < n; ++t) {
        r[2 * t] = row.coeff[3 * t] - row.coeff[3 * t + 2];
        r[2 * t + 1] = row.coeff[3 * t + 1] - row.coeff[3 * t + 2];
    }
    return r;
}

}  // namespace

cplx shape_param(cplx z, int pair) {
    switch (pair) {
        case 0: return z;
        case 1: return 1.0 / (1.0 - z);
        default: return 1.0 - 1.0 / z;
    }
}

cplx shape_param_dlog(cplx z, int pair) {
    switch (pair) {
        case 0: return 1.0 / z;
        case 1: return 1.0 / (1.0 - z);
        default: return 1.0 / (z * (z - 1.0));
    }
}

ShapeAssignment ShapeAssignment::uniform(int n, cplx z) {
    ShapeAssignment s;
    s.z.assign(n, z);
    s.branch.assign(n, {0, 0, 0});
    return s;
}

int GluingSystem::edge_row_count() const {
    return int(std::count_if(rows.begin(), rows.end(), [](const GluingRow& r) { return r.kind == RowKind::Edge; }));
}

GluingSystem assemble(const IdealTriangulation& tri) {
    if (!tri.orientable()) throw Error(ErrorKind::NotOrientable, "gluing equations need an orientable triangulation");
    return assemble(tri, cusp_cross_section(tri));
}

GluingSystem assemble(const IdealTriangulation& tri, const std::vector<CuspCrossSection>& cusps) {
    if (!tri.is_oriented())
        throw Error(ErrorKind::NotOrientable, "tetrahedra are not all positively labelled; use oriented_copy");
    const int n = tri.tet_count();
    GluingSystem sys;
    sys.tets = n;
    sys.cusps = int(cusps.size());
    for (int e = 0; e < tri.edge_count(); ++e) {
        GluingRow row{RowKind::Edge, e, std::vector<int>(3 * n, 0), 2};
        for (const EdgeEmbedding& emb : tri.edge_embeddings(e))
            row.coeff[3 * emb.tet + edge_pair(edge_index(emb.order[0], emb.order[1]))] += 1;
        sys.rows.push_back(std::move(row));
    }
    for (size_t c = 0; c < cusps.size(); ++c)
        for (int k = 0; k < 2; ++k) {
            GluingRow row{RowKind::Cusp, int(2 * c + k), std::vector<int>(3 * n, 0), 0};
            for (const Passage& p : cusps[c].basis[k]) {
                auto [sign, edge] = passage_corner(cusps[c], p);
                row.coeff[3 * cusps[c].triangles[p.triangle].tet + edge_pair(edge)] += sign;
            }
            sys.rows.push_back(std::move(row));
        }

    // Independent edge rows, then one cusp row per cusp.
    RankTracker rk;
    const int E = tri.edge_count();
    for (int e = 0; e < E; ++e)
        if (rk.add(reduced(sys.rows[e], n))) sys.square.push_back(e);
    for (size_t c = 0; c < cusps.size(); ++c)
        for (int k = 0; k < 2; ++k)
            if (rk.add(reduced(sys.rows[E + 2 * c + k], n))) {
                sys.square.push_back(E + int(2 * c) + k);
                break;
            }
    return sys;
}

namespace {

cplx row_value(const GluingRow& row, const ShapeAssignment& s) {
    cplx acc = -kI * (kPi * row.target_pi);
    for (int t = 0; t < int(s.z.size()); ++t)
        for (int p = 0; p < 3; ++p) {
            int a = row.coeff[3 * t + p];
            if (a == 0) continue;
            acc += double(a) * (std::log(shape_param(s.z[t], p)) + kI * (2 * kPi * s.branch[t][p]));
        }
    return acc;
}

}  // namespace

std::vector<cplx> evaluate(const GluingSystem& sys, const ShapeAssignment& s) {
    std::vector<cplx> out;
    for (const GluingRow& row : sys.rows) out.push_back(row_value(row, s));
    return out;
}

double residual(const GluingSystem& sys, const ShapeAssignment& s) {
    double acc = 0;
    for (const cplx& v : evaluate(sys, s)) acc += std::norm(v);
    return std::sqrt(acc);
}

double polynomial_residual(const GluingSystem& sys, const ShapeAssignment& s) {
    double acc = 0;
    for (cplx v : evaluate(sys, s)) {
        double im = std::remainder(v.imag(), 2 * kPi);
        acc += v.real() * v.real() + im * im;
    }
    return std::sqrt(acc);
}

namespace {

struct Attempt {
    bool ok = false;
    ErrorKind failure = ErrorKind::NoConvergence;
    ShapeAssignment result;
};

// With `wrap` the imaginary part is reduced mod 2 pi: the exponentiated
// equations, blind to branches.
cplx square_value(const GluingRow& row, const ShapeAssignment& s, bool wrap) {
    cplx v = row_value(row, s);
    return wrap ? cplx(v.real(), std::remainder(v.imag(), 2 * kPi)) : v;
}

double square_norm(const GluingSystem& sys, const ShapeAssignment& s, bool wrap) {
    double acc = 0;
    for (int r : sys.square) acc += std::norm(square_value(sys.rows[r], s, wrap));
    return std::sqrt(acc);
}

bool drifted(const ShapeAssignment& s, double guard) {
    for (cplx z : s.z)
        if (!finite(z) || std::abs(z) < guard || std::abs(z - 1.0) < guard || std::abs(z) > 1e10) return true;
    return false;
}

Attempt newton(const GluingSystem& sys, ShapeAssignment s, const SolveOptions& opt, bool wrap) {
    const int n = sys.tets;
    Attempt out;
    if (int(sys.square.size()) != n) {
        out.failure = ErrorKind::SingularJacobian;
        return out;
    }
    if (drifted(s, opt.guard)) {
        out.failure = ErrorKind::DegenerateDrift;
        return out;
    }
    double norm = square_norm(sys, s, wrap);
    for (int it = 0; it < opt.max_iterations; ++it) {
        Eigen::MatrixXcd J(n, n);
        Eigen::VectorXcd F(n);
        for (int i = 0; i < n; ++i) {
            const GluingRow& row = sys.rows[sys.square[i]];
            F(i) = square_value(row, s, wrap);
            for (int t = 0; t < n; ++t) {
                cplx d = 0;
                for (int p = 0; p < 3; ++p)
                    if (row.coeff[3 * t + p]) d += double(row.coeff[3 * t + p]) * shape_param_dlog(s.z[t], p);
                J(i, t) = d;
            }
        }
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(J);
        lu.setThreshold(1e-13);
        if (!lu.isInvertible()) {
            out.failure = ErrorKind::SingularJacobian;
            return out;
        }
        Eigen::VectorXcd step = lu.solve(-F);
        double lambda = 1.0;
        ShapeAssignment next = s;
        for (int half = 0; half < 30; ++half) {
            for (int t = 0; t < n; ++t) next.z[t] = s.z[t] + lambda * step(t);
            double nn = drifted(next, opt.guard) ? INFINITY : square_norm(sys, next, wrap);
            if (nn < norm || nn < 1e-15) {
                norm = nn;
                break;
            }
            lambda /= 2;
            if (half == 29) {
                out.failure = drifted(next, opt.guard) ? ErrorKind::DegenerateDrift : ErrorKind::NoConvergence;
                return out;
            }
        }
        s = next;
        if (drifted(s, opt.guard)) {
            out.failure = ErrorKind::DegenerateDrift;
            return out;
        }
        double step_size = (lambda * step).norm();
        if (norm < opt.tolerance * 1e-2 || step_size < 1e-15) break;
    }
    if ((wrap ? polynomial_residual(sys, s) : residual(sys, s)) <= opt.tolerance) {
        out.ok = true;
        out.result = s;
    }
    return out;
}

}  // namespace

std::optional<ShapeAssignment> fit_branches(const GluingSystem& sys, const ShapeAssignment& s) {
    const int n = sys.tets, m = int(sys.rows.size());
    ShapeAssignment zero = s;
    zero.branch.assign(n, {0, 0, 0});
    IntegerMatrix A(m, 3 * n), d(m, 1);
    const std::vector<cplx> v = evaluate(sys, zero);
    for (int r = 0; r < m; ++r) {
        for (int k = 0; k < 3 * n; ++k) A(r, k) = sys.rows[r].coeff[k];
        double turns = -v[r].imag() / (2 * kPi);
        if (std::abs(turns - std::round(turns)) > 1e-6) return std::nullopt;
        d(r, 0) = static_cast<long long>(std::round(turns));
    }
    // U A V = S, so A b = d becomes S c = U d with b = V c.
    SmithForm f = smith_normal_form(A);
    IntegerMatrix ud = f.U * d, c(3 * n, 1);
    for (int i = 0; i < m; ++i) {
        if (i < f.rank) {
            const BigInt& si = f.S(i, i);
            if (ud(i, 0) % si != 0) return std::nullopt;
            c(i, 0) = ud(i, 0) / si;
        } else if (ud(i, 0) != 0) {
            return std::nullopt;
        }
    }
    IntegerMatrix b = f.V * c;
    for (int t = 0; t < n; ++t)
        for (int p = 0; p < 3; ++p) {
            const BigInt& x = b(3 * t + p, 0);
            if (x > 1000 || x < -1000) return std::nullopt;
            zero.branch[t][p] = static_cast<int>(x);
        }
    return zero;
}

ShapeAssignment solve(const GluingSystem& sys, const std::optional<ShapeAssignment>& initial, const SolveOptions& opt) {
    const int n = sys.tets;
    ShapeAssignment start = initial ? *initial : ShapeAssignment::uniform(n, kI);
    if (start.size() != n) throw Error(ErrorKind::InvalidInput, "initial assignment has the wrong length");
    if (start.branch.size() != start.z.size()) start.branch.assign(n, {0, 0, 0});
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<ErrorKind> failures;
    for (int attempt = 0; attempt <= opt.random_restarts; ++attempt) {
        ShapeAssignment guess = start;
        if (attempt > 0) {
            guess = ShapeAssignment::uniform(n, 0);
            for (int t = 0; t < n; ++t) {
                double r = 0.4 * std::sqrt(unit(rng)), th = 2 * kPi * unit(rng);
                guess.z[t] = cplx(0.5, 0.87) + std::polar(r, th);
            }
        }
        Attempt a = newton(sys, guess, opt, false);
        if (a.ok) return a.result;
        failures.push_back(a.failure);
    }
    // No solution with these branches.  Solve the exponentiated equations
    // from both half planes and fit branches afterwards; several solutions
    // may turn up, and the complete structure has the largest volume.
    std::optional<ShapeAssignment> best;
    std::mt19937_64 wide(opt.seed ^ 0x5bd1e995u);
    for (int attempt = 0; attempt <= opt.random_restarts; ++attempt) {
        ShapeAssignment guess = start;
        if (attempt > 0)
            for (int t = 0; t < n; ++t) {
                double th = 0.15 + (kPi - 0.3) * unit(wide);
                guess.z[t] = std::polar(std::exp(2 * unit(wide) - 1), wide() % 2 ? th : -th);
            }
        Attempt a = newton(sys, guess, opt, true);
        if (!a.ok) continue;
        auto fitted = fit_branches(sys, a.result);
        if (!fitted) continue;
        Attempt polished = newton(sys, *fitted, opt, false);
        if (!polished.ok) continue;
        if (!best || volume(polished.result) > volume(*best) + 1e-9) best = polished.result;
    }
    if (best) return *best;
    ErrorKind kind = failures.back();
    if (!std::all_of(failures.begin(), failures.end(), [&](ErrorKind k) { return k == kind; }))
        kind = ErrorKind::NoConvergence;
    throw Error(kind, "Newton failed after " + std::to_string(failures.size()) + " attempts");
}

Classification classify(const ShapeAssignment& s, double tol) {
    Classification c{Verdict::Geometric, {}, {}};
    for (int t = 0; t < s.size(); ++t) {
        double im = s.z[t].imag();
        if (im < -tol) c.negative.push_back(t);
        else if (im <= tol) c.flat.push_back(t);
    }
    if (!c.negative.empty()) c.verdict = Verdict::NonGeometric;
    else if (!c.flat.empty()) c.verdict = Verdict::ContainsFlat;
    return c;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Geometric: return "Geometric";
        case Verdict::NonGeometric: return "NonGeometric";
        default: return "ContainsFlat";
    }
}

namespace {

// B_{2k} / (2k+1)! for the series Li2(w) = u - u^2/4 + sum_k B_{2k} u^{2k+1}/(2k+1)!, u = -log(1-w).
const std::vector<double>& li2_coefficients() {
    static const std::vector<double> c = [] {
        const int N = 44;
        std::vector<long double> B(N + 1, 0);
        B[0] = 1;
        for (int m = 1; m <= N; ++m) {
            long double acc = 0, binom = 1;  // C(m+1, k)
            for (int k = 0; k < m; ++k) {
                acc += binom * B[k];
                binom = binom * (m + 1 - k) / (k + 1);
            }
            B[m] = -acc / (m + 1);
        }
        std::vector<double> out;
        long double fact = 1;  // (2k+1)!
        for (int k = 1; 2 * k <= N; ++k) {
            fact *= (2 * k) * (2 * k + 1);
            out.push_back(double(B[2 * k] / fact));
        }
        return out;
    }();
    return c;
}

cplx li2_small(cplx w) {
    const cplx u = -std::log(1.0 - w);
    const cplx u2 = u * u;
    cplx acc = u - u2 / 4.0, pw = u;
    for (double c : li2_coefficients()) {
        pw *= u2;
        cplx term = c * pw;
        acc += term;
        if (std::abs(term) < 1e-18 * std::abs(acc)) break;
    }
    return acc;
}

}  // namespace

double bloch_wigner(cplx z) {
    if (!finite(z) || z == cplx(0) || z == cplx(1)) throw Error(ErrorKind::DegenerateShape, "shape at 0, 1 or infinity");
    const std::array<std::pair<cplx, double>, 6> images = {{{z, 1},
                                                            {1.0 / (1.0 - z), 1},
                                                            {1.0 - 1.0 / z, 1},
                                                            {1.0 / z, -1},
                                                            {1.0 - z, -1},
                                                            {z / (z - 1.0), -1}}};
    for (const auto& [w, sign] : images) {
        if (std::abs(w) > 1.0 + 1e-12 || w.real() > 0.5 + 1e-12) continue;
        return sign * (li2_small(w).imag() + std::arg(1.0 - w) * std::log(std::abs(w)));
    }
    throw std::logic_error("no dilogarithm image in the reduction region");
}

double volume(const ShapeAssignment& s) {
    double v = 0;
    for (cplx z : s.z) v += bloch_wigner(z);
    return v;
}

namespace {

void guard_shape(cplx z, const char* what) {
    if (!finite(z) || std::abs(z) < kMoveGuard || std::abs(z - 1.0) < kMoveGuard || std::abs(z) > 1.0 / kMoveGuard)
        throw Error(ErrorKind::DegenerateMove, std::string(what) + " shape is within the guard radius of 0, 1 or infinity");
}

}  // namespace

ShapeAssignment transport(const ShapeAssignment& s, const PachnerMove& move, const IdealTriangulation& before,
                          const IdealTriangulation& after) {
    if (s.size() != before.tet_count()) throw Error(ErrorKind::InvalidInput, "shape count does not match triangulation");
    std::vector<Params<cplx>> params;
    for (int t : move.old_tets) {
        guard_shape(s.z[t], "source");
        params.push_back({shape_param(s.z[t], 0), shape_param(s.z[t], 1), shape_param(s.z[t], 2)});
    }
    auto P = place_bipyramid(move.old_points, params, cplx(0), cplx(1));
    ShapeAssignment out = ShapeAssignment::uniform(after.tet_count(), 0);
    for (int t = 0; t < before.tet_count(); ++t)
        if (move.correspondence[t] >= 0) {
            out.z[move.correspondence[t]] = s.z[t];
            if (int(s.branch.size()) == s.size()) out.branch[move.correspondence[t]] = s.branch[t];
        }
    for (size_t k = 0; k < move.new_tets.size(); ++k) {
        cplx z = shape_from_points(P, move.new_points[k]);
        guard_shape(z, "transported");
        out.z[move.new_tets[k]] = z;
    }
    return out;
}

ShapeAssignment transport_23(const ShapeAssignment& s, const PachnerMove& move, const IdealTriangulation& before,
                             const IdealTriangulation& after) {
    if (move.kind != MoveKind::TwoThree) throw Error(ErrorKind::InvalidInput, "not a 2-3 move");
    return transport(s, move, before, after);
}

ShapeAssignment transport_32(const ShapeAssignment& s, const PachnerMove& move, const IdealTriangulation& before,
                             const IdealTriangulation& after) {
    if (move.kind != MoveKind::ThreeTwo) throw Error(ErrorKind::InvalidInput, "not a 3-2 move");
    return transport(s, move, before, after);
}

}  // namespace veerkit
