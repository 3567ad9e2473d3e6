#include <bit>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "veerkit/certify.hpp"
#include "veerkit/flatsurf.hpp"

using namespace veerkit;
using Q = boost::multiprecision::cpp_rational;

namespace {

constexpr double kFig8Volume = 2.029883212819307;

double random_double(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> m(0.5, 1.0);
    std::uniform_int_distribution<int> e(-40, 40);
    double x = std::ldexp(m(rng), e(rng));
    return rng() % 2 ? -x : x;
}

Interval random_interval(std::mt19937_64& rng) {
    double a = random_double(rng);
    switch (rng() % 3) {
        case 0: return {a, a};
        case 1: return {a, a + std::abs(a) * std::ldexp(1.0, -int(rng() % 50))};
        default: {
            double b = random_double(rng);
            return {std::min(a, b), std::max(a, b)};
        }
    }
}

Q mid_q(const Interval& x) { return (Q(x.lo) + Q(x.hi)) / 2; }

bool encloses(const Interval& r, const Q& v) { return r.valid() && Q(r.lo) <= v && v <= Q(r.hi); }

// Shapes after a chain of moves from a bundle, carried in floating point.
struct Carried {
    IdealTriangulation tri;
    ShapeAssignment shapes;
};

Carried carry(const std::string& word, const std::vector<MoveRecord>& moves) {
    auto g = ptorus_bundle(word);
    IdealTriangulation tri = g.tri.is_oriented() ? g.tri : oriented_copy(g.tri);
    ShapeAssignment s = solve(assemble(tri));
    for (const auto& m : moves) {
        auto r = apply_move(tri, m);
        s = transport(s, r.move, tri, r.tri);
        tri = r.tri;
    }
    return {tri, s};
}

// A non-geometric triangulation two moves away from the RRL bundle.
Carried nongeometric_example() {
    return carry("RRL", {{MoveKind::TwoThree, 2}, {MoveKind::TwoThree, 8}, {MoveKind::TwoThree, 2}});
}

std::string serialize(const Certificate& c) {
    std::ostringstream out;
    write_certificate(out, c);
    return out.str();
}

Certificate deserialize(const std::string& s) {
    std::istringstream in(s);
    return read_certificate(in);
}

const Certificate& nongeometric_cert() {
    static const Certificate c = [] {
        Carried ex = nongeometric_example();
        SearchBudget b;
        b.initial = ex.shapes;
        return certify_nongeometric(ex.tri, b, 7);
    }();
    return c;
}

}  // namespace

TEST_CASE("directed rounding brackets the exact result") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20000; ++i) {
        double a = random_double(rng), b = random_double(rng);
        Q qa(a), qb(b);
        CHECK(Q(add_down(a, b)) <= qa + qb);
        CHECK(Q(add_up(a, b)) >= qa + qb);
        CHECK(Q(mul_down(a, b)) <= qa * qb);
        CHECK(Q(mul_up(a, b)) >= qa * qb);
        CHECK(Q(div_down(a, b)) <= qa / qb);
        CHECK(Q(div_up(a, b)) >= qa / qb);
        double p = std::abs(a);
        double sd = sqrt_down(p), su = sqrt_up(p);
        CHECK(Q(sd) * Q(sd) <= Q(p));
        CHECK(Q(su) * Q(su) >= Q(p));
        // Tight: at most one ulp of slack.
        CHECK(std::nextafter(add_down(a, b), INFINITY) >= add_up(a, b));
    }
}

TEST_CASE("directed rounding in the subnormal range") {
    const double t = 0x1p-1070;
    CHECK(Q(mul_down(t, 0.75)) <= Q(t) * Q(0.75));
    CHECK(Q(mul_up(t, 0.75)) >= Q(t) * Q(0.75));
    CHECK(Q(div_up(t, 3.0)) >= Q(t) / 3);
    CHECK(div_down(t, 3.0) >= 0);
}

TEST_CASE("real interval ops enclose exact midpoint results") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 100000; ++i) {
        Interval x = random_interval(rng), y = random_interval(rng);
        Q mx = mid_q(x), my = mid_q(y);
        CHECK(encloses(x + y, mx + my));
        CHECK(encloses(x - y, mx - my));
        CHECK(encloses(x * y, mx * my));
        if (!y.contains_zero()) CHECK(encloses(x / y, mx / my));
        CHECK(encloses(sqr(x), mx * mx));
    }
}

TEST_CASE("complex box ops enclose exact midpoint results") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 100000; ++i) {
        ComplexBox a{random_interval(rng), random_interval(rng)};
        ComplexBox b{random_interval(rng), random_interval(rng)};
        Q ar = mid_q(a.re), ai = mid_q(a.im), br = mid_q(b.re), bi = mid_q(b.im);
        ComplexBox s = a + b, d = a - b, p = a * b;
        CHECK((encloses(s.re, ar + br) && encloses(s.im, ai + bi)));
        CHECK((encloses(d.re, ar - br) && encloses(d.im, ai - bi)));
        CHECK((encloses(p.re, ar * br - ai * bi) && encloses(p.im, ar * bi + ai * br)));
        Q n = br * br + bi * bi;
        if (n != 0) {
            ComplexBox q = a / b;
            if (q.bounded()) CHECK((encloses(q.re, (ar * br + ai * bi) / n) && encloses(q.im, (ai * br - ar * bi) / n)));
        }
    }
}

TEST_CASE("interval ops are inclusion monotone") {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 20000; ++i) {
        Interval x = random_interval(rng), y = random_interval(rng);
        Interval X{std::nextafter(x.lo, -INFINITY) - std::abs(x.lo) * 1e-3, x.hi + std::abs(x.hi) * 1e-3};
        Interval Y{y.lo - std::abs(y.lo) * 1e-3, y.hi + std::abs(y.hi) * 1e-3};
        CHECK((x + y).subset_of(X + Y));
        CHECK((x - y).subset_of(X - Y));
        CHECK((x * y).subset_of(X * Y));
        if (!Y.contains_zero()) CHECK((x / y).subset_of(X / Y));
        ComplexBox a{x, y}, A{X, Y};
        CHECK((a * a).subset_of(A * A));
        if (!A.re.contains_zero()) CHECK((a / a).subset_of(A / A));
    }
}

TEST_CASE("hex doubles round-trip bit exactly") {
    std::mt19937_64 rng(15);
    for (int i = 0; i < 5000; ++i) {
        double x = std::bit_cast<double>(rng());
        if (!std::isfinite(x)) continue;
        CHECK(std::bit_cast<unsigned long long>(parse_hex_double(hex_double(x))) == std::bit_cast<unsigned long long>(x));
    }
    CHECK_THROWS(parse_hex_double("1.5"));
    CHECK_THROWS(parse_hex_double("0x1.8p+0 "));
    CHECK_THROWS(parse_hex_double("0xzz"));
    CHECK_THROWS(parse_hex_double("inf"));
}

TEST_CASE("figure-eight boxes are tight and contain the solution") {
    auto tri = fixtures::figure_eight();
    auto sys = assemble(tri);
    ShapeAssignment s = solve(sys);
    BoxAssignment b = krawczyk_verify(sys, s);
    CHECK(b.unique);
    REQUIRE(b.boxes.size() == 2);
    const cplx omega(0.5, std::sqrt(3.0) / 2);
    for (int t = 0; t < 2; ++t) {
        CHECK(b.boxes[t].rad() <= 1e-10);
        CHECK_FALSE(b.boxes[t].meets_real_axis());
        CHECK(b.boxes[t].re.contains(s.z[t].real()));
        CHECK(b.boxes[t].im.contains(s.z[t].imag()));
        // The exact shape is exp(i pi / 3); its double rounding sits within an ulp.
        CHECK(std::abs(b.boxes[t].re.mid() - omega.real()) < 1e-12);
        CHECK(std::abs(b.boxes[t].im.mid() - omega.imag()) < 1e-12);
        // Canonical squares: equal power-of-two widths.
        double w = b.boxes[t].re.hi - b.boxes[t].re.lo;
        CHECK(w == b.boxes[t].im.hi - b.boxes[t].im.lo);
        int e = 0;
        CHECK(std::frexp(w, &e) == 0.5);
    }
    CHECK(krawczyk_contracts(sys, b.boxes));
    CHECK(log_rows_hold(sys, b.boxes));
    Interval v = interval_volume(b.boxes);
    CHECK(v.contains(kFig8Volume));
    CHECK(v.hi - v.lo < 1e-9);
}

TEST_CASE("a poor approximation is refused") {
    auto tri = fixtures::figure_eight();
    auto sys = assemble(tri);
    ShapeAssignment s = solve(sys);
    s.z[0] += cplx(1e-2, 0);
    CHECK_THROWS_AS(krawczyk_verify(sys, s), Error);
    try {
        krawczyk_verify(sys, s);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::VerificationFailed);
    }
}

TEST_CASE("Krawczyk rejects boxes that do not hold a solution") {
    auto tri = fixtures::figure_eight();
    auto sys = assemble(tri);
    ShapeAssignment s = solve(sys);
    BoxAssignment b = krawczyk_verify(sys, s);
    std::vector<ComplexBox> shifted = b.boxes;
    for (auto& x : shifted) x = x + ComplexBox::point(1e-6, 0);
    CHECK_FALSE(krawczyk_contracts(sys, shifted));
    CHECK_FALSE(log_rows_hold(sys, shifted));
}

TEST_CASE("census of short bundles certifies geometric") {
    int count = 0;
    for (int len = 2; len <= 5; ++len)
        for (int bits = 0; bits < (1 << len); ++bits) {
            std::string w;
            for (int k = 0; k < len; ++k) w += (bits >> k & 1) ? 'R' : 'L';
            if (w.find('R') == std::string::npos || w.find('L') == std::string::npos) continue;
            auto g = ptorus_bundle(w);
            Certificate c = certify_geometric(g.tri);
            CHECK_MESSAGE(check_certificate(c).ok, w);
            CHECK(c.verdict == CertVerdict::GeometricCertified);
            for (const auto& b : c.boxes[0].boxes) CHECK(b.im.lo > 0);
            ++count;
        }
    CHECK(count == 2 + 6 + 14 + 30);
}

TEST_CASE("flat tetrahedra are never certified") {
    // RRL after one move has a solution with an exactly real shape.
    bool tried = false;
    auto g = ptorus_bundle("RRL");
    IdealTriangulation tri = g.tri.is_oriented() ? g.tri : oriented_copy(g.tri);
    ShapeAssignment s = solve(assemble(tri));
    for (int target = 0; target < 4 * tri.tet_count() && !tried; ++target) {
        PachnerResult r;
        try {
            r = apply_move(tri, {MoveKind::TwoThree, target});
        } catch (const Error&) {
            continue;
        }
        ShapeAssignment t = transport(s, r.move, tri, r.tri);
        bool flat = false;
        for (cplx z : t.z) flat |= std::abs(z.imag()) < 1e-12;
        if (!flat) continue;
        tried = true;
        try {
            certify_geometric(r.tri, t);
            FAIL("flat solution was certified");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::NotCertified);
        }
        SearchBudget b;
        b.initial = t;
        try {
            certify_nongeometric(r.tri, b, 1);
            FAIL("flat solution was certified");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::TransportDegenerate);
        }
    }
    CHECK(tried);
}

TEST_CASE("tampered geometric certificates fail the check") {
    Certificate c = certify_geometric(fixtures::figure_eight());
    REQUIRE(check_certificate(c).ok);

    Certificate flipped = c;
    flipped.verdict = CertVerdict::NonGeometricCertified;
    CheckReport r = check_certificate(flipped);
    CHECK_FALSE(r.ok);
    CHECK(r.reason.find("sign condition") != std::string::npos);

    Certificate widened = c;
    widened.boxes[0].boxes[0].re.hi = std::nextafter(widened.boxes[0].boxes[0].re.hi, INFINITY);
    CHECK_FALSE(check_certificate(widened).ok);

    Certificate lowered = c;
    lowered.boxes[0].boxes[1].im = Interval(-1, 1);
    CHECK_FALSE(check_certificate(lowered).ok);

    Certificate missing = c;
    missing.boxes[0].unique = false;
    CHECK_FALSE(check_certificate(missing).ok);
}

TEST_CASE("certificates round-trip through JSON bit exactly") {
    Certificate c = certify_geometric(ptorus_bundle("RRLL").tri);
    std::string s = serialize(c);
    Certificate back = deserialize(s);
    CHECK(serialize(back) == s);
    CHECK(check_certificate(back).ok);
    REQUIRE(back.boxes[0].boxes.size() == c.boxes[0].boxes.size());
    for (size_t t = 0; t < c.boxes[0].boxes.size(); ++t) CHECK(back.boxes[0].boxes[t] == c.boxes[0].boxes[t]);

    CHECK_THROWS(deserialize("{}"));
    CHECK_THROWS(deserialize("not json"));
    std::string bad = s;
    auto at = bad.find("0x");
    REQUIRE(at != std::string::npos);
    bad.replace(at, 2, "1x");
    CHECK_THROWS(deserialize(bad));
}

TEST_CASE("already geometric input is not non-geometric") {
    try {
        certify_nongeometric(fixtures::figure_eight(), SearchBudget{}, 3);
        FAIL("expected NotNonGeometric");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotNonGeometric);
    }
}

TEST_CASE("non-geometric certificate checks") {
    const Certificate& c = nongeometric_cert();
    CHECK(c.verdict == CertVerdict::NonGeometricCertified);
    CHECK(c.steps.size() == c.moves.size() + 1);
    CHECK(c.boxes.size() == c.steps.size());
    CheckReport r = check_certificate(c);
    CHECK_MESSAGE(r.ok, r.reason);
    bool negative = false;
    for (const auto& b : c.boxes[0].boxes) negative |= b.im.hi < 0;
    CHECK(negative);
    for (const auto& step : c.boxes)
        for (const auto& b : step.boxes) CHECK_FALSE(b.meets_real_axis());
    for (const auto& b : c.boxes.back().boxes) CHECK(b.im.lo > 0);
    CHECK(check_certificate(deserialize(serialize(c))).ok);
}

TEST_CASE("non-geometric search is deterministic in the seed") {
    Carried ex = nongeometric_example();
    SearchBudget b;
    b.initial = ex.shapes;
    Certificate again = certify_nongeometric(ex.tri, b, 7);
    CHECK(serialize(again) == serialize(nongeometric_cert()));
}

TEST_CASE("volume enclosures agree along a Pachner path") {
    const Certificate& c = nongeometric_cert();
    Interval last = interval_volume(c.boxes.back().boxes);
    CHECK(last.bounded());
    for (const auto& step : c.boxes) {
        Interval v = interval_volume(step.boxes);
        CHECK(v.lo <= last.hi);
        CHECK(last.lo <= v.hi);
    }
}

TEST_CASE("backward transport encloses the floating forward transport") {
    Carried ex = nongeometric_example();
    SearchBudget budget;
    budget.initial = ex.shapes;
    GeometricPath gp = find_geometric_path(ex.tri, budget, 7);
    const PachnerPath& p = gp.path;
    std::vector<ComplexBox> boxes = gp.final_step.boxes[0].boxes;
    for (int i = int(p.moves.size()) - 1; i >= 0; --i) {
        boxes = transport_back(p.steps[i], p.moves[i], boxes);
        REQUIRE(boxes.size() == p.shapes[i].z.size());
        for (size_t t = 0; t < boxes.size(); ++t) {
            // The floating shapes drift by rounding only, far below the box radius.
            cplx z = p.shapes[i].z[t];
            double slack = 1e-9;
            CHECK(boxes[t].re.lo - slack <= z.real());
            CHECK(z.real() <= boxes[t].re.hi + slack);
            CHECK(boxes[t].im.lo - slack <= z.imag());
            CHECK(z.imag() <= boxes[t].im.hi + slack);
        }
    }
}

TEST_CASE("single-bit tampering of a non-geometric certificate is detected") {
    const Certificate& c = nongeometric_cert();
    std::mt19937_64 rng(16);
    int rejected = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Certificate t = c;
        size_t step = rng() % t.boxes.size();
        auto& b = t.boxes[step].boxes[rng() % t.boxes[step].boxes.size()];
        double* slots[4] = {&b.re.lo, &b.re.hi, &b.im.lo, &b.im.hi};
        double& x = *slots[rng() % 4];
        x = std::bit_cast<double>(std::bit_cast<unsigned long long>(x) ^ (1ULL << (rng() % 64)));
        rejected += !check_certificate(t).ok;
    }
    CHECK(rejected == 100);
}

TEST_CASE("broken move chains are reported with their step") {
    Certificate c = nongeometric_cert();
    REQUIRE(c.moves.size() >= 2);
    // Swap two tetrahedron labels: same size and orientation, other gluings.
    const IdealTriangulation& old = c.steps[2];
    const int n = old.tet_count();
    auto swap01 = [](int t) { return t == 0 ? 1 : t == 1 ? 0 : t; };
    GluingData g(n);
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            FaceGluing fg = old.gluing(t, f);
            fg.tet = swap01(fg.tet);
            g[swap01(t)][f] = fg;
        }
    c.steps[2] = IdealTriangulation::from_gluing_data(g);
    CheckReport r = check_certificate(c);
    CHECK_FALSE(r.ok);
    CHECK_MESSAGE(r.reason.find("move mismatch at step 1") != std::string::npos, r.reason);
    CHECK(r.step == 1);

    Certificate truncated = nongeometric_cert();
    truncated.moves.pop_back();
    CHECK_FALSE(check_certificate(truncated).ok);
}
