#include "veerkit/interval.hpp"

#include <algorithm>
#include <bit>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "veerkit/error.hpp"

namespace veerkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this the fma residual of a product or quotient may itself underflow,
// so we just step outward.
constexpr double kTiny = 0x1p-960;

double down(double x) { return std::nextafter(x, -kInf); }
double up(double x) { return std::nextafter(x, kInf); }

// Overflowed results: exact value is beyond DBL_MAX in the direction of s
// unless an input was already infinite.
double overflow_down(double s, bool inf_input) {
    if (std::isnan(s) || s < 0 || inf_input) return s;
    return DBL_MAX;
}
double overflow_up(double s, bool inf_input) {
    if (std::isnan(s) || s > 0 || inf_input) return s;
    return -DBL_MAX;
}

// Sign of (a + b) - fl(a + b), by TwoSum.
int sum_error_sign(double a, double b, double s) {
    double bb = s - a;
    double e = (a - (s - bb)) + (b - bb);
    return (e > 0) - (e < 0);
}

// Sign of a*b - p for p = fl(a*b); 2 means unknown (underflow range).
int prod_error_sign(double a, double b, double p) {
    if (std::abs(p) < kTiny) return 2;
    double e = std::fma(a, b, -p);
    return (e > 0) - (e < 0);
}

// Sign of a/b - q.
int quot_error_sign(double a, double b, double q) {
    if (std::abs(q) < kTiny || std::abs(a) < kTiny) return 2;
    double r = std::fma(-q, b, a);  // exact: a - q*b
    int sr = (r > 0) - (r < 0);
    return b > 0 ? sr : -sr;
}

double widen_down(double x, int ulps) {
    for (int i = 0; i < ulps; ++i) x = down(x);
    return x;
}
double widen_up(double x, int ulps) {
    for (int i = 0; i < ulps; ++i) x = up(x);
    return x;
}

constexpr int kLibmUlps = 4;

}  // namespace

double add_down(double a, double b) {
    double s = a + b;
    if (!std::isfinite(s)) return overflow_down(s, std::isinf(a) || std::isinf(b));
    return sum_error_sign(a, b, s) < 0 ? down(s) : s;
}

double add_up(double a, double b) {
    double s = a + b;
    if (!std::isfinite(s)) return overflow_up(s, std::isinf(a) || std::isinf(b));
    return sum_error_sign(a, b, s) > 0 ? up(s) : s;
}

double sub_down(double a, double b) { return add_down(a, -b); }
double sub_up(double a, double b) { return add_up(a, -b); }

double mul_down(double a, double b) {
    if (a == 0 || b == 0) return (std::isnan(a) || std::isnan(b)) ? NAN : 0.0;
    double p = a * b;
    if (!std::isfinite(p)) return overflow_down(p, std::isinf(a) || std::isinf(b));
    int e = prod_error_sign(a, b, p);
    return (e < 0 || e == 2) ? down(p) : p;
}

double mul_up(double a, double b) {
    if (a == 0 || b == 0) return (std::isnan(a) || std::isnan(b)) ? NAN : 0.0;
    double p = a * b;
    if (!std::isfinite(p)) return overflow_up(p, std::isinf(a) || std::isinf(b));
    int e = prod_error_sign(a, b, p);
    return (e > 0 || e == 2) ? up(p) : p;
}

double div_down(double a, double b) {
    if (a == 0 && b != 0) return std::isnan(b) ? NAN : 0.0;
    double q = a / b;
    if (!std::isfinite(q)) return overflow_down(q, std::isinf(a) || b == 0);
    int e = quot_error_sign(a, b, q);
    return (e < 0 || e == 2) ? down(q) : q;
}

double div_up(double a, double b) {
    if (a == 0 && b != 0) return std::isnan(b) ? NAN : 0.0;
    double q = a / b;
    if (!std::isfinite(q)) return overflow_up(q, std::isinf(a) || b == 0);
    int e = quot_error_sign(a, b, q);
    return (e > 0 || e == 2) ? up(q) : q;
}

double sqrt_down(double a) {
    if (!(a >= 0)) return NAN;
    if (a == 0 || std::isinf(a)) return a;
    double s = std::sqrt(a);
    if (a < kTiny) return std::max(0.0, down(s));
    return std::fma(-s, s, a) < 0 ? down(s) : s;
}

double sqrt_up(double a) {
    if (!(a >= 0)) return NAN;
    if (a == 0 || std::isinf(a)) return a;
    double s = std::sqrt(a);
    if (a < kTiny) return up(s);
    return std::fma(-s, s, a) > 0 ? up(s) : s;
}

Interval Interval::entire() { return {-kInf, kInf}; }

Interval Interval::pi() {
    // The double nearest pi lies below pi.
    constexpr double p = 3.141592653589793;
    return {p, up(p)};
}

bool Interval::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

double Interval::mid() const {
    if (!bounded()) return lo == -kInf && hi == kInf ? 0.0 : (lo == -kInf ? -DBL_MAX : DBL_MAX);
    return 0.5 * lo + 0.5 * hi;
}

double Interval::rad() const {
    if (!bounded()) return kInf;
    double m = mid();
    return std::max(sub_up(hi, m), sub_up(m, lo));
}

double Interval::mag() const { return std::max(std::abs(lo), std::abs(hi)); }

Interval operator+(const Interval& a, const Interval& b) { return {add_down(a.lo, b.lo), add_up(a.hi, b.hi)}; }

Interval operator-(const Interval& a, const Interval& b) { return {sub_down(a.lo, b.hi), sub_up(a.hi, b.lo)}; }

Interval operator*(const Interval& a, const Interval& b) {
    if (!a.bounded() || !b.bounded()) return Interval::entire();
    const double c[4][2] = {{a.lo, b.lo}, {a.lo, b.hi}, {a.hi, b.lo}, {a.hi, b.hi}};
    double lo = kInf, hi = -kInf;
    for (const auto& p : c) {
        lo = std::min(lo, mul_down(p[0], p[1]));
        hi = std::max(hi, mul_up(p[0], p[1]));
    }
    return {lo, hi};
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero() || !b.valid() || !a.bounded()) return Interval::entire();
    const double c[4][2] = {{a.lo, b.lo}, {a.lo, b.hi}, {a.hi, b.lo}, {a.hi, b.hi}};
    double lo = kInf, hi = -kInf;
    for (const auto& p : c) {
        lo = std::min(lo, div_down(p[0], p[1]));
        hi = std::max(hi, div_up(p[0], p[1]));
    }
    return {lo, hi};
}

Interval sqr(const Interval& a) {
    if (!a.bounded()) return {0.0, kInf};
    if (a.lo >= 0) return {mul_down(a.lo, a.lo), mul_up(a.hi, a.hi)};
    if (a.hi <= 0) return {mul_down(a.hi, a.hi), mul_up(a.lo, a.lo)};
    double m = std::max(-a.lo, a.hi);
    return {0.0, mul_up(m, m)};
}

Interval sqrt(const Interval& a) {
    if (a.hi < 0) return {NAN, NAN};
    return {sqrt_down(std::max(a.lo, 0.0)), sqrt_up(a.hi)};
}

Interval hull(const Interval& a, const Interval& b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

Interval log(const Interval& a) {
    if (!(a.hi > 0)) return {NAN, NAN};
    double lo = a.lo > 0 ? widen_down(std::log(a.lo), kLibmUlps) : -kInf;
    double hi = std::isinf(a.hi) ? kInf : widen_up(std::log(a.hi), kLibmUlps);
    return {lo, hi};
}

double ComplexBox::rad() const {
    double r = re.rad(), i = im.rad();
    return sqrt_up(add_up(mul_up(r, r), mul_up(i, i)));
}

ComplexBox operator+(const ComplexBox& a, const ComplexBox& b) { return {a.re + b.re, a.im + b.im}; }
ComplexBox operator-(const ComplexBox& a, const ComplexBox& b) { return {a.re - b.re, a.im - b.im}; }

ComplexBox operator*(const ComplexBox& a, const ComplexBox& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ComplexBox conj(const ComplexBox& a) { return {a.re, -a.im}; }

Interval norm(const ComplexBox& a) { return sqr(a.re) + sqr(a.im); }

Interval abs(const ComplexBox& a) { return sqrt(norm(a)); }

ComplexBox operator/(const ComplexBox& a, const ComplexBox& b) {
    Interval n = norm(b);
    if (!(n.lo > 0)) return {Interval::entire(), Interval::entire()};
    ComplexBox num = a * conj(b);
    return {num.re / n, num.im / n};
}

Interval arg(const ComplexBox& a) {
    if (!a.bounded() || (a.re.lo <= 0 && a.im.contains_zero())) return Interval::entire();
    double lo = kInf, hi = -kInf;
    for (double x : {a.re.lo, a.re.hi})
        for (double y : {a.im.lo, a.im.hi}) {
            double t = std::atan2(y, x);
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
    return {widen_down(lo, kLibmUlps), widen_up(hi, kLibmUlps)};
}

ComplexBox hull(const ComplexBox& a, const ComplexBox& b) { return {hull(a.re, b.re), hull(a.im, b.im)}; }

bool operator==(const ComplexBox& a, const ComplexBox& b) {
    auto bits = [](double x) { return std::bit_cast<unsigned long long>(x); };
    return bits(a.re.lo) == bits(b.re.lo) && bits(a.re.hi) == bits(b.re.hi) && bits(a.im.lo) == bits(b.im.lo) &&
           bits(a.im.hi) == bits(b.im.hi);
}

std::string hex_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

double parse_hex_double(const std::string& s) {
    size_t k = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (s.compare(k, 2, "0x") != 0) throw Error(ErrorKind::InvalidInput, "not a hex float literal: " + s);
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v))
        throw Error(ErrorKind::InvalidInput, "not a hex float literal: " + s);
    return v;
}

}  // namespace veerkit
