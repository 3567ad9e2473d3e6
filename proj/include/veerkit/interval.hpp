#pragma once

// Closed intervals of doubles with outward rounding done in software: each
// basic operation is computed round-to-nearest, its exact error recovered with
// TwoSum / fma, and the result stepped one ulp outward only when the error
// says it must be.  No rounding-mode switching, so nothing here is thread
// sensitive.

#include <string>

namespace veerkit {

// Bounds for the exact value of a op b.
double add_down(double a, double b);
double add_up(double a, double b);
double sub_down(double a, double b);
double sub_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);
double div_down(double a, double b);
double div_up(double a, double b);
double sqrt_down(double a);
double sqrt_up(double a);

struct Interval {
    double lo = 0, hi = 0;

    Interval() = default;
    Interval(double x) : lo(x), hi(x) {}
    Interval(double l, double h) : lo(l), hi(h) {}
    static Interval entire();
    static Interval pi();

    bool valid() const { return lo <= hi; }  // false for NaN endpoints
    bool bounded() const;
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains_zero() const { return lo <= 0 && 0 <= hi; }
    bool subset_of(const Interval& o) const { return o.lo <= lo && hi <= o.hi; }
    bool interior_of(const Interval& o) const { return o.lo < lo && hi < o.hi; }
    double mid() const;
    // Upper bound for max |x - mid()|.
    double rad() const;
    double mag() const;  // max |x|

    Interval operator-() const { return {-hi, -lo}; }
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
// Entire line when b contains zero.
Interval operator/(const Interval& a, const Interval& b);
Interval sqr(const Interval& a);
Interval sqrt(const Interval& a);
Interval hull(const Interval& a, const Interval& b);

// Logarithm and atan2 go through libm and are widened by a few ulps; they are
// only used for branch bookkeeping and volume bounds, never inside Krawczyk.
Interval log(const Interval& a);

struct ComplexBox {
    Interval re, im;

    ComplexBox() = default;
    ComplexBox(double x) : re(x), im(0.0) {}
    ComplexBox(Interval r, Interval i) : re(r), im(i) {}
    static ComplexBox point(double x, double y) { return {Interval(x), Interval(y)}; }

    bool valid() const { return re.valid() && im.valid(); }
    bool bounded() const { return re.bounded() && im.bounded(); }
    bool subset_of(const ComplexBox& o) const { return re.subset_of(o.re) && im.subset_of(o.im); }
    bool interior_of(const ComplexBox& o) const { return re.interior_of(o.re) && im.interior_of(o.im); }
    bool meets_real_axis() const { return im.contains_zero(); }
    double rad() const;  // bound on the distance from the midpoint

    ComplexBox operator-() const { return {-re, -im}; }
};

ComplexBox operator+(const ComplexBox& a, const ComplexBox& b);
ComplexBox operator-(const ComplexBox& a, const ComplexBox& b);
ComplexBox operator*(const ComplexBox& a, const ComplexBox& b);
// Unbounded when b meets zero.
ComplexBox operator/(const ComplexBox& a, const ComplexBox& b);
ComplexBox conj(const ComplexBox& a);
Interval norm(const ComplexBox& a);  // |a|^2
Interval abs(const ComplexBox& a);
// Argument in (-pi, pi]; entire when the box meets the closed negative real
// axis or zero.
Interval arg(const ComplexBox& a);
ComplexBox hull(const ComplexBox& a, const ComplexBox& b);
bool operator==(const ComplexBox& a, const ComplexBox& b);

// Lowercase hex float literal, e.g. "0x1.8p+1"; bit exact on round trip.
std::string hex_double(double x);
// Throws InvalidInput on anything that is not a complete hex float literal.
double parse_hex_double(const std::string& s);

}  // namespace veerkit
