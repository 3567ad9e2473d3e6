#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace veerkit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Q(alpha) for a real root alpha of an integer polynomial, singled out by a
// rational isolating interval.
class NumberField {
public:
    // min_poly holds c0..cd.  Throws InvalidInput unless the polynomial is
    // squarefree with exactly one root in (lo, hi), and for degree <= 3 has no
    // rational root.
    NumberField(std::vector<BigInt> min_poly, Rational lo, Rational hi);

    int degree() const { return int(poly_.size()) - 1; }
    const std::vector<BigInt>& min_poly() const { return poly_; }
    // Interval as given on input.
    const std::pair<Rational, Rational>& input_interval() const { return input_; }
    // Isolating interval with dyadic endpoints of width <= 2^-bits.
    std::pair<Rational, Rational> interval(int bits) const;
    double approx() const { return approx_; }

    bool same_as(const NumberField& o) const;

private:
    std::vector<BigInt> poly_;
    std::pair<Rational, Rational> input_;
    std::pair<Rational, Rational> fine_;  // width <= 2^-kFineBits
    double approx_ = 0;

    static constexpr int kFineBits = 96;
    int sign_at(const Rational& x) const;
    void refine(std::pair<Rational, Rational>& iv, int bits) const;
};

using Field = std::shared_ptr<const NumberField>;

Field make_field(std::vector<BigInt> min_poly, Rational lo, Rational hi);
// Q itself, as Q(0).
Field rational_field();
// Q(sqrt(d)) style quadratic field of the larger root of x^2 - t x + 1 (t > 2).
Field quadratic_unit_field(long long trace);

class AlgebraicReal {
public:
    AlgebraicReal() = default;
    AlgebraicReal(Field f, const Rational& q);
    AlgebraicReal(Field f, std::vector<Rational> coeffs);
    static AlgebraicReal generator(Field f);

    const Field& field() const { return field_; }
    const std::vector<Rational>& coeffs() const { return c_; }

    AlgebraicReal operator+(const AlgebraicReal& o) const;
    AlgebraicReal operator-(const AlgebraicReal& o) const;
    AlgebraicReal operator*(const AlgebraicReal& o) const;
    AlgebraicReal operator/(const AlgebraicReal& o) const;
    AlgebraicReal operator-() const;
    AlgebraicReal& operator+=(const AlgebraicReal& o) { return *this = *this + o; }
    AlgebraicReal& operator-=(const AlgebraicReal& o) { return *this = *this - o; }
    AlgebraicReal& operator*=(const AlgebraicReal& o) { return *this = *this * o; }
    AlgebraicReal operator*(const Rational& q) const;
    AlgebraicReal inverse() const;

    bool is_zero() const;
    // Exact sign: -1, 0 or +1.
    int sign() const;
    double to_double() const;
    // Coefficient vector in the power basis, e.g. "1/2 + 3*a".
    std::string to_string() const;

    // Structural (coefficient) equality, which is value equality in a field.
    bool operator==(const AlgebraicReal& o) const { return c_ == o.c_; }
    bool operator!=(const AlgebraicReal& o) const { return !(*this == o); }
    // Order by value.
    bool operator<(const AlgebraicReal& o) const { return (*this - o).sign() < 0; }
    bool operator>(const AlgebraicReal& o) const { return (*this - o).sign() > 0; }
    bool operator<=(const AlgebraicReal& o) const { return (*this - o).sign() <= 0; }
    bool operator>=(const AlgebraicReal& o) const { return (*this - o).sign() >= 0; }

private:
    Field field_;
    std::vector<Rational> c_;

    void check(const AlgebraicReal& o) const;
    int sign_refined() const;
};

// Lexicographic order on coefficient vectors; only for use as a map key.
struct CoeffLess {
    bool operator()(const AlgebraicReal& a, const AlgebraicReal& b) const;
};

AlgebraicReal abs(const AlgebraicReal& a);

}  // namespace veerkit
