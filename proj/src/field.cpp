#include "veerkit/field.hpp"

#include <cmath>
#include <sstream>

#include "veerkit/error.hpp"

namespace veerkit {

namespace {

using Poly = std::vector<Rational>;  // low degree first

void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly to_poly(const std::vector<BigInt>& c) {
    Poly p(c.begin(), c.end());
    trim(p);
    return p;
}

Rational eval(const Poly& p, const Rational& x) {
    Rational acc = 0;
    for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

Poly derivative(const Poly& p) {
    Poly d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * int(i));
    trim(d);
    return d;
}

// Remainder of a by b (b nonzero).
Poly poly_rem(Poly a, const Poly& b) {
    trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        Rational q = a.back() / b.back();
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
        a.pop_back();
        trim(a);
    }
    return a;
}

// Quotient and remainder.
std::pair<Poly, Poly> poly_divmod(Poly a, const Poly& b) {
    trim(a);
    Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
    while (a.size() >= b.size() && !a.empty()) {
        Rational c = a.back() / b.back();
        size_t shift = a.size() - b.size();
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
        a.pop_back();
        trim(a);
    }
    trim(q);
    return {q, a};
}

Poly poly_sub(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0)
            for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

int sgn(const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

// Quick conversion; the exact path only when the parts overflow a double.
double to_double(const Rational& q) {
    const BigInt& n = boost::multiprecision::numerator(q);
    const BigInt& d = boost::multiprecision::denominator(q);
    if (boost::multiprecision::msb(boost::multiprecision::abs(n) + 1) < 1000 && boost::multiprecision::msb(d) < 1000)
        return n.convert_to<double>() / d.convert_to<double>();
    return q.convert_to<double>();
}

// Sign changes of the Sturm chain at x.
int sturm_variations(const std::vector<Poly>& chain, const Rational& x) {
    int changes = 0, last = 0;
    for (const Poly& p : chain) {
        int s = sgn(eval(p, x));
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

std::vector<Poly> sturm_chain(const Poly& f) {
    std::vector<Poly> chain = {f, derivative(f)};
    while (!chain.back().empty() && chain.back().size() > 1) {
        Poly r = poly_rem(chain[chain.size() - 2], chain.back());
        if (r.empty()) break;
        for (auto& c : r) c = -c;
        chain.push_back(r);
    }
    return chain;
}

Poly poly_gcd(Poly a, Poly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = poly_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

bool is_perfect_square(const BigInt& n) {
    if (n < 0) return false;
    BigInt r = boost::multiprecision::sqrt(n);
    return r * r == n;
}

std::vector<BigInt> small_divisors(BigInt n) {
    if (n < 0) n = -n;
    std::vector<BigInt> out;
    if (n > BigInt(1000000000000LL)) return out;
    long long m = n.convert_to<long long>();
    for (long long d = 1; d * d <= m; ++d)
        if (m % d == 0) {
            out.push_back(d);
            if (d * d != m) out.push_back(m / d);
        }
    return out;
}

}  // namespace

NumberField::NumberField(std::vector<BigInt> min_poly, Rational lo, Rational hi)
    : poly_(std::move(min_poly)), input_(lo, hi) {
    while (!poly_.empty() && poly_.back() == 0) poly_.pop_back();
    if (poly_.size() < 2) throw Error(ErrorKind::InvalidInput, "minimal polynomial must have degree >= 1");
    if (!(lo < hi)) throw Error(ErrorKind::InvalidInput, "root interval must have lo < hi");
    Poly f = to_poly(poly_);
    if (degree() == 1) {
        Rational root = -f[0] / f[1];
        if (!(lo < root && root < hi)) throw Error(ErrorKind::InvalidInput, "root not inside the interval");
        fine_ = {root, root};
        approx_ = root.convert_to<double>();
        return;
    }
    if (poly_gcd(f, derivative(f)).size() > 1) throw Error(ErrorKind::InvalidInput, "minimal polynomial is not squarefree");
    if (sign_at(lo) == 0 || sign_at(hi) == 0) throw Error(ErrorKind::InvalidInput, "interval endpoint is a root");
    auto chain = sturm_chain(f);
    if (sturm_variations(chain, lo) - sturm_variations(chain, hi) != 1)
        throw Error(ErrorKind::InvalidInput, "interval does not isolate exactly one root");
    if (degree() == 2) {
        BigInt disc = poly_[1] * poly_[1] - 4 * poly_[0] * poly_[2];
        if (is_perfect_square(disc)) throw Error(ErrorKind::InvalidInput, "quadratic minimal polynomial is reducible");
    } else if (degree() == 3) {
        auto ps = small_divisors(poly_[0]), qs = small_divisors(poly_[3]);
        for (const BigInt& p : ps)
            for (const BigInt& q : qs)
                for (int s : {1, -1})
                    if (eval(f, Rational(s * p, q)) == 0)
                        throw Error(ErrorKind::InvalidInput, "cubic minimal polynomial has a rational root");
        if (poly_[0] == 0) throw Error(ErrorKind::InvalidInput, "cubic minimal polynomial has root 0");
    }
    fine_ = input_;
    refine(fine_, kFineBits);
    approx_ = ((fine_.first + fine_.second) / 2).convert_to<double>();
}

int NumberField::sign_at(const Rational& x) const {
    Rational acc = 0;
    for (size_t i = poly_.size(); i-- > 0;) acc = acc * x + Rational(poly_[i]);
    return sgn(acc);
}

void NumberField::refine(std::pair<Rational, Rational>& iv, int bits) const {
    Rational target = Rational(1) / Rational(BigInt(1) << bits);
    int slo = sign_at(iv.first);
    while (iv.second - iv.first > target) {
        Rational mid = (iv.first + iv.second) / 2;
        int s = sign_at(mid);
        if (s == 0) {
            iv = {mid, mid};
            return;
        }
        if (s == slo) iv.first = mid;
        else iv.second = mid;
    }
}

std::pair<Rational, Rational> NumberField::interval(int bits) const {
    auto iv = fine_;
    if (bits > kFineBits && iv.first != iv.second) refine(iv, bits);
    return iv;
}

bool NumberField::same_as(const NumberField& o) const {
    if (this == &o) return true;
    if (poly_ != o.poly_) return false;
    // Same polynomial: the isolating intervals must pick the same root.
    return !(fine_.second < o.fine_.first || o.fine_.second < fine_.first);
}

Field make_field(std::vector<BigInt> min_poly, Rational lo, Rational hi) {
    return std::make_shared<const NumberField>(std::move(min_poly), lo, hi);
}

Field rational_field() {
    static const Field q = make_field({0, 1}, -1, 1);
    return q;
}

Field quadratic_unit_field(long long trace) {
    if (trace <= 2) throw Error(ErrorKind::InvalidInput, "trace must exceed 2");
    return make_field({1, -trace, 1}, trace - 1, trace);
}

// ---------------------------------------------------------------------------

AlgebraicReal::AlgebraicReal(Field f, const Rational& q) : field_(std::move(f)), c_(field_->degree(), Rational(0)) {
    c_[0] = q;
}

AlgebraicReal::AlgebraicReal(Field f, std::vector<Rational> coeffs) : field_(std::move(f)), c_(std::move(coeffs)) {
    const size_t d = field_->degree();
    if (c_.size() > d) {
        Poly p = poly_rem(c_, to_poly(field_->min_poly()));
        c_ = p;
    }
    c_.resize(d, Rational(0));
}

AlgebraicReal AlgebraicReal::generator(Field f) {
    if (f->degree() == 1) {
        Rational root = f->interval(0).first;
        return AlgebraicReal(f, root);
    }
    std::vector<Rational> c(f->degree(), Rational(0));
    c[1] = 1;
    return AlgebraicReal(std::move(f), std::move(c));
}

void AlgebraicReal::check(const AlgebraicReal& o) const {
    if (!field_ || !o.field_) throw Error(ErrorKind::InvalidInput, "uninitialized field element");
    if (field_ != o.field_ && !field_->same_as(*o.field_))
        throw Error(ErrorKind::InvalidInput, "field elements from different fields");
}

AlgebraicReal AlgebraicReal::operator+(const AlgebraicReal& o) const {
    check(o);
    AlgebraicReal r = *this;
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
    return r;
}

AlgebraicReal AlgebraicReal::operator-(const AlgebraicReal& o) const {
    check(o);
    AlgebraicReal r = *this;
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
    return r;
}

AlgebraicReal AlgebraicReal::operator-() const {
    AlgebraicReal r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

AlgebraicReal AlgebraicReal::operator*(const Rational& q) const {
    AlgebraicReal r = *this;
    for (auto& c : r.c_) c *= q;
    return r;
}

AlgebraicReal AlgebraicReal::operator*(const AlgebraicReal& o) const {
    check(o);
    const size_t d = c_.size();
    if (d == 1) return AlgebraicReal(field_, c_[0] * o.c_[0]);
    Poly prod(2 * d - 1);
    for (size_t i = 0; i < d; ++i)
        if (c_[i] != 0)
            for (size_t j = 0; j < d; ++j)
                if (o.c_[j] != 0) prod[i + j] += c_[i] * o.c_[j];
    const auto& f = field_->min_poly();
    // Reduce using x^d = -(c0 + ... + c_{d-1} x^{d-1}) / c_d.
    const bool monic = f[d] == 1;
    for (size_t k = prod.size(); k-- > d;) {
        if (prod[k] == 0) continue;
        Rational q = monic ? prod[k] : prod[k] / Rational(f[d]);
        for (size_t i = 0; i < d; ++i) prod[k - d + i] -= q * Rational(f[i]);
        prod[k] = 0;
    }
    prod.resize(d);
    AlgebraicReal r;
    r.field_ = field_;
    r.c_ = std::move(prod);
    return r;
}

AlgebraicReal AlgebraicReal::inverse() const {
    if (is_zero()) throw Error(ErrorKind::InvalidInput, "division by zero in number field");
    if (c_.size() == 1) return AlgebraicReal(field_, 1 / c_[0]);
    // Extended Euclid: s*g + t*f = 1.
    Poly f = to_poly(field_->min_poly());
    Poly g = c_;
    trim(g);
    Poly r0 = f, r1 = g, s0 = {}, s1 = {Rational(1)};
    while (!r1.empty() && r1.size() > 1) {
        auto [q, r] = poly_divmod(r0, r1);
        Poly s = poly_sub(s0, poly_mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    if (r1.empty()) throw Error(ErrorKind::InvalidInput, "minimal polynomial is reducible");
    for (auto& c : s1) c /= r1[0];
    return AlgebraicReal(field_, s1);
}

AlgebraicReal AlgebraicReal::operator/(const AlgebraicReal& o) const { return *this * o.inverse(); }

bool AlgebraicReal::is_zero() const {
    for (const auto& c : c_)
        if (c != 0) return false;
    return true;
}

double AlgebraicReal::to_double() const {
    const double a = field_->approx();
    double acc = 0;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * a + veerkit::to_double(c_[i]);
    return acc;
}

int AlgebraicReal::sign() const {
    if (c_.size() == 1) return sgn(c_[0]);
    if (is_zero()) return 0;
    // Floating estimate with a generous error bound.
    const double a = field_->approx();
    double value = 0, magnitude = 0, power = 1;
    bool finite = std::isfinite(a);
    for (const auto& c : c_) {
        double cd = veerkit::to_double(c);
        if (!std::isfinite(cd)) finite = false;
        value += cd * power;
        magnitude += std::fabs(cd * power);
        power *= a;
    }
    if (finite && std::isfinite(magnitude) && magnitude > 0 && magnitude < 1e300 && magnitude > 1e-280 &&
        std::fabs(value) > 1e-10 * magnitude)
        return value > 0 ? 1 : -1;
    return sign_refined();
}

int AlgebraicReal::sign_refined() const {
    for (int bits = 96; bits <= 1 << 14; bits *= 2) {
        auto [lo, hi] = field_->interval(bits);
        Rational vlo = c_.back(), vhi = c_.back();
        for (size_t i = c_.size() - 1; i-- > 0;) {
            Rational p[4] = {vlo * lo, vlo * hi, vhi * lo, vhi * hi};
            Rational mn = p[0], mx = p[0];
            for (const auto& x : p) {
                if (x < mn) mn = x;
                if (x > mx) mx = x;
            }
            vlo = mn + c_[i];
            vhi = mx + c_[i];
        }
        if (vlo > 0) return 1;
        if (vhi < 0) return -1;
    }
    throw Error(ErrorKind::InvalidInput, "sign undetermined; is the minimal polynomial irreducible?");
}

std::string AlgebraicReal::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << c_[i];
        if (i == 1) os << "*a";
        if (i > 1) os << "*a^" << i;
    }
    if (first) os << "0";
    return os.str();
}

bool CoeffLess::operator()(const AlgebraicReal& a, const AlgebraicReal& b) const {
    const auto &x = a.coeffs(), &y = b.coeffs();
    if (x.size() != y.size()) return x.size() < y.size();
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i] != y[i]) return x[i] < y[i];
    return false;
}

AlgebraicReal abs(const AlgebraicReal& a) { return a.sign() < 0 ? -a : a; }

}  // namespace veerkit
