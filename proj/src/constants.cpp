#include "polysob/constants.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <sstream>

namespace polysob {

namespace {

using Float50 = boost::multiprecision::cpp_bin_float_50;

bool is_integer(const Rational& r) { return denominator(r) == 1; }

bool is_half_integer(const Rational& r) { return denominator(r) == 2; }

Rational floor_rational(const Rational& r)
{
    BigInt q = numerator(r) / denominator(r);
    if (r < 0 && q * denominator(r) != numerator(r)) q -= 1;
    return Rational(q);
}

Rational rational_pow(const Rational& base, const BigInt& e)
{
    if (e == 0) return Rational(1);
    if (base == 0) {
        if (e < 0) throw std::domain_error("zero raised to a negative power");
        return Rational(0);
    }
    BigInt m = e < 0 ? BigInt(-e) : e;
    Rational acc(1);
    Rational b = base;
    while (m > 0) {
        if ((m & 1) != 0) acc *= b;
        b *= b;
        m >>= 1;
    }
    return e < 0 ? Rational(1) / acc : acc;
}

Float50 to_float50(const Rational& r)
{
    return Float50(numerator(r)) / Float50(denominator(r));
}

} // namespace

double to_double(const Rational& r) { return static_cast<double>(to_float50(r)); }

std::string to_string(const Rational& r)
{
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << "/" << denominator(r);
    return os.str();
}

BigInt factorial(int m)
{
    BigInt f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

DimensionPair DimensionPair::make(int n, int k)
{
    if (k < 1 || 2 * k >= n) {
        throw InvalidDimension("(n, k) = (" + std::to_string(n) + ", " + std::to_string(k) +
                               ") violates the standing assumption 2 <= 2k < n");
    }
    return DimensionPair{n, k};
}

BigInt DimensionPair::product_Pi() const
{
    BigInt p = 1;
    for (int j = -k; j <= k - 1; ++j) p *= (n + 2 * j);
    return p;
}

HalfIntegerGamma gamma_half_integer(const Rational& p)
{
    if (p <= 0) throw std::domain_error("gamma_half_integer: argument must be positive");
    if (is_integer(p)) {
        int m = static_cast<int>(numerator(p));
        return {Rational(factorial(m - 1)), false};
    }
    if (!is_half_integer(p)) throw std::domain_error("gamma_half_integer: argument must be a half-integer");
    // Γ(m + 1/2) = (2m)! / (4^m m!) √π
    int m = static_cast<int>((numerator(p) - 1) / 2);
    BigInt four_m = BigInt(1) << (2 * m);
    return {Rational(factorial(2 * m), four_m * factorial(m)), true};
}

// ---------------------------------------------------------------------------

SymbolicConstant::SymbolicConstant(Rational mantissa, BigInt Pi_base, Rational Pi_exponent, int half_pi_exponent)
    : mantissa_(std::move(mantissa)),
      Pi_base_(std::move(Pi_base)),
      Pi_exponent_(std::move(Pi_exponent)),
      half_pi_exponent_(half_pi_exponent)
{
    if (Pi_base_ <= 0) throw std::domain_error("SymbolicConstant: Π must be positive");
    normalize();
}

SymbolicConstant SymbolicConstant::pi_power(int half_pi_exponent)
{
    return SymbolicConstant(Rational(1), BigInt(1), Rational(0), half_pi_exponent);
}

void SymbolicConstant::normalize()
{
    if (Pi_exponent_ == 0 || Pi_base_ == 1) {
        Pi_exponent_ = 0;
        Pi_base_ = 1;
    }
    if (mantissa_ == 0) {
        Pi_exponent_ = 0;
        Pi_base_ = 1;
        half_pi_exponent_ = 0;
    }
}

BigInt SymbolicConstant::merge_base(const BigInt& a, const Rational& ea, const BigInt& b, const Rational& eb)
{
    if (ea == 0) return b;
    if (eb == 0) return a;
    if (a != b) throw std::domain_error("SymbolicConstant: incompatible Π bases");
    return a;
}

SymbolicConstant SymbolicConstant::operator*(const SymbolicConstant& o) const
{
    SymbolicConstant r;
    r.Pi_base_ = merge_base(Pi_base_, Pi_exponent_, o.Pi_base_, o.Pi_exponent_);
    r.mantissa_ = mantissa_ * o.mantissa_;
    r.Pi_exponent_ = Pi_exponent_ + o.Pi_exponent_;
    r.half_pi_exponent_ = half_pi_exponent_ + o.half_pi_exponent_;
    r.normalize();
    return r;
}

SymbolicConstant SymbolicConstant::operator/(const SymbolicConstant& o) const
{
    if (o.mantissa_ == 0) throw std::domain_error("SymbolicConstant: division by zero");
    SymbolicConstant r;
    r.Pi_base_ = merge_base(Pi_base_, Pi_exponent_, o.Pi_base_, o.Pi_exponent_);
    r.mantissa_ = mantissa_ / o.mantissa_;
    r.Pi_exponent_ = Pi_exponent_ - o.Pi_exponent_;
    r.half_pi_exponent_ = half_pi_exponent_ - o.half_pi_exponent_;
    r.normalize();
    return r;
}

SymbolicConstant SymbolicConstant::operator*(const Rational& s) const
{
    SymbolicConstant r = *this;
    r.mantissa_ *= s;
    r.normalize();
    return r;
}

SymbolicConstant SymbolicConstant::operator-() const { return *this * Rational(-1); }

SymbolicConstant SymbolicConstant::operator+(const SymbolicConstant& o) const
{
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    // Bring integer parts of the Π exponents into the mantissas before comparing.
    Rational fa = floor_rational(Pi_exponent_);
    Rational fb = floor_rational(o.Pi_exponent_);
    Rational ra = Pi_exponent_ - fa;
    Rational rb = o.Pi_exponent_ - fb;
    BigInt base = merge_base(Pi_base_, Pi_exponent_, o.Pi_base_, o.Pi_exponent_);
    if (ra != rb || half_pi_exponent_ != o.half_pi_exponent_) {
        throw std::domain_error("SymbolicConstant: sum of terms with different irrational parts");
    }
    Rational lo = fa < fb ? fa : fb;
    Rational ma = mantissa_ * rational_pow(Rational(base), numerator(Rational(fa - lo)));
    Rational mb = o.mantissa_ * rational_pow(Rational(base), numerator(Rational(fb - lo)));
    return SymbolicConstant(ma + mb, base, lo + ra, half_pi_exponent_);
}

SymbolicConstant SymbolicConstant::pow(const Rational& e) const
{
    if (e == 0) return SymbolicConstant(Rational(1));
    Rational h = Rational(half_pi_exponent_) * e;
    if (!is_integer(h)) throw std::domain_error("SymbolicConstant::pow: π exponent would leave half-integers");
    Rational m;
    if (mantissa_ == 1) {
        m = 1;
    } else if (is_integer(e)) {
        m = rational_pow(mantissa_, numerator(e));
    } else {
        throw std::domain_error("SymbolicConstant::pow: non-integer power of a non-unit mantissa");
    }
    return SymbolicConstant(m, Pi_base_, Pi_exponent_ * e, static_cast<int>(numerator(h)));
}

double SymbolicConstant::to_double() const
{
    using boost::multiprecision::exp;
    using boost::multiprecision::log;
    Float50 v = to_float50(mantissa_);
    if (Pi_exponent_ != 0) v *= exp(to_float50(Pi_exponent_) * log(Float50(Pi_base_)));
    if (half_pi_exponent_ != 0) {
        Float50 pi = boost::math::constants::pi<Float50>();
        v *= exp(Float50(half_pi_exponent_) / 2 * log(pi));
    }
    return static_cast<double>(v);
}

std::string SymbolicConstant::to_string() const
{
    Rational m = mantissa_;
    Rational e = Pi_exponent_;
    if (is_integer(e)) {
        m *= rational_pow(Rational(Pi_base_), numerator(e));
        e = 0;
    }
    std::ostringstream os;
    bool wrote = false;
    if (m != 1 || (e == 0 && half_pi_exponent_ == 0)) {
        os << polysob::to_string(m);
        wrote = true;
    }
    if (e != 0) {
        if (wrote) os << "*";
        os << Pi_base_ << "^{" << polysob::to_string(e) << "}";
        wrote = true;
    }
    if (half_pi_exponent_ != 0) {
        if (wrote) os << "*";
        os << "pi";
        if (half_pi_exponent_ != 2) os << "^{" << polysob::to_string(Rational(half_pi_exponent_, 2)) << "}";
    }
    return os.str();
}

bool SymbolicConstant::exactly_equals(const SymbolicConstant& o) const
{
    if (is_zero() || o.is_zero()) return is_zero() && o.is_zero();
    if (half_pi_exponent_ != o.half_pi_exponent_) return false;
    Rational fa = floor_rational(Pi_exponent_);
    Rational fb = floor_rational(o.Pi_exponent_);
    if (Pi_exponent_ - fa != o.Pi_exponent_ - fb) return false;
    if (Pi_exponent_ - fa != 0 && Pi_base_ != o.Pi_base_) return false;
    Rational ma = mantissa_ * rational_pow(Rational(Pi_base_), numerator(fa));
    Rational mb = o.mantissa_ * rational_pow(Rational(o.Pi_base_), numerator(fb));
    return ma == mb;
}

// ---------------------------------------------------------------------------

SymbolicConstant beta_half_integer(const Rational& p, const Rational& q)
{
    auto gp = gamma_half_integer(p);
    auto gq = gamma_half_integer(q);
    auto gs = gamma_half_integer(p + q);
    int h = int(gp.sqrt_pi) + int(gq.sqrt_pi) - int(gs.sqrt_pi);
    return SymbolicConstant(gp.rational * gq.rational / gs.rational, BigInt(1), Rational(0), h);
}

Rational critical_exponent(const DimensionPair& d) { return Rational(2 * d.n, d.n - 2 * d.k); }

SymbolicConstant bubble_scale(const DimensionPair& d)
{
    return SymbolicConstant(Rational(1), d.product_Pi(), Rational(-1, d.k), 0);
}

Rational c_small(const DimensionPair& d)
{
    const int n = d.n, k = d.k;
    return Rational(k * (3 * n * (n - 2) - 4 * (k * k - 1)), 12 * n * (n - 1));
}

SymbolicConstant c_green(const DimensionPair& d)
{
    if (d.n <= 2 * d.k) throw InvalidDimension("c_green requires n > 2k");
    auto g = gamma_half_integer(Rational(d.n - 2 * d.k, 2));
    BigInt denom = (BigInt(1) << (2 * d.k)) * factorial(d.k - 1);
    int h = int(g.sqrt_pi) - d.n; // π^{-n/2} doubled is -n
    return SymbolicConstant(g.rational / Rational(denom), BigInt(1), Rational(0), h);
}

SymbolicConstant radial_moment(int j, const Rational& m, const SymbolicConstant& a, const DimensionPair& d)
{
    if (j < 0) throw std::invalid_argument("radial_moment: j must be non-negative");
    Rational p = Rational(d.n, 2) + j;
    Rational q = m - p;
    if (q <= 0) {
        throw DivergenceError("radial moment diverges: m = " + polysob::to_string(m) + " <= n/2 + j = " +
                                  polysob::to_string(p),
                              j);
    }
    return a.pow(-p) * beta_half_integer(p, q) * Rational(1, 2);
}

SymbolicConstant sphere_area(int n)
{
    if (n < 2) throw std::invalid_argument("sphere_area: n >= 2 required");
    auto g = gamma_half_integer(Rational(n, 2));
    // 2 π^{n/2} / Γ(n/2)
    return SymbolicConstant(Rational(2) / g.rational, BigInt(1), Rational(0), n - int(g.sqrt_pi));
}

SharpConstant sharp_constant(const DimensionPair& d)
{
    SharpConstant out;
    out.bubble_mass = sphere_area(d.n) * radial_moment(0, Rational(d.n), bubble_scale(d), d);
    double mass = out.bubble_mass.to_double();
    out.K = std::pow(mass, -2.0 * d.k / d.n);
    out.inverse_K = std::pow(mass, 2.0 * d.k / d.n);
    return out;
}

} // namespace polysob
