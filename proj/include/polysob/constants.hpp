#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace polysob {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Raised when (n, k) violates 2 <= 2k < n.
class InvalidDimension : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a radial moment or energy integral does not converge.
class DivergenceError : public std::domain_error {
public:
    DivergenceError(const std::string& what, int monomial_degree)
        : std::domain_error(what), monomial_(monomial_degree) {}
    /// Power of t whose moment diverged (-1 when not monomial-specific).
    int monomial() const { return monomial_; }

private:
    int monomial_;
};

struct DimensionPair {
    int n = 0;
    int k = 0;

    /// Validating constructor; throws InvalidDimension unless 2 <= 2k < n.
    static DimensionPair make(int n, int k);

    /// Π = prod_{j=-k}^{k-1} (n + 2j).
    BigInt product_Pi() const;
    int regime_gap() const { return n - 2 * k; }
    Rational half_gap() const { return Rational(n - 2 * k, 2); }

    friend bool operator==(const DimensionPair&, const DimensionPair&) = default;
};

/// Γ(p) for p a positive integer or half-integer: value = rational * (√π if sqrt_pi).
struct HalfIntegerGamma {
    Rational rational;
    bool sqrt_pi = false;
};

HalfIntegerGamma gamma_half_integer(const Rational& p);

/// Exact value q * Π^e * π^(h/2) where Π is the product attached to a DimensionPair.
///
/// Two constants can only be combined when they refer to the same Π (or one of
/// them does not involve Π at all).
class SymbolicConstant {
public:
    SymbolicConstant() = default;
    explicit SymbolicConstant(Rational mantissa) : mantissa_(std::move(mantissa)) {}
    SymbolicConstant(Rational mantissa, BigInt Pi_base, Rational Pi_exponent, int half_pi_exponent);

    static SymbolicConstant pi_power(int half_pi_exponent);

    const Rational& mantissa() const { return mantissa_; }
    const BigInt& Pi_base() const { return Pi_base_; }
    const Rational& Pi_exponent() const { return Pi_exponent_; }
    /// Exponent of π, doubled (so √π is 1).
    int half_pi_exponent() const { return half_pi_exponent_; }
    Rational pi_exponent() const { return Rational(half_pi_exponent_, 2); }

    bool is_rational() const { return Pi_exponent_ == 0 && half_pi_exponent_ == 0; }
    bool is_zero() const { return mantissa_ == 0; }

    SymbolicConstant operator*(const SymbolicConstant& o) const;
    SymbolicConstant operator/(const SymbolicConstant& o) const;
    SymbolicConstant operator*(const Rational& r) const;
    SymbolicConstant operator-() const;

    /// Sum of two constants with identical irrational part.
    SymbolicConstant operator+(const SymbolicConstant& o) const;

    /// Rational power. Requires the mantissa power to stay rational (integer
    /// exponent, or a mantissa that is 1) and the π exponent to stay a half-integer.
    SymbolicConstant pow(const Rational& e) const;

    double to_double() const;
    /// Human-readable closed form, e.g. "384^{-1/2}", "3/256*pi".
    std::string to_string() const;

    bool exactly_equals(const SymbolicConstant& o) const;

private:
    void normalize();
    static BigInt merge_base(const BigInt& a, const Rational& ea, const BigInt& b, const Rational& eb);

    Rational mantissa_{1};
    BigInt Pi_base_{1};
    Rational Pi_exponent_{0};
    int half_pi_exponent_ = 0;
};

/// Exact Euler Beta function at positive integer / half-integer arguments.
SymbolicConstant beta_half_integer(const Rational& p, const Rational& q);

Rational critical_exponent(const DimensionPair& d);

/// a_{n,k} = Π^{-1/k}.
SymbolicConstant bubble_scale(const DimensionPair& d);

/// k(3n(n-2) - 4(k^2-1)) / (12 n (n-1)).
Rational c_small(const DimensionPair& d);

/// Singular constant of the fundamental solution: Γ(n/2-k) / (2^{2k} (k-1)! π^{n/2}).
SymbolicConstant c_green(const DimensionPair& d);

/// ∫_0^∞ r^{n-1} r^{2j} (1 + a r^2)^{-m} dr = a^{-(n/2+j)} B(n/2+j, m-n/2-j) / 2.
SymbolicConstant radial_moment(int j, const Rational& m, const SymbolicConstant& a, const DimensionPair& d);

/// Area of the unit sphere S^{n-1} in R^n.
SymbolicConstant sphere_area(int n);

struct SharpConstant {
    double K = 0.0;
    double inverse_K = 0.0;
    /// ∫_{R^n} U^{2*} dx, exact.
    SymbolicConstant bubble_mass;
};

/// Best constant of the Euclidean higher-order Sobolev inequality, obtained from
/// the extremal U: K^{-n/(2k)} = ∫ U^{2*}.
SharpConstant sharp_constant(const DimensionPair& d);

/// Factorial as BigInt.
BigInt factorial(int m);

double to_double(const Rational& r);
std::string to_string(const Rational& r);

} // namespace polysob
