#pragma once

#include "polysob/constants.hpp"

#include <string>
#include <vector>

namespace polysob {

/// Dense univariate polynomial with exact rational coefficients, lowest degree first.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> coefficients);
    static Polynomial constant(const Rational& c);
    /// (1 + t)^p for integer p >= 0.
    static Polynomial one_plus_t_pow(int p);

    int degree() const { return coeffs_.empty() ? -1 : static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<Rational>& coefficients() const { return coeffs_; }
    Rational coefficient(int i) const;
    Rational leading() const { return is_zero() ? Rational(0) : coeffs_.back(); }

    Polynomial derivative() const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(const Rational& s) const;
    /// Multiplies by t.
    Polynomial shift() const;

    double evaluate(double t) const;
    Rational evaluate(const Rational& t) const;

    bool operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }

    std::vector<std::string> term_strings() const;

private:
    void trim();
    std::vector<Rational> coeffs_;
};

/// How the normalized scale a (t = a r^2) is known exactly: a^k is rational.
struct ScaleContext {
    int k = 1;
    Rational a_pow_k{1};

    /// a = a_{n,k}, i.e. a^k = 1/Π.
    static ScaleContext bubble(const DimensionPair& d);
    double a() const;

    friend bool operator==(const ScaleContext&, const ScaleContext&) = default;
};

/// a^s x_j^l P(t) / (1+t)^m, t = a r^2.
///
/// With l = 0 this is a radial scalar. With l = 1 it is one Cartesian component
/// x_j G(t) of a radial vector field such as ∇U; the radial Laplacian then acts
/// on G as the radial Laplacian in dimension n + 2.
class RadialRational {
public:
    RadialRational() = default;
    RadialRational(Polynomial numerator, Rational denominator_power, int scale_exponent, ScaleContext scale,
                   int angular = 0);

    static RadialRational constant(const Rational& c, ScaleContext scale);
    /// (1+t)^{-m}.
    static RadialRational power_of_one_plus_t(const Rational& m, ScaleContext scale);

    const Polynomial& numerator() const { return num_; }
    const Rational& denominator_power() const { return m_; }
    int scale_exponent() const { return s_; }
    const ScaleContext& scale() const { return scale_; }
    int angular() const { return l_; }

    bool is_zero() const { return num_.is_zero(); }

    RadialRational operator+(const RadialRational& o) const;
    RadialRational operator-(const RadialRational& o) const;
    RadialRational operator*(const RadialRational& o) const;
    RadialRational operator*(const Rational& c) const;

    /// d/dt of the scalar profile (scale unchanged).
    RadialRational d_dt() const;

    /// Value in the normalized variable (for l = 1, the profile G).
    double evaluate_t(double t) const;
    /// Value of the radial profile at radius r (for l = 1, r G(a r^2)).
    double evaluate_r(double r) const;

private:
    void normalize();
    RadialRational with_denominator(const Rational& m) const;
    RadialRational with_scale(int s) const;

    Polynomial num_;
    Rational m_{0};
    int s_ = 0;
    ScaleContext scale_{};
    int l_ = 0;
};

/// Paper convention for half powers of the (nonnegative) Laplacian: order p means
/// Δ^{p/2} for even p and ∇Δ^{(p-1)/2} for odd p.
struct HalfLaplacianConvention {
    int order = 0;
    bool is_gradient() const { return order % 2 == 1; }
    int laplacian_power() const { return order / 2; }
};

/// The extremal profile (1+t)^{-(n-2k)/2} with t = a_{n,k} r^2.
RadialRational bubble_fn(const DimensionPair& d);

/// Geometer's radial Laplacian -f'' - (n-1)/r f' expressed in t: -a(4t F'' + 2(n+2l) F').
RadialRational apply_laplacian(const RadialRational& f, const DimensionPair& d);

RadialRational apply_laplacian_power(const RadialRational& f, const DimensionPair& d, int power);

struct IdentityCertificate {
    std::string identity;
    DimensionPair dims;
    bool residual_zero = false;
    /// Nonzero numerator terms of the residual (as "c*t^j").
    std::vector<std::string> residual_terms;
    RadialRational residual;
};

/// Exact check of Δ^k U = U^{2*-1}. `a_pow_k` overrides a^k (default 1/Π).
IdentityCertificate verify_bubble_identity(const DimensionPair& d);
IdentityCertificate verify_bubble_identity(const DimensionPair& d, const Rational& a_pow_k);

struct KernelElements {
    /// Z^0 = y.∇U + (n-2k)/2 U.
    RadialRational dilation;
    /// Z^j = ∂_j U = x_j G(t), stored with angular = 1.
    RadialRational translation;
};

KernelElements kernel_elements(const DimensionPair& d);

/// Exact check of Δ^k Z = (2*-1) U^{2*-2} Z for Z^0 and for the Z^j profile.
/// `eigenvalue` overrides 2*-1 (used to confirm the check is not vacuous).
std::vector<IdentityCertificate> verify_kernel_identity(const DimensionPair& d);
std::vector<IdentityCertificate> verify_kernel_identity(const DimensionPair& d, const Rational& eigenvalue);

/// Exact ∫_{R^n} t^w f dx for a scalar profile; f must use the bubble scale.
SymbolicConstant energy_integral(const RadialRational& f, const DimensionPair& d, int weight_power = 0);

/// |∇f|^2 for a scalar radial f, as a scalar profile: 4a t (F')^2.
RadialRational gradient_squared(const RadialRational& f);

/// The scalar density (Δ^{p/2} f)^2 under the half-Laplacian convention.
RadialRational half_laplacian_density(const RadialRational& f, const DimensionPair& d, HalfLaplacianConvention p);

struct HalfLaplacianEnergy {
    enum class Kind { Integral, BoundaryFlux } kind = Kind::Integral;
    SymbolicConstant value;
};

/// ∫(Δ^{(k-1)/2} U)^2 for n > 2k+2; for n = 2k+2 the logarithmic coefficient
/// ω_{n-1} lim r^n (Δ^{(k-1)/2} U)^2.
HalfLaplacianEnergy half_laplacian_energy(const DimensionPair& d);

/// ω_{n-1} lim_{r→∞} r^n f(r) for a nonnegative scalar density f (zero if it decays faster).
SymbolicConstant flux_coefficient(const RadialRational& density, const DimensionPair& d);

} // namespace polysob
