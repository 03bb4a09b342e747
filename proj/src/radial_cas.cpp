#include "polysob/radial_cas.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace polysob {

namespace {

bool is_integer(const Rational& r) { return denominator(r) == 1; }

int to_int(const Rational& r)
{
    if (!is_integer(r)) throw std::domain_error("expected an integer, got " + to_string(r));
    return static_cast<int>(numerator(r));
}

Rational rational_ipow(const Rational& b, int e)
{
    Rational acc(1);
    Rational base = e < 0 ? Rational(1) / b : b;
    for (int i = 0; i < std::abs(e); ++i) acc *= base;
    return acc;
}

// Floor division for the scale exponent reduction.
int floor_div(int a, int b)
{
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

} // namespace

// ---------------------------------------------------------------------------

Polynomial::Polynomial(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) { trim(); }

Polynomial Polynomial::constant(const Rational& c) { return Polynomial(std::vector<Rational>{c}); }

Polynomial Polynomial::one_plus_t_pow(int p)
{
    if (p < 0) throw std::invalid_argument("one_plus_t_pow: negative power");
    std::vector<Rational> c(p + 1);
    BigInt binom = 1;
    for (int i = 0; i <= p; ++i) {
        c[i] = Rational(binom);
        binom = binom * (p - i) / (i + 1);
    }
    return Polynomial(std::move(c));
}

void Polynomial::trim()
{
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational Polynomial::coefficient(int i) const
{
    if (i < 0 || i >= static_cast<int>(coeffs_.size())) return Rational(0);
    return coeffs_[i];
}

Polynomial Polynomial::derivative() const
{
    if (coeffs_.size() <= 1) return {};
    std::vector<Rational> c(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) c[i - 1] = coeffs_[i] * static_cast<int>(i);
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator+(const Polynomial& o) const
{
    std::vector<Rational> c(std::max(coeffs_.size(), o.coeffs_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = coefficient(int(i)) + o.coefficient(int(i));
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * Rational(-1); }

Polynomial Polynomial::operator*(const Polynomial& o) const
{
    if (is_zero() || o.is_zero()) return {};
    std::vector<Rational> c(coeffs_.size() + o.coeffs_.size() - 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * o.coeffs_[j];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(const Rational& s) const
{
    std::vector<Rational> c = coeffs_;
    for (auto& x : c) x *= s;
    return Polynomial(std::move(c));
}

Polynomial Polynomial::shift() const
{
    if (is_zero()) return {};
    std::vector<Rational> c(coeffs_.size() + 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i + 1] = coeffs_[i];
    return Polynomial(std::move(c));
}

double Polynomial::evaluate(double t) const
{
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + to_double(*it);
    return acc;
}

Rational Polynomial::evaluate(const Rational& t) const
{
    Rational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
    return acc;
}

std::vector<std::string> Polynomial::term_strings() const
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        out.push_back(to_string(coeffs_[i]) + "*t^" + std::to_string(i));
    }
    return out;
}

// ---------------------------------------------------------------------------

ScaleContext ScaleContext::bubble(const DimensionPair& d) { return {d.k, Rational(1) / Rational(d.product_Pi())}; }

double ScaleContext::a() const { return std::pow(to_double(a_pow_k), 1.0 / k); }

RadialRational::RadialRational(Polynomial numerator, Rational denominator_power, int scale_exponent,
                               ScaleContext scale, int angular)
    : num_(std::move(numerator)), m_(std::move(denominator_power)), s_(scale_exponent), scale_(std::move(scale)),
      l_(angular)
{
    normalize();
}

RadialRational RadialRational::constant(const Rational& c, ScaleContext scale)
{
    return RadialRational(Polynomial::constant(c), Rational(0), 0, std::move(scale));
}

RadialRational RadialRational::power_of_one_plus_t(const Rational& m, ScaleContext scale)
{
    return RadialRational(Polynomial::constant(Rational(1)), m, 0, std::move(scale));
}

void RadialRational::normalize()
{
    if (num_.is_zero()) {
        m_ = 0;
        s_ = 0;
        return;
    }
    // a^s with 0 <= s < k: fold whole powers of a^k into the numerator.
    int q = floor_div(s_, scale_.k);
    if (q != 0) {
        num_ = num_ * rational_ipow(scale_.a_pow_k, q);
        s_ -= q * scale_.k;
    }
    // Cancel common factors (1+t) while the numerator vanishes at t = -1.
    while (num_.degree() >= 1 && num_.evaluate(Rational(-1)) == 0) {
        // Synthetic division by (t + 1): q_{i-1} = c_i - q_i.
        const auto& c = num_.coefficients();
        std::vector<Rational> qc(c.size() - 1);
        Rational prev(0);
        for (int i = static_cast<int>(c.size()) - 1; i >= 1; --i) {
            prev = c[i] - prev;
            qc[i - 1] = prev;
        }
        num_ = Polynomial(std::move(qc));
        m_ -= 1;
    }
}

RadialRational RadialRational::with_denominator(const Rational& m) const
{
    Rational diff = m - m_;
    if (diff < 0 || !is_integer(diff)) throw std::domain_error("RadialRational: incompatible denominator powers");
    RadialRational r = *this;
    r.num_ = num_ * Polynomial::one_plus_t_pow(to_int(diff));
    r.m_ = m;
    return r;
}

RadialRational RadialRational::with_scale(int s) const
{
    RadialRational r = *this;
    r.s_ = s;
    return r;
}

RadialRational RadialRational::operator+(const RadialRational& o) const
{
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (!(scale_ == o.scale_)) throw std::domain_error("RadialRational: different scale contexts");
    if (l_ != o.l_) throw std::domain_error("RadialRational: different angular degrees");
    if (s_ != o.s_) throw std::domain_error("RadialRational: different irrational scale powers");
    Rational m = m_ > o.m_ ? m_ : o.m_;
    RadialRational a = with_denominator(m);
    RadialRational b = o.with_denominator(m);
    return RadialRational(a.num_ + b.num_, m, s_, scale_, l_);
}

RadialRational RadialRational::operator-(const RadialRational& o) const { return *this + o * Rational(-1); }

RadialRational RadialRational::operator*(const RadialRational& o) const
{
    if (l_ != 0 && o.l_ != 0) throw std::domain_error("RadialRational: product of two non-radial factors");
    if (!(scale_ == o.scale_)) throw std::domain_error("RadialRational: different scale contexts");
    return RadialRational(num_ * o.num_, m_ + o.m_, s_ + o.s_, scale_, l_ + o.l_);
}

RadialRational RadialRational::operator*(const Rational& c) const
{
    return RadialRational(num_ * c, m_, s_, scale_, l_);
}

RadialRational RadialRational::d_dt() const
{
    // (P / (1+t)^m)' = (P'(1+t) - m P) / (1+t)^{m+1}
    Polynomial p = num_.derivative() * Polynomial(std::vector<Rational>{Rational(1), Rational(1)}) - num_ * m_;
    return RadialRational(p, m_ + 1, s_, scale_, l_);
}

double RadialRational::evaluate_t(double t) const
{
    double v = num_.evaluate(t) * std::pow(1.0 + t, -to_double(m_));
    if (s_ != 0) v *= std::pow(scale_.a(), s_);
    return v;
}

double RadialRational::evaluate_r(double r) const
{
    double v = evaluate_t(scale_.a() * r * r);
    for (int i = 0; i < l_; ++i) v *= r;
    return v;
}

// ---------------------------------------------------------------------------

RadialRational bubble_fn(const DimensionPair& d)
{
    return RadialRational::power_of_one_plus_t(d.half_gap(), ScaleContext::bubble(d));
}

RadialRational apply_laplacian(const RadialRational& f, const DimensionPair& d)
{
    const int dim = d.n + 2 * f.angular();
    RadialRational f1 = f.d_dt();
    RadialRational f2 = f1.d_dt();
    RadialRational t_f2(f2.numerator().shift(), f2.denominator_power(), f2.scale_exponent(), f2.scale(),
                        f2.angular());
    RadialRational sum = t_f2 * Rational(4) + f1 * Rational(2 * dim);
    return RadialRational(sum.numerator(), sum.denominator_power(), sum.scale_exponent() + 1, sum.scale(),
                          sum.angular()) *
           Rational(-1);
}

RadialRational apply_laplacian_power(const RadialRational& f, const DimensionPair& d, int power)
{
    RadialRational g = f;
    for (int i = 0; i < power; ++i) g = apply_laplacian(g, d);
    return g;
}

namespace {

IdentityCertificate certificate(std::string name, const DimensionPair& d, RadialRational residual)
{
    IdentityCertificate c;
    c.identity = std::move(name);
    c.dims = d;
    c.residual_zero = residual.is_zero();
    c.residual_terms = residual.numerator().term_strings();
    c.residual = std::move(residual);
    return c;
}

} // namespace

IdentityCertificate verify_bubble_identity(const DimensionPair& d)
{
    return verify_bubble_identity(d, Rational(1) / Rational(d.product_Pi()));
}

IdentityCertificate verify_bubble_identity(const DimensionPair& d, const Rational& a_pow_k)
{
    ScaleContext sc{d.k, a_pow_k};
    RadialRational u = RadialRational::power_of_one_plus_t(d.half_gap(), sc);
    RadialRational lhs = apply_laplacian_power(u, d, d.k);
    RadialRational rhs = RadialRational::power_of_one_plus_t(Rational(d.n + 2 * d.k, 2), sc);
    return certificate("Delta^k U = U^(2*-1)", d, lhs - rhs);
}

KernelElements kernel_elements(const DimensionPair& d)
{
    RadialRational u = bubble_fn(d);
    RadialRational du = u.d_dt();
    // y.∇U = r f'(r) = 2 t F'(t)
    RadialRational t_du(du.numerator().shift(), du.denominator_power(), du.scale_exponent(), du.scale());
    KernelElements z;
    z.dilation = t_du * Rational(2) + u * d.half_gap();
    // ∂_j U = x_j 2a F'(t)
    z.translation = RadialRational(du.numerator() * Rational(2), du.denominator_power(), du.scale_exponent() + 1,
                                   du.scale(), 1);
    return z;
}

std::vector<IdentityCertificate> verify_kernel_identity(const DimensionPair& d)
{
    Rational p = critical_exponent(d);
    return verify_kernel_identity(d, p - 1);
}

std::vector<IdentityCertificate> verify_kernel_identity(const DimensionPair& d, const Rational& eigenvalue)
{
    KernelElements z = kernel_elements(d);
    ScaleContext sc = ScaleContext::bubble(d);
    // U^{2*-2} = (1+t)^{-2k}
    RadialRational potential = RadialRational::power_of_one_plus_t(Rational(2 * d.k), sc) * eigenvalue;
    std::vector<IdentityCertificate> out;
    out.push_back(certificate("Delta^k Z0 = (2*-1) U^(2*-2) Z0", d,
                              apply_laplacian_power(z.dilation, d, d.k) - potential * z.dilation));
    out.push_back(certificate("Delta^k Zj = (2*-1) U^(2*-2) Zj", d,
                              apply_laplacian_power(z.translation, d, d.k) - potential * z.translation));
    return out;
}

SymbolicConstant energy_integral(const RadialRational& f, const DimensionPair& d, int weight_power)
{
    if (f.angular() != 0) throw std::invalid_argument("energy_integral: scalar profile required");
    if (!(f.scale() == ScaleContext::bubble(d)))
        throw std::invalid_argument("energy_integral: profile must use the bubble scale");
    if (f.is_zero()) return SymbolicConstant(Rational(0));
    SymbolicConstant a = bubble_scale(d);
    SymbolicConstant total(Rational(0));
    const auto& c = f.numerator().coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        int j = static_cast<int>(i) + weight_power;
        SymbolicConstant term =
            a.pow(Rational(f.scale_exponent() + j)) * radial_moment(j, f.denominator_power(), a, d) * c[i];
        total = total + term;
    }
    return sphere_area(d.n) * total;
}

RadialRational gradient_squared(const RadialRational& f)
{
    if (f.angular() != 0) throw std::invalid_argument("gradient_squared: scalar profile required");
    RadialRational g = f.d_dt();
    RadialRational g2 = g * g;
    return RadialRational(g2.numerator().shift() * Rational(4), g2.denominator_power(), g2.scale_exponent() + 1,
                          g2.scale());
}

RadialRational half_laplacian_density(const RadialRational& f, const DimensionPair& d, HalfLaplacianConvention p)
{
    RadialRational g = apply_laplacian_power(f, d, p.laplacian_power());
    if (p.is_gradient()) return gradient_squared(g);
    return g * g;
}

SymbolicConstant flux_coefficient(const RadialRational& density, const DimensionPair& d)
{
    if (density.is_zero()) return SymbolicConstant(Rational(0));
    // density ~ a^{s + deg - m} lead * r^{2(deg - m)} as r → ∞
    Rational decay = Rational(2) * (Rational(density.numerator().degree()) - density.denominator_power());
    if (decay + d.n > 0) throw DivergenceError("flux_coefficient: r^n * density is unbounded", -1);
    if (decay + d.n < 0) return SymbolicConstant(Rational(0));
    Rational e = Rational(density.scale_exponent() + density.numerator().degree()) - density.denominator_power();
    return sphere_area(d.n) * bubble_scale(d).pow(e) * density.numerator().leading();
}

HalfLaplacianEnergy half_laplacian_energy(const DimensionPair& d)
{
    RadialRational density = half_laplacian_density(bubble_fn(d), d, HalfLaplacianConvention{d.k - 1});
    HalfLaplacianEnergy out;
    if (d.n > 2 * d.k + 2) {
        out.kind = HalfLaplacianEnergy::Kind::Integral;
        out.value = energy_integral(density, d);
    } else {
        out.kind = HalfLaplacianEnergy::Kind::BoundaryFlux;
        out.value = flux_coefficient(density, d);
    }
    return out;
}

} // namespace polysob
