#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polysob/radial_cas.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <random>

using namespace polysob;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// ∫_{R^n} f(|x|) dx by Gauss-Kronrod after r = s/(1-s).
template <class F>
double radial_quadrature(F f, int n)
{
    auto g = [&](double s) {
        if (s >= 1.0) return 0.0;
        double r = s / (1.0 - s);
        return std::pow(r, n - 1) * f(r) / ((1.0 - s) * (1.0 - s));
    };
    double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, 1.0, 20, 1e-14);
    return 2.0 * std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0) * v;
}

// -f'' - (n-1)/r f' by 6th-order centered differences.
template <class F>
double fd_laplacian(F f, double r, int n, double h)
{
    double f0 = f(r);
    double fp1 = f(r + h), fm1 = f(r - h), fp2 = f(r + 2 * h), fm2 = f(r - 2 * h), fp3 = f(r + 3 * h),
           fm3 = f(r - 3 * h);
    double d1 = (45 * (fp1 - fm1) - 9 * (fp2 - fm2) + (fp3 - fm3)) / (60 * h);
    double d2 = (270 * (fp1 + fm1) - 27 * (fp2 + fm2) + 2 * (fp3 + fm3) - 490 * f0) / (180 * h * h);
    return -d2 - (n - 1) / r * d1;
}

RadialRational random_profile(std::mt19937_64& rng, const ScaleContext& sc)
{
    std::uniform_int_distribution<int> deg(0, 3), coef(-5, 5), half(1, 12);
    std::vector<Rational> c(deg(rng) + 1);
    for (auto& x : c) x = Rational(coef(rng), 1 + std::abs(coef(rng)));
    if (c.back() == 0) c.back() = 1;
    return RadialRational(Polynomial(c), Rational(half(rng), 2), 0, sc);
}

} // namespace

TEST_CASE("polynomial basics")
{
    Polynomial p({Rational(1), Rational(2), Rational(1)});
    CHECK(p == Polynomial::one_plus_t_pow(2));
    CHECK(p.derivative() == Polynomial({Rational(2), Rational(2)}));
    CHECK((p - p).is_zero());
    CHECK(p.evaluate(Rational(-1)) == 0);
}

TEST_CASE("bubble profile")
{
    auto d = DimensionPair::make(3, 1);
    auto u = bubble_fn(d);
    CHECK(u.evaluate_t(0.0) == doctest::Approx(1.0));
    CHECK(u.evaluate_r(std::sqrt(3.0)) == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-15));
    CHECK(u.denominator_power() == d.half_gap());
    CHECK(bubble_fn(DimensionPair::make(7, 3)).denominator_power() == Rational(1, 2));
}

TEST_CASE("laplacian of simple profiles")
{
    auto d = DimensionPair::make(6, 1);
    ScaleContext sc = ScaleContext::bubble(d);
    CHECK(apply_laplacian(RadialRational::constant(Rational(1), sc), d).is_zero());

    // k = 1: Δ(1+t)^{-(n-2)/2} = a n(n-2) (1+t)^{-(n+2)/2}
    for (int n = 3; n <= 10; ++n) {
        auto dn = DimensionPair::make(n, 1);
        ScaleContext unit{1, Rational(1)};
        auto f = RadialRational::power_of_one_plus_t(Rational(n - 2, 2), unit);
        auto lf = apply_laplacian(f, dn);
        auto expected = RadialRational::power_of_one_plus_t(Rational(n + 2, 2), unit) * Rational(n * (n - 2));
        CHECK((lf - expected).is_zero());
    }
}

TEST_CASE("laplacian agrees with finite differences (property)")
{
    std::mt19937_64 rng(20261018);
    auto d = DimensionPair::make(7, 2);
    ScaleContext sc = ScaleContext::bubble(d);
    std::uniform_real_distribution<double> radius(0.3, 6.0);
    for (int trial = 0; trial < 100; ++trial) {
        auto f = random_profile(rng, sc);
        auto g = f + random_profile(rng, sc) * Rational(0); // exercise the zero path
        auto lf = apply_laplacian(g, d);
        for (int s = 0; s < 20; ++s) {
            double r = radius(rng);
            double fd = fd_laplacian([&](double x) { return f.evaluate_r(x); }, r, d.n, 1e-2);
            double ex = lf.evaluate_r(r);
            double scale = std::abs(f.evaluate_r(r)) / (r * r) + std::abs(ex);
            CHECK(std::abs(fd - ex) <= 1e-6 * scale);
        }
    }
}

TEST_CASE("laplacian is linear (property)")
{
    std::mt19937_64 rng(7);
    auto d = DimensionPair::make(9, 3);
    ScaleContext sc = ScaleContext::bubble(d);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto f = random_profile(rng, sc);
        auto g = random_profile(rng, sc);
        if (denominator(Rational(f.denominator_power() - g.denominator_power())) != 1) continue;
        CHECK((apply_laplacian(f + g, d) - apply_laplacian(f, d) - apply_laplacian(g, d)).is_zero());
        ++checked;
    }
    CHECK(checked > 10);
}

TEST_CASE("bubble identity is exact")
{
    for (int n = 3; n <= 14; ++n) {
        for (int k = 1; 2 * k < n; ++k) {
            auto c = verify_bubble_identity(DimensionPair::make(n, k));
            CHECK_MESSAGE(c.residual_zero, "n=" << n << " k=" << k);
        }
    }
    auto d = DimensionPair::make(5, 2);
    Rational perturbed = Rational(101 * 101, 100 * 100) / Rational(d.product_Pi());
    auto bad = verify_bubble_identity(d, perturbed);
    CHECK_FALSE(bad.residual_zero);
    CHECK_FALSE(bad.residual_terms.empty());
}

TEST_CASE("kernel identity is exact")
{
    for (int n = 3; n <= 14; ++n) {
        for (int k = 1; 2 * k < n; ++k) {
            for (const auto& c : verify_kernel_identity(DimensionPair::make(n, k)))
                CHECK_MESSAGE(c.residual_zero, c.identity << " n=" << n << " k=" << k);
        }
    }
    auto d = DimensionPair::make(5, 2);
    for (const auto& c : verify_kernel_identity(d, critical_exponent(d) - 2)) CHECK_FALSE(c.residual_zero);
}

TEST_CASE("kernel elements")
{
    auto d = DimensionPair::make(6, 2);
    auto z = kernel_elements(d);
    CHECK(z.dilation.evaluate_t(0.0) == doctest::Approx(1.0));
    // |Z0| ~ (1+|y|)^{2k-n}: numerator degree minus denominator power equals -(n-2k)/2
    CHECK(Rational(z.dilation.numerator().degree()) - z.dilation.denominator_power() == -d.half_gap());

    // ∂_j U by finite differences along x_j
    auto u = bubble_fn(d);
    for (double r : {0.5, 1.0, 3.0}) {
        double h = 1e-5;
        double fd = (u.evaluate_r(r + h) - u.evaluate_r(r - h)) / (2 * h);
        CHECK(z.translation.evaluate_r(r) == doctest::Approx(fd).epsilon(1e-8));
    }

    // ∫ Z0 U^{2*-1} = 0 by scaling invariance
    for (auto [n, k] : {std::pair{5, 2}, {6, 2}, {7, 3}, {9, 2}}) {
        auto dd = DimensionPair::make(n, k);
        auto zz = kernel_elements(dd);
        auto w = RadialRational::power_of_one_plus_t(Rational(n + 2 * k, 2), ScaleContext::bubble(dd));
        CHECK(energy_integral(zz.dilation * w, dd).is_zero());
    }
}

TEST_CASE("energy integrals")
{
    auto d = DimensionPair::make(5, 2);
    auto u = bubble_fn(d);
    auto p = critical_exponent(d);
    auto u2s = RadialRational::power_of_one_plus_t(d.half_gap() * p, u.scale());
    CHECK(energy_integral(u2s, d).exactly_equals(sharp_constant(d).bubble_mass));

    auto d9 = DimensionPair::make(9, 2);
    auto u9 = bubble_fn(d9);
    auto l2 = energy_integral(u9 * u9, d9);
    auto expected = sphere_area(9) * bubble_scale(d9).pow(Rational(-9, 2)) *
                    beta_half_integer(Rational(9, 2), Rational(1, 2)) * Rational(1, 2);
    CHECK(l2.exactly_equals(expected));
    CHECK_THROWS_AS(energy_integral(u * u, d), DivergenceError);
    CHECK_THROWS_AS(energy_integral(bubble_fn(DimensionPair::make(8, 2)).operator*(bubble_fn(DimensionPair::make(8, 2))),
                                    DimensionPair::make(8, 2)),
                    DivergenceError);

    for (auto [n, k] : {std::pair{5, 2}, {6, 2}, {7, 3}}) {
        auto dd = DimensionPair::make(n, k);
        double a = ScaleContext::bubble(dd).a();
        double q = to_double(critical_exponent(dd));
        auto f = RadialRational::power_of_one_plus_t(Rational(n), ScaleContext::bubble(dd));
        double quad = radial_quadrature([&](double r) { return std::pow(1 + a * r * r, -(n - 2 * k) / 2.0 * q); }, n);
        CHECK(rel(energy_integral(f, dd).to_double(), quad) < 1e-10);
    }
}

TEST_CASE("half laplacian energies")
{
    // k = 1: the convention reduces to ∫U^2
    auto d = DimensionPair::make(7, 1);
    auto e = half_laplacian_energy(d);
    CHECK(e.kind == HalfLaplacianEnergy::Kind::Integral);
    CHECK(e.value.exactly_equals(energy_integral(bubble_fn(d) * bubble_fn(d), d)));

    // (8,2): ∫|∇U|^2 against quadrature
    auto d8 = DimensionPair::make(8, 2);
    auto e8 = half_laplacian_energy(d8);
    double a = ScaleContext::bubble(d8).a();
    double quad = radial_quadrature(
        [&](double r) {
            double du = -4.0 * a * r * std::pow(1 + a * r * r, -3.0);
            return du * du;
        },
        8);
    CHECK(rel(e8.value.to_double(), quad) < 1e-10);

    // (6,2): n = 2k+2, finite positive flux coefficient ω_5 lim r^6 |∇U|^2
    auto d6 = DimensionPair::make(6, 2);
    auto e6 = half_laplacian_energy(d6);
    CHECK(e6.kind == HalfLaplacianEnergy::Kind::BoundaryFlux);
    double a6 = ScaleContext::bubble(d6).a();
    double r = 1e4;
    double du = -2.0 * a6 * r * std::pow(1 + a6 * r * r, -2.0);
    CHECK(rel(e6.value.to_double(), sphere_area(6).to_double() * std::pow(r, 6) * du * du) < 1e-6);
    CHECK(e6.value.to_double() > 0);

    // density check under the gradient convention
    auto g = half_laplacian_density(bubble_fn(d8), d8, HalfLaplacianConvention{1});
    CHECK((g - gradient_squared(bubble_fn(d8))).is_zero());
}

TEST_CASE("pohozaev pairing vanishes exactly")
{
    for (auto [n, k] : {std::pair{5, 2}, {7, 3}, {9, 2}, {11, 4}}) {
        auto d = DimensionPair::make(n, k);
        auto z = kernel_elements(d);
        auto lhs = apply_laplacian_power(bubble_fn(d), d, k) * z.dilation;
        CHECK(energy_integral(lhs, d).is_zero());
    }
}
