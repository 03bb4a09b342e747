#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polysob/constants.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

using namespace polysob;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Independent double-precision oracles.
double oracle_pi_product(int n, int k)
{
    double p = 1.0;
    for (int j = -k; j <= k - 1; ++j) p *= n + 2 * j;
    return p;
}

double oracle_beta(double p, double q) { return std::exp(std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q)); }

double oracle_sphere_area(int n) { return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0); }

double oracle_bubble_mass_quadrature(int n, int k)
{
    const double a = std::pow(oracle_pi_product(n, k), -1.0 / k);
    // substitute r = s/(1-s) to map [0, ∞) onto [0, 1)
    auto f = [&](double s) {
        if (s >= 1.0) return 0.0;
        double r = s / (1.0 - s);
        double jac = 1.0 / ((1.0 - s) * (1.0 - s));
        return std::pow(r, n - 1) * std::pow(1.0 + a * r * r, -double(n)) * jac;
    };
    double err = 0;
    double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-14, &err);
    return oracle_sphere_area(n) * v;
}

} // namespace

TEST_CASE("critical exponent")
{
    CHECK(critical_exponent(DimensionPair::make(5, 2)) == 10);
    CHECK(critical_exponent(DimensionPair::make(6, 2)) == 6);
    CHECK(critical_exponent(DimensionPair::make(3, 1)) == 6);
}

TEST_CASE("dimension validation")
{
    CHECK_THROWS_AS(DimensionPair::make(4, 2), InvalidDimension);
    CHECK_THROWS_AS(DimensionPair::make(3, 0), InvalidDimension);
    CHECK_NOTHROW(DimensionPair::make(3, 1));
}

TEST_CASE("bubble scale closed forms")
{
    CHECK(bubble_scale(DimensionPair::make(3, 1)).to_string() == "1/3");
    CHECK(bubble_scale(DimensionPair::make(5, 2)).to_string() == "105^{-1/2}");
    CHECK(bubble_scale(DimensionPair::make(6, 2)).to_string() == "384^{-1/2}");
    CHECK(rel(bubble_scale(DimensionPair::make(6, 2)).to_double(), 1.0 / std::sqrt(384.0)) < 1e-15);
}

TEST_CASE("a^k Π = 1 exactly for n <= 14")
{
    for (int n = 3; n <= 14; ++n) {
        for (int k = 1; 2 * k < n; ++k) {
            auto d = DimensionPair::make(n, k);
            auto ak = bubble_scale(d).pow(Rational(k));
            SymbolicConstant pi_const(Rational(d.product_Pi()));
            CHECK((ak * pi_const).exactly_equals(SymbolicConstant(Rational(1))));
            CHECK(rel(static_cast<double>(d.product_Pi()), oracle_pi_product(n, k)) == 0.0);
        }
    }
}

TEST_CASE("c_small")
{
    CHECK(c_small(DimensionPair::make(6, 2)) == Rational(1, 3));
    CHECK(c_small(DimensionPair::make(6, 1)) == Rational(1, 5));
    CHECK(c_small(DimensionPair::make(5, 2)) == Rational(11, 40));
    for (int n = 3; n <= 14; ++n) CHECK(c_small(DimensionPair::make(n, 1)) == Rational(n - 2, 4 * (n - 1)));
}

TEST_CASE("c_green")
{
    const double pi = std::numbers::pi;
    auto c31 = c_green(DimensionPair::make(3, 1));
    CHECK(c31.to_string() == "1/4*pi^{-1}");
    CHECK(rel(c31.to_double(), 1.0 / (4 * pi)) < 1e-15);
    CHECK(rel(c_green(DimensionPair::make(5, 2)).to_double(), 1.0 / (16 * pi * pi)) < 1e-15);
    CHECK(rel(c_green(DimensionPair::make(4, 1)).to_double(), 1.0 / (4 * pi * pi)) < 1e-15);
    CHECK_THROWS_AS(c_green(DimensionPair{4, 2}), InvalidDimension);
}

TEST_CASE("radial moments")
{
    SymbolicConstant one(Rational(1));
    CHECK(radial_moment(0, Rational(4), one, DimensionPair{4, 1}).exactly_equals(SymbolicConstant(Rational(1, 12))));
    CHECK_THROWS_AS(radial_moment(0, Rational(1), one, DimensionPair{3, 1}), DivergenceError);
    try {
        radial_moment(2, Rational(3), one, DimensionPair{3, 1});
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.monomial() == 2);
    }
    auto m5 = radial_moment(0, Rational(5), one, DimensionPair{5, 2});
    CHECK(m5.exactly_equals(SymbolicConstant::pi_power(2) * Rational(3, 256)));
    CHECK(rel(m5.to_double(), 0.5 * oracle_beta(2.5, 2.5)) < 1e-14);
}

TEST_CASE("beta symmetry and recurrence (property)")
{
    for (int pp = 1; pp <= 16; ++pp) {
        for (int qq = 1; qq <= 16; ++qq) {
            Rational p(pp, 2), q(qq, 2);
            if ((pp + qq) % 2 != 0) continue; // p + q integer keeps values in the exact class
            auto b = beta_half_integer(p, q);
            CHECK(b.exactly_equals(beta_half_integer(q, p)));
            CHECK(beta_half_integer(p + 1, q).exactly_equals(b * (p / (p + q))));
            CHECK(rel(b.to_double(), oracle_beta(pp / 2.0, qq / 2.0)) < 1e-13);
        }
    }
}

TEST_CASE("sphere area")
{
    const double pi = std::numbers::pi;
    CHECK(rel(sphere_area(2).to_double(), 2 * pi) < 1e-15);
    CHECK(rel(sphere_area(3).to_double(), 4 * pi) < 1e-15);
    CHECK(sphere_area(5).exactly_equals(SymbolicConstant::pi_power(4) * Rational(8, 3)));
    for (int n = 2; n <= 14; ++n) CHECK(rel(sphere_area(n).to_double(), oracle_sphere_area(n)) < 1e-14);
}

TEST_CASE("sharp constant")
{
    const double pi = std::numbers::pi;
    auto s52 = sharp_constant(DimensionPair::make(5, 2));
    auto expected = SymbolicConstant(Rational(1, 32), BigInt(105), Rational(5, 4), 6);
    CHECK(s52.bubble_mass.exactly_equals(expected));
    CHECK(rel(s52.bubble_mass.to_double(), std::pow(pi, 3) / 32 * std::pow(105.0, 1.25)) < 1e-14);
    CHECK(rel(std::pow(s52.K, -5.0 / 4.0), s52.bubble_mass.to_double()) < 1e-12);

    for (auto [n, k] : {std::pair{3, 1}, {5, 2}, {6, 2}, {7, 3}}) {
        auto s = sharp_constant(DimensionPair::make(n, k));
        CHECK(rel(s.bubble_mass.to_double(), oracle_bubble_mass_quadrature(n, k)) < 1e-10);
        CHECK(rel(s.K * s.inverse_K, 1.0) < 1e-15);
    }
}

TEST_CASE("symbolic constant arithmetic")
{
    auto a = bubble_scale(DimensionPair::make(6, 2));
    CHECK((a * a).to_string() == "1/384");
    CHECK(rel((a / a).to_double(), 1.0) < 1e-15);
    CHECK((a + a).exactly_equals(a * Rational(2)));
    CHECK_THROWS(a + SymbolicConstant(Rational(1)));
    CHECK_THROWS(SymbolicConstant(Rational(2)).pow(Rational(1, 2)));
}
