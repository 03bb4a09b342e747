#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polysob/bspline.hpp"
#include "polysob/cutoff.hpp"
#include "polysob/jet.hpp"
#include "polysob/quadrature.hpp"
#include "polysob/quotient.hpp"
#include "polysob/radial_cas.hpp"
#include "polysob/radial_ops.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace polysob;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

ModelManifold flat_torus(int n) { return ModelManifold::torus(n, 2 * std::numbers::pi); }

} // namespace

TEST_CASE("jet arithmetic against closed-form derivatives")
{
    const double x0 = 0.7;
    Jet x = Jet::variable(x0, 6);
    Jet e = exp(2.0 * x);
    for (int i = 0; i <= 6; ++i) CHECK(e.derivative_value(i) == doctest::Approx(std::pow(2.0, i) * std::exp(2 * x0)));
    Jet l = log(x);
    CHECK(l.derivative_value(3) == doctest::Approx(2.0 / std::pow(x0, 3)));
    Jet p = pow(x, 2.5);
    CHECK(p.derivative_value(2) == doctest::Approx(2.5 * 1.5 * std::pow(x0, 0.5)));
    Jet s = sin(x), c = cos(x);
    CHECK(s.derivative_value(5) == doctest::Approx(std::cos(x0)));
    CHECK(c.derivative_value(2) == doctest::Approx(-std::cos(x0)));
    Jet t = tan(x);
    CHECK(t.derivative_value(1) == doctest::Approx(1 / (std::cos(x0) * std::cos(x0))));
    Jet a = atan(x);
    CHECK(a.derivative_value(2) == doctest::Approx(-2 * x0 / std::pow(1 + x0 * x0, 2)));
    Jet q = (1.0 + x) / (x * x);
    // (1+x)/x^2 = x^-2 + x^-1; third derivative -24 x^-5 - 6 x^-4
    CHECK(q.derivative_value(3) == doctest::Approx(-24 / std::pow(x0, 5) - 6 / std::pow(x0, 4)));
    CHECK(x.derivative().order() == 5);
}

TEST_CASE("cutoffs")
{
    for (auto kind : {Cutoff::Kind::Smoothstep6, Cutoff::Kind::Smooth}) {
        Cutoff chi(kind);
        CHECK(chi(0.3) == 1.0);
        CHECK(chi(1.0) == 1.0);
        CHECK(chi(2.0) == 0.0);
        CHECK(chi(3.0) == 0.0);
        double prev = 1.0;
        for (int i = 1; i < 100; ++i) {
            double v = chi(1.0 + i / 100.0);
            CHECK(v <= prev);
            prev = v;
        }
        CHECK(chi(1.5) == doctest::Approx(0.5));
    }
    // C^6 at both ends: derivatives 1..6 vanish as s -> 1+ and s -> 2-
    Cutoff chi;
    for (double s : {1.0 + 1e-3, 2.0 - 1e-3}) {
        Jet j = chi(Jet::variable(s, 7));
        // leading behaviour C(13,6) t^7 with t = 1e-3 the distance to the end point
        for (int d = 1; d <= 7; ++d) {
            double lead = 1716.0 * std::tgamma(8.0) / std::tgamma(8.0 - d) * std::pow(1e-3, 7 - d);
            CHECK(std::abs(j.derivative_value(d)) == doctest::Approx(lead).epsilon(0.05));
        }
    }
    // smoothstep symmetry S(x) + S(1 - x) = 1
    for (double s : {1.1, 1.3, 1.45}) CHECK(chi(s) + chi(3.0 - s) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("radial spline space")
{
    auto space = RadialSplineSpace::graded(0.01, 3.0, 40);
    CHECK(space.dimension() == 40);
    CHECK(space.breakpoints().back() == 3.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1, 1);
    std::vector<double> c(space.dimension());
    for (auto& v : c) v = U(rng);
    CHECK(std::abs(space.evaluate(c, 0.0, 1)) < 1e-12);
    CHECK(std::abs(space.evaluate(c, 3.0, 0)) < 1e-12);
    CHECK(std::abs(space.evaluate(c, 3.0, 1)) < 1e-10);
    for (double r : {0.005, 0.13, 0.9, 2.5}) {
        const double h = 1e-6;
        double fd = (space.evaluate(c, r + h) - space.evaluate(c, r - h)) / (2 * h);
        CHECK(space.evaluate(c, r, 1) == doctest::Approx(fd).epsilon(1e-6));
        double fd2 = (space.evaluate(c, r + h, 1) - space.evaluate(c, r - h, 1)) / (2 * h);
        CHECK(space.evaluate(c, r, 2) == doctest::Approx(fd2).epsilon(1e-6));
    }
}

TEST_CASE("radial Laplacian jets")
{
    // flat: Δ r^2 = -2n
    auto flat = euclidean_profile(7);
    Jet r = Jet::variable(0.4, 4);
    CHECK(radial_laplacian(flat, r * r, r).value() == doctest::Approx(-14.0));
    // exact bubble Laplacian powers from the rational CAS
    auto d = DimensionPair::make(7, 2);
    const double a = bubble_scale(d).to_double();
    auto L2 = apply_laplacian_power(bubble_fn(d), d, 2);
    for (double x : {0.1, 0.8, 2.5}) {
        Jet R = Jet::variable(x, 4);
        Jet u = pow(1.0 + a * R * R, -1.5);
        CHECK(rel(radial_laplacian_power(flat, u, R, 2).value(), L2.evaluate_r(x)) < 1e-12);
    }
    // sphere: Δ cos r = n cos r on the unit sphere; radius ρ scales the eigenvalue by ρ^-2
    for (double rho : {1.0, 2.0}) {
        auto sp = radial_profile(ModelManifold::sphere(6, rho));
        for (double x : {0.05, 0.7, 2.0}) {
            Jet R = Jet::variable(x * rho, 2);
            CHECK(radial_laplacian(sp, cos(R / rho), R).value() == doctest::Approx(6.0 / (rho * rho) * std::cos(x)));
        }
    }
}

TEST_CASE("numerator identity on random compactly supported profiles")
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(-1, 1);
    Cutoff chi;
    for (auto [n, k] : {std::pair{7, 2}, std::pair{9, 3}, std::pair{6, 2}, std::pair{8, 3}, std::pair{11, 2}}) {
        auto p = euclidean_profile(n);
        double coeff[4];
        for (double& c : coeff) c = U(rng);
        const double delta = 0.5 + 0.5 * (U(rng) + 1);
        auto jet = [&](double x, int order) {
            Jet R = Jet::variable(x, order);
            Jet s = R * R;
            Jet poly = coeff[3] + s * 0.0;
            for (int i = 2; i >= 0; --i) poly = poly * s + coeff[i];
            return chi(R / delta) * poly;
        };
        std::vector<double> breaks{0.0, 0.5 * delta, delta, 1.25 * delta, 1.5 * delta, 1.75 * delta, 2 * delta};
        auto lhs = integrate_pieces(
            [&](double x) {
                Jet u = jet(x, 2 * k);
                return u.value() * radial_laplacian_power(p, u, Jet::variable(x, 2 * k), k).value() * std::pow(x, n - 1);
            },
            breaks);
        auto rhs = integrate_pieces(
            [&](double x) {
                double h = half_laplacian_value(p, jet(x, k), Jet::variable(x, k), k);
                return h * h * std::pow(x, n - 1);
            },
            breaks);
        CHECK(rel(lhs.value, rhs.value) < 1e-8);
    }
}

TEST_CASE("test function family")
{
    auto d = DimensionPair::make(6, 2);
    auto fam = TestFunctionFamily::make(ModelManifold::sphere(6), d);
    CHECK(fam.delta == doctest::Approx(std::numbers::pi / 4));
    auto u = build_test_function(fam, 0.01);
    CHECK(u.value(0.0) == doctest::Approx(std::pow(0.01, -1.0)));
    CHECK(u.value(2 * fam.delta) == 0.0);
    CHECK(u.value(2.5 * fam.delta) == 0.0);
    CHECK(u.value(0.9 * 2 * fam.delta) > 0.0);
    CHECK_THROWS(build_test_function(fam, 0.1));
    // L^{2*} mass against the exact bubble mass, O(ε^n)
    const double mass = sharp_constant(d).bubble_mass.to_double();
    for (double eps : {0.05, 0.02}) {
        auto parts = quotient_parts(build_test_function(fam, eps));
        CHECK(rel(parts.mass, mass) < 20 * std::pow(eps / std::sqrt(bubble_scale(d).to_double()) / fam.delta, 6));
    }
}

TEST_CASE("quotient on the flat torus")
{
    auto d = DimensionPair::make(6, 2);
    auto fam = TestFunctionFamily::make(flat_torus(6), d);
    const double iK = sharp_constant(d).inverse_K;
    auto q1 = quotient_eval(fam, 0.002, 0.0);
    auto q2 = quotient_eval(fam, 0.004, 0.0);
    CHECK(q1.value > iK);
    CHECK(q2.value > q1.value);
    // |Q - 1/K| = O(ε^{n-2k}) = O(ε^2)
    CHECK((q2.value - iK) / (q1.value - iK) == doctest::Approx(4.0).epsilon(0.05));
    CHECK(q1.error < 1e-8 * q1.value);
}

TEST_CASE("quotient on the round sphere")
{
    auto d = DimensionPair::make(6, 2);
    const double iK = sharp_constant(d).inverse_K;
    auto fam = TestFunctionFamily::make(ModelManifold::sphere(6), d);
    auto a = quotient_eval(fam, 0.002, 0.0);
    auto b = quotient_eval(fam, 0.004, 0.0);
    // negative θ-slope: Q decreases as θ_ε grows
    CHECK(b.value < a.value);
    CHECK(a.value < iK);
    // the round metric is homogeneous, so the center is irrelevant
    std::vector<double> north{0, 0, 0, 0, 0, 0, 1}, other{0.6, 0, 0, 0, 0.8, 0, 0};
    auto fa = TestFunctionFamily::make(ModelManifold::sphere(6), d, Cutoff{}, 0.0, north);
    auto fb = TestFunctionFamily::make(ModelManifold::sphere(6), d, Cutoff{}, 0.0, other);
    CHECK(rel(quotient_eval(fa, 0.01, 1.0).value, quotient_eval(fb, 0.01, 1.0).value) < 1e-10);
    CHECK_THROWS(quotient_eval(fam, 0.01, -1.0));
}

TEST_CASE("theta regimes")
{
    CHECK(theta_eps(DimensionPair::make(6, 2), 0.1) == doctest::Approx(0.01 * std::log(10.0)));
    CHECK(theta_eps(DimensionPair::make(8, 2), 0.1) == doctest::Approx(0.01));
    CHECK(regime_tag(theta_regime(DimensionPair::make(5, 2))) == "n=2k+1");
    CHECK_THROWS_AS(theta_eps(DimensionPair::make(5, 2), 0.1), std::domain_error);
    for (int n = 3; n <= 14; ++n)
        for (int k = 1; 2 * k < n; ++k) {
            auto r = theta_regime(DimensionPair::make(n, k));
            CHECK((r == Regime::Above) == (n > 2 * k + 2));
            CHECK((r == Regime::Critical) == (n == 2 * k + 2));
            CHECK((r == Regime::Low) == (n == 2 * k + 1));
        }
}

TEST_CASE("slope fit on synthetic curves")
{
    for (auto d : {DimensionPair::make(8, 2), DimensionPair::make(6, 2)}) {
        const double iK = sharp_constant(d).inverse_K;
        QuotientCurve c;
        c.dims = d;
        for (double eps : geometric_grid(0.1, 0.01, 8)) {
            double th = theta_eps(d, eps);
            c.samples.push_back({eps, th, iK - 3 * th + 0.1 * std::pow(th, 1.5), 1e-12});
        }
        auto fit = slope_fit(c, std::vector{NuisanceTerm::theta_power(d, 1.5)});
        CHECK(fit.slope == doctest::Approx(-3.0).epsilon(0.02));
        CHECK(rel(fit.intercept, iK) < 1e-10);
        CHECK(fit.nuisance.at(0) == doctest::Approx(0.1).epsilon(1e-3));
    }
    QuotientCurve few;
    few.dims = DimensionPair::make(8, 2);
    few.samples.resize(4);
    CHECK_THROWS(slope_fit(few));
}

TEST_CASE("predicted slope")
{
    auto d = DimensionPair::make(6, 2);
    CHECK(predicted_slope(flat_torus(6), d) == 0.0);
    const double mass = sharp_constant(d).bubble_mass.to_double();
    const double D = half_laplacian_energy(d).value.to_double() / std::pow(mass, 1.0 / 3.0);
    CHECK(predicted_slope(ModelManifold::sphere(6), d) == doctest::Approx(-10.0 * D).epsilon(1e-13));
    for (int n = 6; n <= 12; ++n) CHECK(predicted_slope(ModelManifold::sphere(n, 1.7), DimensionPair::make(n, 2)) < 0);
    CHECK_THROWS(predicted_slope(ModelManifold::sphere(5), DimensionPair::make(5, 2)));
}

TEST_CASE("slope reproduction and intercept universality")
{
    const auto grid = geometric_grid(0.02, 0.002, 10);
    // S^6 (log regime) and S^8 (ε² regime): fitted slope within 10% of the prediction
    for (int n : {6, 8}) {
        auto d = DimensionPair::make(n, 2);
        auto m = ModelManifold::sphere(n);
        auto fit = slope_fit(quotient_curve(TestFunctionFamily::make(m, d), grid, 0.0));
        CHECK(rel(fit.slope, predicted_slope(m, d)) < 0.10);
        CHECK(rel(fit.intercept, sharp_constant(d).inverse_K) < 1e-3);
    }
    // flat torus: zero slope within 2σ, intercept 1/K within 1e-4
    for (auto d : {DimensionPair::make(8, 2), DimensionPair::make(9, 3)}) {
        auto fit = slope_fit(quotient_curve(TestFunctionFamily::make(flat_torus(d.n), d), grid, 0.0));
        CHECK(std::abs(fit.slope) < 2 * fit.slope_sigma);
        CHECK(rel(fit.intercept, sharp_constant(d).inverse_K) < 1e-4);
    }
    // k = 3 on the sphere
    auto d3 = DimensionPair::make(9, 3);
    auto fit3 = slope_fit(quotient_curve(TestFunctionFamily::make(ModelManifold::sphere(9), d3), grid, 0.0));
    CHECK(rel(fit3.intercept, sharp_constant(d3).inverse_K) < 1e-3);
}

TEST_CASE("violation margin grows with θ on S^6")
{
    auto d = DimensionPair::make(6, 2);
    const double iK = sharp_constant(d).inverse_K;
    auto c = quotient_curve(TestFunctionFamily::make(ModelManifold::sphere(6), d), geometric_grid(0.01, 0.0005, 6), 0.0);
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& s : c.samples) { // decreasing ε, so decreasing θ
        const double margin = iK - s.value;
        CHECK(margin > s.error);
        CHECK(margin < prev);
        prev = margin;
    }
}

TEST_CASE("probe of the optimal inequality")
{
    auto d = DimensionPair::make(6, 2);
    const auto grid = geometric_grid(0.075, 0.001, 10);
    auto sphere = probe_iopt(ModelManifold::sphere(6), d, 1.0, grid);
    CHECK(sphere.violated);
    REQUIRE(sphere.witness_epsilon.has_value());
    CHECK(*sphere.witness_epsilon <= 0.1);
    CHECK(*sphere.witness_epsilon >= 1e-3);
    CHECK(sphere.margin > 0);
    auto torus = probe_iopt(flat_torus(6), d, 1.0, grid);
    CHECK_FALSE(torus.violated);
    CHECK(torus.margin < 0);
    auto zero = probe_iopt(ModelManifold::sphere(6), d, 0.0, grid);
    CHECK(zero.rejected);
    CHECK_FALSE(zero.violated);
    CHECK_FALSE(zero.warning.empty());
}

TEST_CASE("spline minimisation of J_alpha")
{
    auto d = DimensionPair::make(6, 2);
    const double iK = sharp_constant(d).inverse_K;
    // α = 3 keeps near-constant profiles far above 1/K on the unit S^6
    auto sphere = ModelManifold::sphere(6);
    auto res = minimize_quotient(sphere, d, 3.0, 1.0);
    CHECK(res.lambda_est < iK);
    CHECK(res.lambda_est <= res.initial_value);
    CHECK(res.lambda_error < 1e-6 * res.lambda_est);
    // J is 0-homogeneous
    std::vector<double> scaled = res.coefficients;
    for (double& v : scaled) v *= 3.0;
    CHECK(rel(spline_quotient(sphere, d, 3.0, 1.0, res.breakpoints, scaled),
              spline_quotient(sphere, d, 3.0, 1.0, res.breakpoints, res.coefficients)) < 1e-12);
    CHECK(std::abs(res.profile(res.breakpoints.back())) < 1e-12);
    // flat torus: no start goes below 1/K
    auto torus = flat_torus(6);
    for (unsigned long long seed : {1ull, 2ull, 3ull}) {
        MinimizerOptions opt;
        opt.perturbation = seed == 1 ? 0.0 : 0.3;
        opt.seed = seed;
        auto r = minimize_quotient(torus, d, 1.0, 1.0, ProfileSpace{}, opt);
        CHECK(r.lambda_est >= iK - 1e-3);
    }
    CHECK_THROWS(minimize_quotient(sphere, d, 3.0, 1.0, ProfileSpace{10}));
    CHECK_THROWS(minimize_quotient(ModelManifold::sphere(9), DimensionPair::make(9, 4), 1.0, 1.0));
}
