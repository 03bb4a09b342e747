#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polysob/green.hpp"
#include "polysob/radial_cas.hpp"
#include "polysob/regimes.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace polysob;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST_CASE("blow-up parameters")
{
    auto d = DimensionPair::make(6, 2);
    CHECK_THROWS(BlowupParams::make(10, 0.2, d));
    CHECK_THROWS(BlowupParams::make(10, 1e-3, 1.5, d));
    CHECK_THROWS(BlowupParams::make(10, 1e-3, 0.0, d));
    CHECK(default_tau(d) == 1.0);
    CHECK(default_tau(DimensionPair::make(5, 2)) == 0.25);
    CHECK(default_tau(DimensionPair::make(12, 2)) == 2.0);
    CHECK(BlowupParams::make(10, 1e-3, d).beta() == doctest::Approx(1e-2));
}

TEST_CASE("sigma case table")
{
    auto p = [](double beta, const DimensionPair& d) { return BlowupParams::make(1.0, beta, d); };
    auto d9 = DimensionPair::make(9, 2), d8 = DimensionPair::make(8, 2), d5 = DimensionPair::make(5, 2);
    CHECK(sigma(p(0.1, d9), d9).value == doctest::Approx(0.01));
    CHECK(sigma(p(0.1, d8), d8).value == doctest::Approx(0.01 * std::log(10.0)));
    CHECK(sigma(p(0.1, d8), d8).value == doctest::Approx(0.02303).epsilon(1e-3));
    CHECK(sigma(p(0.04, d5), d5).value == doctest::Approx(0.2));
    CHECK(sigma(p(0.04, d5), d5).tag == "n<2k+4");
    CHECK_THROWS(sigma(p(1.0, d9), d9));
}

TEST_CASE("theta case tables")
{
    auto d9 = DimensionPair::make(9, 2);
    auto t = theta_pair(BlowupParams::make(10, 1e-3, d9), d9);
    CHECK(t.theta.value == doctest::Approx(1e-12));
    CHECK(t.theta.tag == "n>2k+4");
    auto d6 = DimensionPair::make(6, 2);
    auto t6 = theta_pair(BlowupParams::make(10, 1e-3, 1.0, d6), d6);
    CHECK(t6.theta_prime.tag == "n<2k+2+tau");
    CHECK(t6.theta_prime.value == doctest::Approx(1e-6));
    // both vanish as μ → 0 at fixed αμ
    for (auto d : {d9, d6, DimensionPair::make(5, 2), DimensionPair::make(8, 2)}) {
        double prev_t = INFINITY, prev_tp = INFINITY;
        for (double mu : {1e-2, 1e-3, 1e-4}) {
            auto tp = theta_pair(BlowupParams::make(0.05 / mu, mu, d), d);
            CHECK(tp.theta.value < prev_t);
            CHECK(tp.theta_prime.value < prev_tp);
            prev_t = tp.theta.value;
            prev_tp = tp.theta_prime.value;
        }
    }
}

TEST_CASE("case-table branches agree with the defining inequalities")
{
    for (int n = 3; n <= 14; ++n)
        for (int k = 1; 2 * k < n; ++k) {
            auto d = DimensionPair::make(n, k);
            const double tmax = std::min(2.0, (n - 2.0 * k) / 2);
            for (double tau : {default_tau(d), tmax, tmax / 3}) {
                auto p = BlowupParams::make(10, 1e-3, tau, d);
                auto s = sigma(p, d).tag;
                CHECK((s == "n>2k+4") == (n > 2 * k + 4));
                CHECK((s == "n=2k+4") == (n == 2 * k + 4));
                CHECK((s == "n<2k+4") == (n < 2 * k + 4));
                auto t = theta_pair(p, d);
                CHECK(t.theta.tag == s);
                CHECK((t.theta_prime.tag == "n>2k+2+tau") == (n > 2 * k + 2 + tau));
                CHECK((t.theta_prime.tag == "n=2k+2+tau") == (n == 2 * k + 2 + tau));
                CHECK((t.theta_prime.tag == "n<2k+2+tau") == (n < 2 * k + 2 + tau));
                if (n > 2 * k + 2) {
                    CHECK(gradient_energy_regime(p, d).tag == "n>2k+2");
                } else if (n == 2 * k + 2) {
                    CHECK(gradient_energy_regime(p, d).tag == "n=2k+2");
                }
            }
        }
}

TEST_CASE("truncated-bubble energy regimes")
{
    for (auto d : {DimensionPair::make(8, 2), DimensionPair::make(9, 2)}) {
        double prev = INFINITY;
        for (double beta : {1e-2, 1e-3, 1e-4}) {
            auto m = gradient_energy_regime(BlowupParams::make(10, beta / 10, d), d);
            const double dev = std::abs(m.relative_to_reference() - 1);
            CHECK(dev < prev);
            prev = dev;
            if (beta <= 1e-3) CHECK(dev < 0.01);
        }
    }
    // χ ≡ 1: exact scaling μ² ∫(Δ^{(k-1)/2} U)²
    for (auto d : {DimensionPair::make(9, 2), DimensionPair::make(11, 3)}) {
        RegimeOptions o;
        o.no_cutoff = true;
        auto m = gradient_energy_regime(BlowupParams::make(10, 1e-3, d), d, o);
        CHECK(rel(m.measured, 1e-6 * half_laplacian_energy(d).value.to_double()) < 1e-10);
    }
    // n = 2k+2: μ² ln(1/αμ) law with a stable positive constant, equal to the exact flux constant
    auto d6 = DimensionPair::make(6, 2);
    std::vector<double> betas{1e-2, 1e-3, 1e-4}, y;
    for (double b : betas) y.push_back(gradient_energy_regime(BlowupParams::make(10, b / 10, d6), d6).constant * std::log(1 / b));
    auto fa = fit_log_law({betas[0], betas[1]}, {y[0], y[1]});
    auto fb = fit_log_law({betas[1], betas[2]}, {y[1], y[2]});
    CHECK(fa.c > 0);
    CHECK(rel(fa.c, fb.c) < 0.02);
    CHECK(rel(fb.c, half_laplacian_energy(d6).value.to_double()) < 0.01);
    // n = 2k+1: O(μ/α)
    auto d5 = DimensionPair::make(5, 2);
    auto a = gradient_energy_regime(BlowupParams::make(10, 1e-3, d5), d5);
    auto b = gradient_energy_regime(BlowupParams::make(100, 1e-6, d5), d5);
    CHECK(a.tag == "n=2k+1");
    CHECK(b.constant / a.constant == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("L2 mass regimes")
{
    auto d9 = DimensionPair::make(9, 2);
    auto m = l2_mass_regime(BlowupParams::make(10, 1e-5, d9), d9);
    CHECK(m.tag == "n>4k");
    CHECK(std::abs(m.relative_to_reference() - 1) < 0.01);

    auto d8 = DimensionPair::make(8, 2);
    std::vector<double> betas{1e-2, 1e-3, 1e-4}, y;
    for (double b : betas) {
        auto r = l2_mass_regime(BlowupParams::make(10, b / 10, d8), d8);
        CHECK(r.tag == "n=4k");
        y.push_back(r.constant * std::log(1 / b));
    }
    auto fa = fit_log_law({betas[0], betas[1]}, {y[0], y[1]});
    auto fb = fit_log_law({betas[1], betas[2]}, {y[1], y[2]});
    CHECK(fb.c > 0);
    CHECK(rel(fa.c, fb.c) < 0.02);
    CHECK(rel(fb.c, flux_coefficient(bubble_fn(d8) * bubble_fn(d8), d8).to_double()) < 0.01);

    // n < 4k: near field matches the far field c_U Γ (c_U times the singular constant of Γ is a^{-(n-2k)/2})
    for (auto d : {DimensionPair::make(5, 2), DimensionPair::make(7, 2), DimensionPair::make(10, 3)}) {
        const double lhs = c_U_constant(d).to_double() * c_green(d).to_double();
        CHECK(rel(lhs, std::pow(bubble_scale(d).to_double(), -(d.n - 2 * d.k) / 2.0)) < 1e-13);
    }
    auto d5 = DimensionPair::make(5, 2);
    std::vector<double> ratios;
    for (double R : {10.0, 20.0, 40.0}) {
        RegimeOptions o;
        o.crossover_R = R;
        auto r = l2_mass_regime(BlowupParams::make(10, 1e-4, d5), d5, o);
        CHECK(r.tag == "n<4k");
        CHECK(r.near_field < 1e-3 * r.far_field);
        ratios.push_back(r.relative_to_reference());
    }
    CHECK(std::abs(ratios[1] - 1) < 0.05);
    for (double q : ratios) CHECK(rel(q, ratios[1]) < 0.02);
    RegimeOptions bad;
    bad.crossover_R = 0.5;
    CHECK_THROWS(l2_mass_regime(BlowupParams::make(10, 1e-4, d5), d5, bad));
}

TEST_CASE("Pohozaev integral vanishes for compactly supported profiles")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(-1, 1);
    for (auto d : {DimensionPair::make(7, 2), DimensionPair::make(6, 2), DimensionPair::make(9, 3)}) {
        std::vector<PohozaevProfile> profiles{PohozaevProfile::bubble(0.05, 1.0),
                                              PohozaevProfile::bubble(0.3, 0.7, Cutoff(Cutoff::Kind::Smooth))};
        for (int i = 0; i < 3; ++i) {
            std::vector<double> c(5);
            for (double& v : c) v = U(rng);
            profiles.push_back(PohozaevProfile::polynomial(c, 0.5 + 0.5 * std::abs(U(rng))));
        }
        for (const auto& p : profiles) {
            auto r = pohozaev_check(p, d);
            CHECK(r.magnitude > 0);
            CHECK(r.relative < 1e-7);
            CHECK_FALSE(r.flagged);
        }
        // abrupt truncation leaves the boundary terms
        auto sharp = pohozaev_check(PohozaevProfile::bubble(0.1, 1.0, Cutoff(Cutoff::Kind::Sharp)), d);
        CHECK(sharp.flagged);
        CHECK(sharp.relative > 1e-2);
    }
}

TEST_CASE("finite-difference Pohozaev residual converges at order 8")
{
    for (auto d : {DimensionPair::make(7, 2), DimensionPair::make(6, 2), DimensionPair::make(9, 3)}) {
        for (const auto& p : {PohozaevProfile::bubble(0.2, 1.0), PohozaevProfile::polynomial({1, -0.5, 0.3, 0.2, -0.1}, 0.8)}) {
            auto q = p.with_bump(2 * d.k + 10);
            CHECK(pohozaev_check(q, d).relative < 1e-7);
            auto f = pohozaev_refinement(q, d, 0.02, 4);
            REQUIRE(f.observed_order.size() == 2);
            CHECK(f.observed_order[0] < f.observed_order[1]);
            CHECK(f.observed_order[1] == doctest::Approx(8.0).epsilon(0.0125));
            for (int i = 0; i < 3; ++i) CHECK(std::abs(f.residual[i + 1]) < std::abs(f.residual[i]) / 200);
        }
    }
    CHECK_THROWS(pohozaev_refinement(PohozaevProfile::bubble(0.2, 1.0), DimensionPair::make(7, 2), 0.02));
    CHECK_THROWS(pohozaev_refinement(PohozaevProfile::bubble(0.2, 1.0).with_bump(8), DimensionPair::make(7, 2), 0.02));
}

TEST_CASE("balance tables")
{
    auto d6 = DimensionPair::make(6, 2);
    std::vector<BlowupParams> fam;
    for (double mu : {1e-3, 1e-4, 1e-5}) fam.push_back(BlowupParams::make(10, mu, d6));
    auto sphere = balance_table(ModelManifold::sphere(6), d6, fam);
    REQUIRE(sphere.rows.size() == 3);
    CHECK(sphere.rows.back().term_curvature > sphere.rows.back().term_l2);
    CHECK(sphere.conclusion.find("forces R_g >= 0") != std::string::npos);
    for (const auto& r : sphere.rows) CHECK(r.regime == "n=2k+2;n<4k");

    auto torus = balance_table(ModelManifold::torus(6, 2 * std::numbers::pi), d6, fam);
    for (const auto& r : torus.rows) CHECK(r.term_curvature == 0.0);
    CHECK(torus.rows.back().imbalance > torus.rows.front().imbalance);
    CHECK(torus.conclusion.find("contradiction") != std::string::npos);

    // n = 2k+1: the L2 term beats the remaining terms by α²
    auto d5 = DimensionPair::make(5, 2);
    std::vector<BlowupParams> fam5;
    for (double a : {10.0, 20.0, 40.0}) fam5.push_back(BlowupParams::make(a, 1e-3 / a, d5));
    auto t5 = balance_table(ModelManifold::sphere(5), d5, fam5);
    for (int i = 0; i + 1 < 3; ++i) CHECK(t5.rows[i + 1].imbalance / t5.rows[i].imbalance == doctest::Approx(4.0).epsilon(0.02));
    CHECK(t5.conclusion.find("alpha^2") != std::string::npos);
    CHECK_THROWS(balance_table(ModelManifold::sphere(7), d6, fam));
}
