#pragma once

#include "polysob/constants.hpp"
#include "polysob/cutoff.hpp"
#include "polysob/geometry.hpp"
#include "polysob/jet.hpp"

#include <optional>
#include <string>
#include <vector>

namespace polysob {

/// Truncated dressed bubbles u_ε = φ · χ(r/δ) · (ε/(ε² + a y²))^{(n-2k)/2} about a point,
/// with r the geodesic radius and y the flat radius of the conformal chart.
struct TestFunctionFamily {
    ModelManifold manifold = ModelManifold::torus(3);
    DimensionPair dims;
    std::vector<double> center;
    Cutoff cutoff;
    ConformalGauge gauge;
    RadialMetricProfile profile;
    /// χ ≡ 1 on r ≤ δ, u ≡ 0 on r ≥ 2δ.
    double delta = 0.0;

    /// δ <= 0 selects a quarter of the validity radius.
    static TestFunctionFamily make(const ModelManifold& m, const DimensionPair& d, Cutoff cutoff = Cutoff{},
                                   double delta = 0.0, std::vector<double> center = {});
    /// Largest admissible ε (δ/10).
    double max_epsilon() const { return delta / 10.0; }
};

/// One member u_ε of a family, as a radial profile on the manifold.
class TestFunction {
public:
    TestFunction(TestFunctionFamily family, double epsilon);

    const TestFunctionFamily& family() const { return fam_; }
    double epsilon() const { return eps_; }
    /// Bubble length scale ε/√a in the flat chart.
    double scale() const;
    double support_radius() const { return 2.0 * fam_.delta; }

    double value(double r) const;
    /// Taylor jet of u_ε in the geodesic radius at r (zero beyond the support).
    Jet jet(double r, int order) const;
    /// Signed Δ^{k/2} u_ε (radial derivative component for odd k), computed with Δ = Δ_g.
    double half_laplacian(double r) const;
    /// Quadrature breakpoints: geometric around the bubble scale, then the cutoff annulus.
    std::vector<double> breakpoints() const;

private:
    TestFunctionFamily fam_;
    double eps_;
    double a_;
};

TestFunction build_test_function(const TestFunctionFamily& family, double epsilon);

struct QuotientParts {
    /// ∫(Δ^{k/2}u)², ∫u², ∫|u|^{2*}, each with absolute error estimates.
    double energy = 0.0, energy_error = 0.0;
    double l2 = 0.0, l2_error = 0.0;
    double mass = 0.0, mass_error = 0.0;
};

QuotientParts quotient_parts(const TestFunction& u, double rel_tol = 1e-12);

struct QuotientSample {
    double epsilon = 0.0;
    double theta = 0.0;
    double value = 0.0;
    double error = 0.0;
};

/// Q(ε) = ∫u(Δ_g^k u + B u) / (∫|u|^{2*})^{2/2*}, with the numerator in the symmetric form
/// ∫(Δ^{k/2}u)² + B∫u² (valid for compact support).
QuotientSample quotient_eval(const TestFunctionFamily& family, double epsilon, double B, double rel_tol = 1e-12);

/// Which θ_ε definition applies.
enum class Regime { Above, Critical, Low };
Regime theta_regime(const DimensionPair& d);
std::string regime_tag(Regime r);

/// θ_ε = ε² for n > 2k+2 and ε² ln(1/ε) for n = 2k+2. Throws std::domain_error for n = 2k+1.
double theta_eps(const DimensionPair& d, double epsilon);

struct QuotientCurve {
    DimensionPair dims;
    double B = 0.0;
    std::vector<QuotientSample> samples;
};

/// Evaluates Q on an ε grid; samples are sorted by decreasing ε whatever the scheduling.
QuotientCurve quotient_curve(const TestFunctionFamily& family, const std::vector<double>& eps_grid, double B,
                             unsigned jobs = 0);

/// `count` geometric points from hi down to lo.
std::vector<double> geometric_grid(double hi, double lo, int count);

/// Extra regressor ε^p ln(1/ε)^q beside 1 and θ_ε, absorbing the o(θ_ε) remainder.
struct NuisanceTerm {
    double eps_power = 0.0;
    double log_power = 0.0;

    double operator()(double epsilon) const;
    std::string tag() const;
    /// θ_ε^p written as a term.
    static NuisanceTerm theta_power(const DimensionPair& d, double p);
};

/// Leading remainder terms of Q(ε) - 1/K - slope·θ_ε:
/// n = 2k+2: ε² (cutoff), ε⁴ ln(1/ε) and ε⁴;
/// n > 2k+2: ε^m, ε^m ln(1/ε), ε⁴ and ε^{m+2} with m = min(4, n-2k), duplicates dropped.
std::vector<NuisanceTerm> default_nuisance(const DimensionPair& d);

struct SlopeFit {
    double intercept = 0.0, intercept_sigma = 0.0;
    double slope = 0.0, slope_sigma = 0.0;
    std::vector<NuisanceTerm> nuisance_terms;
    std::vector<double> nuisance, nuisance_sigma;
    /// Root-mean-square residual relative to the intercept.
    double residual = 0.0;
    double reduced_chi2 = 0.0;
    Regime regime = Regime::Above;
};

/// Weighted least squares of Q on [1, θ_ε, nuisance...] with weights 1/max(err, 1e-12 Q)².
/// Parameter covariances are scaled by max(1, reduced χ²). Each σ also includes, in quadrature,
/// two truncation systematics: the shift when the largest-ε sample is dropped, and the shift
/// when the next power ε^{p+2} (p the highest nuisance power) is added to the model.
SlopeFit slope_fit(const QuotientCurve& curve, std::optional<std::vector<NuisanceTerm>> nuisance = std::nullopt);

/// -c_{n,k} R_g C_{n,k} / (∫U^{2*})^{2/2*}; C_{n,k} is the half-Laplacian energy (flux constant at n = 2k+2).
double predicted_slope(const ModelManifold& m, const DimensionPair& d, double B = 0.0);

struct ProbeReport {
    bool violated = false;
    bool rejected = false;
    std::string warning;
    std::optional<double> witness_epsilon;
    /// 1/K - (Q + err) at the witness, or the largest value over the grid when none is found.
    double margin = 0.0;
    double inverse_K = 0.0;
    std::vector<QuotientSample> samples;
};

/// Scans ε in grid order and returns the first ε with Q(ε) + err < 1/K(n,k). B = 0 is rejected.
ProbeReport probe_iopt(const ModelManifold& m, const DimensionPair& d, double B, const std::vector<double>& eps_grid,
                       unsigned jobs = 0);

/// Finite-dimensional radial space for the minimizer.
struct ProfileSpace {
    /// Number of spline intervals (= dimension), 20..200.
    int dimension = 120;
    /// Width of the first interval; <= 0 picks a tenth of the smallest starting bubble scale.
    double first_width = 0.0;
    /// Outer radius; <= 0 picks the validity radius.
    double outer_radius = 0.0;
};

struct MinimizerOptions {
    int max_iterations = 400;
    /// Stop when the predicted decrease falls below tolerance · J.
    double tolerance = 1e-12;
    /// ε of the starting test function; <= 0 selects the best projected test function on a
    /// geometric ε ladder from δ/10 down to 1e-3.
    double initial_epsilon = 0.0;
    /// Perturbation amplitude (relative) of the start and its seed; 0 uses the plain test function.
    double perturbation = 0.0;
    unsigned long long seed = 1;
};

struct MinimizationResult {
    /// J_α at the final iterate with a 20-point Gauss rule; error = difference from a 10-point rule.
    double lambda_est = 0.0;
    double lambda_error = 0.0;
    double initial_value = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> breakpoints;
    /// Coefficients in the reduced spline basis, normalised to ‖u‖_{2*} = 1.
    std::vector<double> coefficients;
    /// Profile value at geodesic radius r.
    double profile(double r) const;
};

/// Local minimisation of J_α(u) = (∫(Δ^{k/2}u)² + B α^{2k} ∫u²) / ‖u‖_{2*}² over a cubic spline
/// space with u'(0) = 0, u(R) = u'(R) = 0. Preconditioned gradient descent (A⁻¹ of the quadratic
/// form), Armijo backtracking, rescaling onto the unit L^{2*} sphere. Any output bounds λ_α above.
/// k must be 1, 2 or 3.
MinimizationResult minimize_quotient(const ModelManifold& m, const DimensionPair& d, double alpha, double B,
                                     const ProfileSpace& space = {}, const MinimizerOptions& options = {});

/// J_α evaluated for a given spline profile (used for the scaling check and certificates).
double spline_quotient(const ModelManifold& m, const DimensionPair& d, double alpha, double B,
                       const std::vector<double>& breakpoints, const std::vector<double>& coefficients);

} // namespace polysob
