#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace polysob {

/// Radial envelope kernel k(d) = (μ + d)^{a-n} / (1 + α^p d^p) on flat R^n (μ = 0: d^{a-n}).
struct EnvelopeKernel {
    double a = 1.0;
    double p = 1.0;
    double alpha = 1.0;
    double mu = 0.0;

    /// Standard kernel: requires a ∈ (0, n], p > n, α > 0.
    static EnvelopeKernel make(double a, double p, double alpha, int n);
    /// Shifted kernel: any real a with a < n + p (integrable at infinity), μ ∈ (0, 1], p > n.
    static EnvelopeKernel shifted(double a, double p, double alpha, double mu, int n);

    double operator()(double d, int n) const;
};

struct ConvolutionSample {
    double d = 0.0;
    double value = 0.0;
    /// Absolute quadrature error estimate.
    double error = 0.0;
};

/// Z(d) = ∫ X(|z|) Y(|z - y|) dz with |y| = d, by bipolar quadrature. The space is split
/// at the bisecting hyperplane; each half is integrated in polar coordinates about its own
/// singular point, so Z(X, Y) and Z(Y, X) use the same two pieces.
/// Throws QuadratureFailure when the estimate misses 1e-6 relative.
ConvolutionSample convolve_radial(const EnvelopeKernel& X, const EnvelopeKernel& Y, double d, int n);

struct MonteCarloEstimate {
    double value = 0.0;
    double standard_error = 0.0;
    std::uint64_t samples = 0;
};

/// Importance-sampled Z(d): half the samples radiate from 0 with the radial law of X near 0,
/// half from y with that of Y, both with Pareto tails. Deterministic for fixed (seed, samples).
MonteCarloEstimate convolve_monte_carlo(const EnvelopeKernel& X, const EnvelopeKernel& Y, double d, int n,
                                        std::uint64_t samples, std::uint64_t seed, unsigned jobs = 0);

enum class GiraudRegime { Subcritical, Critical, Supercritical };

/// a+b<n, a+b=n, a+b>n.
GiraudRegime giraud_regime(double a, double b, int n);
std::string to_string(GiraudRegime r);

struct GiraudParams {
    int n = 5;
    double a = 2.0, b = 2.0, p = 7.0, q = 7.0;
    /// min{a+q, b+p}.
    double tail_exponent() const;
};

/// Envelope bound for the regime of (a, b, n), up to a constant factor.
double giraud_bound(const GiraudParams& g, double alpha, double d);

struct ExponentFit {
    /// "short" (αd ≤ 0.3), "long" (αd ≥ 3) or "log".
    std::string window;
    double fitted = 0.0;
    double expected = 0.0;
    double r_squared = 0.0;
    std::size_t points = 0;
    /// |fitted - expected| <= 0.1 (log window: fitted < 0) and r_squared >= 0.98 unless expected = 0.
    bool ok = false;
};

struct GiraudPoint {
    double alpha = 0.0, d = 0.0, value = 0.0, error = 0.0, bound = 0.0;
};

struct GiraudReport {
    GiraudParams params;
    GiraudRegime regime = GiraudRegime::Subcritical;
    std::vector<GiraudPoint> samples;
    std::vector<ExponentFit> fits;
    /// max and min over the grid of Z / bound.
    double max_ratio = 0.0, min_ratio = 0.0;
    bool ok() const;
};

/// Z on α_grid × d_grid with fits outside the crossover window αd ∈ (0.3, 3):
/// a+b<n: slope of ln Z vs ln d at short range → a+b-n, at long range → a+b-n-min{a+q,b+p};
/// a+b=n: Z linear in ln(αd) below αd = 1/2 (slope → -c < 0, R²), long range → -min{a+q,b+p};
/// a+b>n: α^{a+b-n} Z flat at short range, long range → a+b-n-min{a+q,b+p}.
/// A fit over fewer than 3 points is omitted.
GiraudReport regime_verify(const GiraudParams& g, const std::vector<double>& alpha_grid,
                           const std::vector<double>& d_grid, unsigned jobs = 0);

struct MuVariantPoint {
    double mu = 0.0, d = 0.0, value = 0.0, error = 0.0, bound = 0.0;
};

struct MuVariantReport {
    GiraudParams params;
    double alpha = 1.0;
    std::vector<MuVariantPoint> samples;
    /// b < 0: per d, slope of ln(Z (μ+d)^{n-a}) vs ln μ, averaged over d. NaN for b > 0.
    double fitted_mu_exponent = 0.0;
    /// n - fitted_mu_exponent, the γ that makes μ^{n-γ} match.
    double implied_gamma = 0.0;
    double r_squared = 0.0;
    /// Z / bound with bound (μ+d)^{a+b-n}/(1+(αd)^m) (b > 0) or μ^{b}(μ+d)^{a-n}/(1+(αd)^m) (b < 0).
    double max_ratio = 0.0, min_ratio = 0.0;
};

/// X standard with exponent a, Y shifted: (μ+d)^{b-n}/(1+α^q d^q), b real, a+b<n.
MuVariantReport mu_envelope_variant(const GiraudParams& g, double alpha, const std::vector<double>& mu_grid,
                                    const std::vector<double>& d_grid, unsigned jobs = 0);

} // namespace polysob
