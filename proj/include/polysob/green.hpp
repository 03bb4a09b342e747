#pragma once

#include "polysob/bessel.hpp"
#include "polysob/constants.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace polysob {

/// 1/(1+t^k) = Σ_m c_m / (t - ω_m), ω_m = exp(iπ(2m+1)/k).
struct PartialFractionDecomp {
    int k = 1;
    std::vector<std::complex<double>> poles;
    std::vector<std::complex<double>> residues;

    static PartialFractionDecomp make(int k);
    std::complex<double> reconstruct(double t) const;
    std::complex<double> residue_sum() const;
};

struct GreenOptions {
    /// Significant digits requested; above 16 every evaluation uses extended precision.
    int precision_digits = 16;
    /// Below this radius the kernel sum is evaluated in extended precision (cancellation).
    double r_cancel = 0.1;
};

/// Fundamental solution Γ of Δ^k + 1 on R^n as a finite sum of Macdonald kernels:
/// Γ(r) = Σ_m c_m (2π)^{-n/2} (z_m/r)^{n/2-1} K_{n/2-1}(z_m r), z_m = sqrt(-ω_m), Re z_m > 0.
class BesselKernelSum {
public:
    explicit BesselKernelSum(DimensionPair d, GreenOptions options = {});

    const DimensionPair& dims() const { return d_; }
    const PartialFractionDecomp& decomposition() const { return pf_; }
    const std::vector<std::complex<double>>& scales() const { return z_; }
    const GreenOptions& options() const { return opt_; }
    /// min_m Re z_m, the exponential decay rate.
    double decay_rate() const;
    /// Radius below which double precision is not used (at least options().r_cancel).
    double cancellation_radius() const;

    double operator()(double r) const { return evaluate(r); }
    double evaluate(double r) const;
    /// Complex kernel sum before taking the real part (imaginary part is roundoff).
    std::complex<double> evaluate_complex(double r) const;

    /// Evaluation with a fixed scalar type (double, 50 or 100 digits).
    std::complex<double> evaluate_double(double r) const;
    Float50 evaluate_50(const Float50& r) const;
    Float100 evaluate_100(const Float100& r) const;

private:
    DimensionPair d_;
    GreenOptions opt_;
    PartialFractionDecomp pf_;
    std::vector<std::complex<double>> z_;
};

BesselKernelSum gamma_fn(const DimensionPair& d, GreenOptions options = {});

/// Γ_α(r) = α^{n-2k} Γ(α r).
double gamma_alpha(const BesselKernelSum& g, double alpha, double r);

/// ∫_{R^n} Γ dx by adaptive radial quadrature.
double green_mass(const BesselKernelSum& g);

struct SingularityFit {
    double constant = 0.0;
    /// Difference between fits of two orders; a proxy for the extrapolation error.
    double error_estimate = 0.0;
};

/// lim_{r→0} r^{n-2k} Γ(r), extrapolated from r ∈ [r_lo, r_hi] in 50-digit arithmetic.
SingularityFit singular_constant(const BesselKernelSum& g, double r_lo = 1e-2, double r_hi = 1e-1);

/// sign * sqrt(radicand) * coefficient * π^{pi_exponent}, radicand squarefree.
struct SurdConstant {
    Rational coefficient;
    BigInt radicand{1};
    int pi_exponent = 0;

    double to_double() const;
    std::string to_string() const;
};

struct L2Norm {
    double quadrature = 0.0;
    double plancherel = 0.0;
    /// Exact closed form when sin(π n/(2k)) has a rational square.
    std::optional<SurdConstant> plancherel_exact;
};

/// ∫Γ² by two routes; throws DivergenceError for n >= 4k.
L2Norm l2_norm_sq(const DimensionPair& d);

/// c_U = ∫ U^{2*-1} dx, exact.
SymbolicConstant c_U_constant(const DimensionPair& d);

struct DecayFit {
    /// slope of ln|r^{n-2k} Γ| vs r on the peaks of the envelope
    double log_linear_slope = 0.0;
    double predicted_rate = 0.0;
};

/// Envelope decay of r ↦ r^{n-2k}Γ(r) on [r_lo, r_hi].
DecayFit decay_fit(const BesselKernelSum& g, double r_lo = 5.0, double r_hi = 15.0);

} // namespace polysob
