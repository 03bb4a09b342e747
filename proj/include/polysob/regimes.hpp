#pragma once

#include "polysob/constants.hpp"
#include "polysob/cutoff.hpp"
#include "polysob/geometry.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace polysob {

/// Blow-up parameters: diverging α, concentration scale μ, decay index τ.
struct BlowupParams {
    double alpha = 1.0;
    double mu = 1.0;
    double tau = 1.0;

    /// Validates αμ ≤ 1 and 0 < τ ≤ min(2, (n-2k)/2).
    static BlowupParams make(double alpha, double mu, double tau, const DimensionPair& d);
    /// τ from default_tau(d).
    static BlowupParams make(double alpha, double mu, const DimensionPair& d);
    double beta() const { return alpha * mu; }
};

/// min(2, (n-2k)/2), halved for n = 2k+1 where τ < 1/2 is needed.
double default_tau(const DimensionPair& d);

struct RegimeValue {
    double value = 0.0;
    /// Branch of the case table, e.g. "n>2k+4".
    std::string tag;
    /// Leading expression of the branch, e.g. "(alpha mu)^2".
    std::string leading;
};

/// (αμ)², (αμ)² ln(1/αμ) or (αμ)^{(n-2k)/2} by n against 2k+4. Requires αμ < 1.
RegimeValue sigma(const BlowupParams& p, const DimensionPair& d);

struct ThetaPair {
    RegimeValue theta, theta_prime;
};

/// θ branches on n against 2k+4, θ' on n against 2k+2+τ.
ThetaPair theta_pair(const BlowupParams& p, const DimensionPair& d);

struct RegimeOptions {
    Cutoff cutoff{};
    /// Replace χ by 1 on all of R^n (pure scaling check; needs n > 2k+2 for the energy).
    bool no_cutoff = false;
    /// Crossover of the composite L² model at |x| = 1/(Rα).
    double crossover_R = 20.0;
    double rel_tol = 1e-11;
};

struct RegimeMeasurement {
    double measured = 0.0;
    double error = 0.0;
    /// Regime normalization: μ², μ² ln(1/αμ), μ/α, (αμ)^{2k}, ...
    double normalization = 0.0;
    /// measured / normalization.
    double constant = 0.0;
    /// Exact limit of `constant` when known, NaN otherwise.
    double reference = 0.0;
    std::string tag;
    /// Composite L² model only: the two pieces of `measured`.
    double near_field = 0.0, far_field = 0.0;

    double relative_to_reference() const { return constant / reference; }
};

/// ∫(Δ^{(k-1)/2} V̂)² dx for the truncated bubble V̂(x) = χ(α|x|) U_μ(x) on flat R^n.
RegimeMeasurement gradient_energy_regime(const BlowupParams& p, const DimensionPair& d, const RegimeOptions& opt = {});

/// α^{2k}∫V̂² for n ≥ 4k; for n < 4k the composite model: U_μ for |x| < 1/(Rα) and the
/// far field μ^{(n-2k)/2} c_U Γ_α beyond.
RegimeMeasurement l2_mass_regime(const BlowupParams& p, const DimensionPair& d, const RegimeOptions& opt = {});

/// Least-squares fit y = c ln(1/β) + b.
struct LogLawFit {
    double c = 0.0, b = 0.0;
};
LogLawFit fit_log_law(const std::vector<double>& beta, const std::vector<double>& y);

/// Radial profile core(r)·envelope(r), where core is the bubble (1 + a r²/μ²)^{-(n-2k)/2} μ^{-(n-2k)/2}
/// or a polynomial in r², and the envelope is χ(r/δ) (support [0, 2δ], or [0, δ] when sharp) or,
/// with bump_power = M > 0, (1 - r²/δ²)_+^M (support [0, δ], C^{M-1}).
struct PohozaevProfile {
    enum class Shape { Bubble, Polynomial };
    Shape shape = Shape::Bubble;
    double mu = 1.0;
    std::vector<double> coefficients;
    double delta = 1.0;
    Cutoff cutoff{};
    int bump_power = 0;

    static PohozaevProfile bubble(double mu, double delta, Cutoff cutoff = Cutoff());
    static PohozaevProfile polynomial(std::vector<double> coefficients, double delta, Cutoff cutoff = Cutoff());
    /// Same core with the polynomial envelope of power M.
    PohozaevProfile with_bump(int M) const;
    /// Compactly supported with enough smoothness for the identity (anything but a sharp cutoff).
    bool compact() const { return bump_power > 0 || cutoff.kind() != Cutoff::Kind::Sharp; }
    double outer() const { return bump_power > 0 ? delta : cutoff.outer() * delta; }
    std::vector<double> breakpoints() const;
    std::string describe() const;
};

struct PohozaevResult {
    /// ∫ Δ^k u · T(u) dx with T(u) = (n-2k)/2 u + r u'.
    double residual = 0.0;
    /// ∫ |Δ^k u · T(u)| dx.
    double magnitude = 0.0;
    double relative = 0.0;
    /// relative above the tolerance: boundary terms did not vanish.
    bool flagged = false;
};

/// Exact-derivative (Taylor jet) evaluation of the Pohozaev integral on flat R^n.
PohozaevResult pohozaev_check(const PohozaevProfile& u, const DimensionPair& d, double tolerance = 1e-7);

struct PohozaevRefinement {
    std::vector<double> h;
    /// Integral with Δ^k u and u' from 8th-order central differences of step h.
    std::vector<double> residual;
    /// log2 of successive difference ratios; ≈ 8.
    std::vector<double> observed_order;
};

/// The same integral with 50-digit finite differences at steps h0, h0/2, .... Requires the
/// polynomial envelope with M >= 2k+8: stencils straddling r = δ then contribute O(h^{M-2k+1}).
PohozaevRefinement pohozaev_refinement(const PohozaevProfile& u, const DimensionPair& d, double h0, int levels = 3);

struct BalanceRow {
    BlowupParams params;
    /// c_{n,k} R_g ∫(Δ^{(k-1)/2} V̂)².
    double term_curvature = 0.0;
    /// k α^{2k} ∫û² in the regime model.
    double term_l2 = 0.0;
    double theta = 0.0, theta_prime = 0.0;
    /// term_l2 / (θ + θ'): growth means the L² term cannot be absorbed by the error terms.
    double imbalance = 0.0;
    std::string regime;
};

struct BalanceTable {
    DimensionPair dims;
    std::vector<BalanceRow> rows;
    std::string conclusion;
};

/// Terms of c_{n,k} R_g ∫(Δ^{(k-1)/2}V̂)² - k α^{2k}∫û² = O(θ) + O(θ') along a parameter family.
BalanceTable balance_table(const ModelManifold& m, const DimensionPair& d, const std::vector<BlowupParams>& family,
                           const RegimeOptions& opt = {}, unsigned jobs = 0);

} // namespace polysob
