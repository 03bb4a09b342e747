#include "polysob/regimes.hpp"

#include "polysob/bessel.hpp"
#include "polysob/green.hpp"
#include "polysob/parallel.hpp"
#include "polysob/quadrature.hpp"
#include "polysob/radial_cas.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace polysob {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

double gap_half(const DimensionPair& d) { return (d.n - 2 * d.k) / 2.0; }

double require_beta_below_one(const BlowupParams& p, const char* who)
{
    const double b = p.beta();
    if (!(b > 0 && b < 1)) throw std::domain_error(std::string(who) + ": requires 0 < alpha*mu < 1");
    return b;
}

} // namespace

// ---------------------------------------------------------------------------

double default_tau(const DimensionPair& d)
{
    const double t = std::min(2.0, gap_half(d));
    return d.n == 2 * d.k + 1 ? t / 2 : t;
}

BlowupParams BlowupParams::make(double alpha, double mu, double tau, const DimensionPair& d)
{
    if (!(alpha > 0) || !(mu > 0)) throw std::invalid_argument("BlowupParams: alpha and mu must be positive");
    if (alpha * mu > 1) throw std::invalid_argument("BlowupParams: alpha*mu <= 1 required");
    if (!(tau > 0) || tau > std::min(2.0, gap_half(d)))
        throw std::invalid_argument("BlowupParams: 0 < tau <= min(2, (n-2k)/2) required");
    return {alpha, mu, tau};
}

BlowupParams BlowupParams::make(double alpha, double mu, const DimensionPair& d)
{
    return make(alpha, mu, default_tau(d), d);
}

RegimeValue sigma(const BlowupParams& p, const DimensionPair& d)
{
    const double b = require_beta_below_one(p, "sigma");
    const int edge = 2 * d.k + 4;
    if (d.n > edge) return {b * b, "n>2k+4", "(alpha mu)^2"};
    if (d.n == edge) return {b * b * std::log(1 / b), "n=2k+4", "(alpha mu)^2 ln(1/(alpha mu))"};
    return {std::pow(b, gap_half(d)), "n<2k+4", "(alpha mu)^((n-2k)/2)"};
}

ThetaPair theta_pair(const BlowupParams& p, const DimensionPair& d)
{
    const double b = require_beta_below_one(p, "theta_pair");
    const double mu = p.mu, L = std::log(1 / b);
    ThetaPair t;
    const int edge = 2 * d.k + 4;
    if (d.n > edge)
        t.theta = {std::pow(mu, 4), "n>2k+4", "mu^4"};
    else if (d.n == edge)
        t.theta = {std::pow(mu, 4) * L, "n=2k+4", "mu^4 ln(1/(alpha mu))"};
    else
        t.theta = {std::pow(mu, d.n - 2 * d.k) / std::pow(p.alpha, edge - d.n), "n<2k+4",
                   "mu^(n-2k) / alpha^(2k+4-n)"};

    const double edge2 = 2 * d.k + 2 + p.tau;
    if (d.n > edge2)
        t.theta_prime = {mu * mu * std::pow(b, p.tau), "n>2k+2+tau", "mu^2 (alpha mu)^tau"};
    else if (d.n == edge2)
        t.theta_prime = {mu * mu * std::pow(b, p.tau) * L, "n=2k+2+tau", "mu^2 (alpha mu)^tau ln(1/(alpha mu))"};
    else
        t.theta_prime = {mu * mu * std::pow(b, d.n - 2 * d.k - 2), "n<2k+2+tau", "mu^2 (alpha mu)^(n-2k-2)"};
    return t;
}

// ---------------------------------------------------------------------------
// Truncated bubble in the blow-up variable s = x/μ: V̂(μ s) = μ^{-(n-2k)/2} χ(β s) U(s).

namespace {

// Δ = -(d²/dr² + (n-1)/r d/dr) written in s = r²: -(4s F'' + 2n F').
Jet laplacian_s(const Jet& F, const Jet& S, int n)
{
    const int m = F.order() - 2;
    const Jet d1 = F.derivative();
    return -(4.0 * S.truncated(m) * d1.derivative() + 2.0 * n * d1.truncated(m));
}

// Δ^{q/2} f (q even) or |∇Δ^{(q-1)/2} f| (q odd) at radius r, from the jet F of f in s = r².
double half_laplacian_s(const Jet& F, double r, int n, int q)
{
    const Jet S = Jet::variable(r * r, F.order());
    Jet g = F;
    for (int i = 0; i < q / 2; ++i) g = laplacian_s(g, S, n);
    return q % 2 == 0 ? g.value() : 2 * r * g.coefficient(1);
}

struct ScaledBubble {
    DimensionPair d;
    double a;
    double beta;
    RegimeOptions opt;

    /// Jet in w = s² at w = s0².
    Jet jet_sq(double s0, int order) const
    {
        const Jet W = Jet::variable(s0 * s0, order);
        Jet u = pow(1.0 + a * W, -gap_half(d));
        if (opt.no_cutoff || beta * s0 <= opt.cutoff.inner()) return u;
        return opt.cutoff(pow(W, 0.5) * beta) * u;
    }
    double value(double s) const
    {
        const double u = std::pow(1.0 + a * s * s, -gap_half(d));
        return opt.no_cutoff ? u : opt.cutoff(beta * s) * u;
    }
    /// Dyadic breakpoints up to 1/β and the cutoff annulus.
    std::vector<double> breaks(double upto) const
    {
        std::vector<double> b{0.0};
        for (double x = 0.125; x < upto; x *= 2) b.push_back(x);
        b.push_back(upto);
        return b;
    }
};

// ∫_0^∞ f over [0, S] in pieces and [S, ∞) through s = 1/t.
Integral integrate_to_infinity(const std::function<double(double)>& f, std::vector<double> breaks, double rel_tol)
{
    Integral I = integrate_pieces(f, breaks, rel_tol);
    const double S = breaks.back();
    I += integrate([&](double t) { return t > 0 ? f(1 / t) / (t * t) : 0.0; }, 0.0, 1.0 / S, rel_tol);
    return I;
}

Integral scaled_integral(const ScaledBubble& v, const std::function<double(double)>& density, double rel_tol)
{
    if (v.opt.no_cutoff) return integrate_to_infinity(density, v.breaks(64.0), rel_tol);
    auto b = v.breaks(1 / v.beta);
    if (v.opt.cutoff.kind() != Cutoff::Kind::Sharp)
        for (double f : {1.25, 1.5, 1.75, 2.0}) b.push_back(f / v.beta);
    return integrate_pieces(density, b, rel_tol);
}

} // namespace

RegimeMeasurement gradient_energy_regime(const BlowupParams& p, const DimensionPair& d, const RegimeOptions& opt)
{
    const double b = require_beta_below_one(p, "gradient_energy_regime");
    if (opt.no_cutoff && d.n <= 2 * d.k + 2)
        throw std::domain_error("gradient_energy_regime: without cutoff the energy diverges for n <= 2k+2");
    const ScaledBubble v{d, bubble_scale(d).to_double(), b, opt};
    const double omega = sphere_area(d.n).to_double();
    const int q = d.k - 1;
    auto density = [&](double s) {
        const double h = half_laplacian_s(v.jet_sq(s, q), s, d.n, q);
        return omega * h * h * std::pow(s, d.n - 1);
    };
    const Integral I = scaled_integral(v, density, opt.rel_tol);

    RegimeMeasurement m;
    const double mu2 = p.mu * p.mu;
    m.measured = mu2 * I.value;
    m.error = mu2 * I.error;
    if (d.n > 2 * d.k + 2) {
        m.tag = "n>2k+2";
        m.normalization = mu2;
        m.reference = half_laplacian_energy(d).value.to_double();
    } else if (d.n == 2 * d.k + 2) {
        m.tag = "n=2k+2";
        m.normalization = mu2 * std::log(1 / b);
        m.reference = half_laplacian_energy(d).value.to_double();
    } else {
        m.tag = "n=2k+1";
        m.normalization = p.mu / p.alpha;
        m.reference = nan_value;
    }
    m.constant = m.measured / m.normalization;
    return m;
}

RegimeMeasurement l2_mass_regime(const BlowupParams& p, const DimensionPair& d, const RegimeOptions& opt)
{
    const double b = require_beta_below_one(p, "l2_mass_regime");
    const ScaledBubble v{d, bubble_scale(d).to_double(), b, opt};
    const double omega = sphere_area(d.n).to_double();
    const double b2k = std::pow(b, 2 * d.k);
    RegimeMeasurement m;

    if (d.n >= 4 * d.k) {
        if (opt.no_cutoff && d.n == 4 * d.k) throw std::domain_error("l2_mass_regime: U is not in L^2 for n = 4k");
        auto density = [&](double s) {
            const double u = v.value(s);
            return omega * u * u * std::pow(s, d.n - 1);
        };
        const Integral I = scaled_integral(v, density, opt.rel_tol);
        m.measured = b2k * I.value;
        m.error = b2k * I.error;
        const auto U = bubble_fn(d);
        if (d.n > 4 * d.k) {
            m.tag = "n>4k";
            m.normalization = b2k;
            m.reference = energy_integral(U * U, d).to_double();
        } else {
            m.tag = "n=4k";
            m.normalization = b2k * std::log(1 / b);
            m.reference = flux_coefficient(U * U, d).to_double();
        }
        m.constant = m.measured / m.normalization;
        return m;
    }

    // composite model: near field U_μ inside |x| < 1/(Rα), far field μ^{(n-2k)/2} c_U Γ_α outside
    const double R = opt.crossover_R;
    if (!(R > 1)) throw std::invalid_argument("l2_mass_regime: crossover radius R > 1 required");
    const double a = v.a, g = gap_half(d);
    const Integral near = integrate_pieces(
        [&](double s) { return omega * std::pow(1 + a * s * s, -2 * g) * std::pow(s, d.n - 1); }, v.breaks(1 / (R * b)),
        opt.rel_tol);

    const auto G = gamma_fn(d);
    const double cU = c_U_constant(d).to_double();
    const double Xmax = 40.0 / G.decay_rate();
    std::vector<double> fb{1 / R};
    for (double x = 0.25; x < Xmax; x *= 2)
        if (x > fb.back()) fb.push_back(x);
    fb.push_back(Xmax);
    const Integral far = integrate_pieces(
        [&](double x) {
            const double gx = G(x);
            return omega * gx * gx * std::pow(x, d.n - 1);
        },
        fb, opt.rel_tol);

    const double bg = std::pow(b, d.n - 2 * d.k);
    m.tag = "n<4k";
    m.near_field = b2k * near.value;
    m.far_field = bg * cU * cU * far.value;
    m.measured = m.near_field + m.far_field;
    m.error = b2k * near.error + bg * cU * cU * far.error;
    m.normalization = bg;
    m.reference = cU * cU * l2_norm_sq(d).plancherel;
    m.constant = m.measured / m.normalization;
    return m;
}

LogLawFit fit_log_law(const std::vector<double>& beta, const std::vector<double>& y)
{
    if (beta.size() != y.size() || beta.size() < 2) throw std::invalid_argument("fit_log_law: need >= 2 paired samples");
    const double N = static_cast<double>(beta.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < beta.size(); ++i) {
        const double x = std::log(1 / beta[i]);
        sx += x;
        sy += y[i];
        sxx += x * x;
        sxy += x * y[i];
    }
    const double det = N * sxx - sx * sx;
    if (det == 0) throw std::invalid_argument("fit_log_law: beta values must differ");
    LogLawFit f;
    f.c = (N * sxy - sx * sy) / det;
    f.b = (sy - f.c * sx) / N;
    return f;
}

// ---------------------------------------------------------------------------
// Pohozaev integral

PohozaevProfile PohozaevProfile::bubble(double mu, double delta, Cutoff cutoff)
{
    if (!(mu > 0) || !(delta > 0)) throw std::invalid_argument("PohozaevProfile: mu and delta must be positive");
    PohozaevProfile p;
    p.shape = Shape::Bubble;
    p.mu = mu;
    p.delta = delta;
    p.cutoff = cutoff;
    return p;
}

PohozaevProfile PohozaevProfile::polynomial(std::vector<double> coefficients, double delta, Cutoff cutoff)
{
    if (coefficients.empty()) throw std::invalid_argument("PohozaevProfile: empty polynomial");
    if (!(delta > 0)) throw std::invalid_argument("PohozaevProfile: delta must be positive");
    PohozaevProfile p;
    p.shape = Shape::Polynomial;
    p.coefficients = std::move(coefficients);
    p.delta = delta;
    p.cutoff = cutoff;
    return p;
}

PohozaevProfile PohozaevProfile::with_bump(int M) const
{
    if (M < 1) throw std::invalid_argument("PohozaevProfile: bump power must be positive");
    PohozaevProfile p = *this;
    p.bump_power = M;
    return p;
}

std::vector<double> PohozaevProfile::breakpoints() const
{
    std::vector<double> b{0.0};
    if (shape == Shape::Bubble)
        for (double x = mu / 4; x < delta; x *= 2) b.push_back(x);
    if (bump_power > 0)
        for (double f : {0.5, 0.75, 0.875}) b.push_back(f * delta);
    std::sort(b.begin(), b.end());
    b.push_back(delta);
    if (bump_power == 0 && compact())
        for (double f : {1.25, 1.5, 1.75, 2.0}) b.push_back(f * delta);
    return b;
}

std::string PohozaevProfile::describe() const
{
    std::ostringstream os;
    if (shape == Shape::Bubble)
        os << "bubble(mu=" << mu << ")";
    else
        os << "polynomial(degree " << 2 * (coefficients.size() - 1) << " in r)";
    if (bump_power > 0)
        os << " x (1-r^2/" << delta * delta << ")^" << bump_power;
    else
        os << " x cutoff(r/" << delta << ")" << (compact() ? "" : " [sharp]");
    return os.str();
}

namespace {

// The core profile as a function of s = r², for s a Jet or a Float50.
template <class T>
T profile_core(const PohozaevProfile& u, const DimensionPair& d, const T& s)
{
    if (u.shape == PohozaevProfile::Shape::Bubble) {
        const double a = bubble_scale(d).to_double() / (u.mu * u.mu);
        const double g = gap_half(d);
        if constexpr (std::is_same_v<T, Jet>)
            return pow(1.0 + a * s, -g) * std::pow(u.mu, -g);
        else
            return T(pow(T(1) + T(a) * s, T(-g)) * T(std::pow(u.mu, -g)));
    }
    T acc = s * 0.0 + u.coefficients.back();
    for (int i = static_cast<int>(u.coefficients.size()) - 2; i >= 0; --i) acc = acc * s + u.coefficients[i];
    return acc;
}

// Jet in s = r² at s = r0²: radial calculus in s has no 1/r factor, so it stays accurate near 0.
Jet profile_jet_s(const PohozaevProfile& u, const DimensionPair& d, double r0, int order)
{
    const Jet S = Jet::variable(r0 * r0, order);
    if (u.bump_power > 0) {
        if (r0 >= u.delta) return Jet(0.0, order);
        return pow(1.0 - S / (u.delta * u.delta), u.bump_power) * profile_core(u, d, S);
    }
    if (r0 <= u.cutoff.inner() * u.delta) return profile_core(u, d, S);
    return u.cutoff(pow(S, 0.5) / u.delta) * profile_core(u, d, S);
}

// Polynomial envelope only; the finite-difference route never sees a non-analytic χ.
Float50 profile_50(const PohozaevProfile& u, const DimensionPair& d, const Float50& r)
{
    const Float50 w = 1 - r * r / (u.delta * u.delta);
    if (w <= 0) return 0;
    return pow(w, u.bump_power) * profile_core(u, d, Float50(r * r));
}

// Fornberg weights for the m-th derivative at 0 on the nodes x.
std::vector<Float50> fornberg(const std::vector<Float50>& x, int m)
{
    const int N = static_cast<int>(x.size());
    std::vector<std::vector<Float50>> c(N, std::vector<Float50>(m + 1, Float50(0)));
    Float50 c1 = 1, c4 = x[0];
    c[0][0] = 1;
    for (int i = 1; i < N; ++i) {
        const int mn = std::min(i, m);
        Float50 c2 = 1;
        const Float50 c5 = c4;
        c4 = x[i];
        for (int j = 0; j < i; ++j) {
            const Float50 c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<Float50> w(N);
    for (int i = 0; i < N; ++i) w[i] = c[i][m];
    return w;
}

// Δ of a radial Taylor series in h about r0, one order lower by two.
std::vector<Float50> laplacian_series(const std::vector<Float50>& c, const Float50& r0, int n)
{
    const int m = static_cast<int>(c.size()) - 1;
    std::vector<Float50> out(std::max(0, m - 1));
    for (int i = 0; i + 2 <= m; ++i) {
        Float50 acc = -Float50((i + 2) * (i + 1)) * c[i + 2];
        Float50 inv = 1 / r0, sum = 0;
        for (int j = 0; j <= i; ++j) {
            sum += inv * Float50(i - j + 1) * c[i - j + 1];
            inv *= -1 / r0;
        }
        out[i] = acc - Float50(n - 1) * sum;
    }
    return out;
}

} // namespace

PohozaevResult pohozaev_check(const PohozaevProfile& u, const DimensionPair& d, double tolerance)
{
    const double omega = sphere_area(d.n).to_double();
    const double g = gap_half(d);
    const int order = 2 * d.k;
    auto integrand = [&](double r) {
        const Jet F = profile_jet_s(u, d, r, order);
        const double lap = half_laplacian_s(F, r, d.n, order);
        // r u' = 2 s F'(s)
        return omega * lap * (g * F.value() + 2 * r * r * F.coefficient(1)) * std::pow(r, d.n - 1);
    };
    const Integral I = integrate_pieces(integrand, u.breakpoints(), 1e-13);
    PohozaevResult res;
    res.residual = I.value;
    res.magnitude = I.l1;
    res.relative = I.l1 > 0 ? std::abs(I.value) / I.l1 : 0.0;
    res.flagged = res.relative > tolerance;
    return res;
}

PohozaevRefinement pohozaev_refinement(const PohozaevProfile& u, const DimensionPair& d, double h0, int levels)
{
    if (!(h0 > 0) || levels < 2) throw std::invalid_argument("pohozaev_refinement: h0 > 0 and levels >= 2 required");
    if (u.bump_power < 2 * d.k + 8)
        throw std::invalid_argument("pohozaev_refinement: needs the polynomial envelope with power >= 2k+8");
    const int K = 2 * d.k;
    const int half = 3 + d.k; // central stencil: order 2·half + 2 - 2k = 8 for the top derivative
    std::vector<Float50> offsets;
    for (int i = -half; i <= half; ++i) offsets.push_back(Float50(i));
    std::vector<std::vector<Float50>> weights;
    for (int j = 0; j <= K; ++j) weights.push_back(fornberg(offsets, j));

    using Rule = boost::math::quadrature::gauss<double, 20>;
    std::vector<double> nodes, wts;
    {
        auto b = u.breakpoints();
        std::vector<double> fine{b.front()};
        for (std::size_t i = 1; i < b.size(); ++i)
            for (int j = 1; j <= 4; ++j) fine.push_back(b[i - 1] + (b[i] - b[i - 1]) * j / 4.0);
        for (std::size_t i = 1; i < fine.size(); ++i) {
            const double mid = 0.5 * (fine[i] + fine[i - 1]), rad = 0.5 * (fine[i] - fine[i - 1]);
            const auto& x = Rule::abscissa();
            const auto& w = Rule::weights();
            for (std::size_t q = 0; q < x.size(); ++q)
                for (int sgn : {-1, 1}) {
                    if (q == 0 && sgn == 1 && x[0] == 0) continue;
                    nodes.push_back(mid + sgn * rad * x[q]);
                    wts.push_back(rad * w[q]);
                }
        }
    }

    const double omega = sphere_area(d.n).to_double();
    const Float50 g = gap_half(d);
    PohozaevRefinement out;
    std::vector<Float50> totals;
    for (int level = 0; level < levels; ++level) {
        const double h = h0 / std::pow(2.0, level);
        Float50 total = 0;
        for (std::size_t q = 0; q < nodes.size(); ++q) {
            const Float50 r0 = nodes[q];
            std::vector<Float50> f(offsets.size());
            for (std::size_t i = 0; i < offsets.size(); ++i) f[i] = profile_50(u, d, abs(r0 + offsets[i] * h));
            std::vector<Float50> c(K + 1);
            Float50 hj = 1, fact = 1;
            for (int j = 0; j <= K; ++j) {
                Float50 s = 0;
                for (std::size_t i = 0; i < f.size(); ++i) s += weights[j][i] * f[i];
                c[j] = s / (hj * fact);
                hj *= h;
                fact *= j + 1;
            }
            const Float50 T = g * c[0] + r0 * c[1];
            std::vector<Float50> L = c;
            for (int i = 0; i < d.k; ++i) L = laplacian_series(L, r0, d.n);
            total += Float50(wts[q] * omega) * L[0] * T * pow(r0, d.n - 1);
        }
        out.h.push_back(h);
        out.residual.push_back(static_cast<double>(total));
        totals.push_back(total);
    }
    // differences cancel the (h-independent) quadrature error; kept in 50 digits
    for (int i = 0; i + 2 < levels; ++i) {
        const Float50 a = totals[i] - totals[i + 1], b = totals[i + 1] - totals[i + 2];
        out.observed_order.push_back(static_cast<double>(log2(abs(a / b))));
    }
    return out;
}

// ---------------------------------------------------------------------------

BalanceTable balance_table(const ModelManifold& m, const DimensionPair& d, const std::vector<BlowupParams>& family,
                           const RegimeOptions& opt, unsigned jobs)
{
    if (m.dimension() != d.n) throw std::invalid_argument("balance_table: manifold dimension differs from n");
    if (family.empty()) throw std::invalid_argument("balance_table: empty parameter family");
    const double Rg = scalar_curvature(m);
    const double cnk = to_double(c_small(d));
    BalanceTable t;
    t.dims = d;
    t.rows = parallel_map<BalanceRow>(
        family.size(),
        [&](std::size_t i) {
            const auto& p = family[i];
            const auto grad = gradient_energy_regime(p, d, opt);
            const auto l2 = l2_mass_regime(p, d, opt);
            const auto th = theta_pair(p, d);
            BalanceRow row;
            row.params = p;
            row.term_curvature = cnk * Rg * grad.measured;
            row.term_l2 = d.k * l2.measured;
            row.theta = th.theta.value;
            row.theta_prime = th.theta_prime.value;
            row.imbalance = row.term_l2 / (row.theta + row.theta_prime);
            row.regime = grad.tag + ";" + l2.tag;
            return row;
        },
        jobs);

    const auto& first = t.rows.front();
    const auto& last = t.rows.back();
    std::ostringstream os;
    if (d.n == 2 * d.k + 1) {
        os << "n=2k+1: the L2 term (order alpha*mu) exceeds the O(mu/alpha) remaining terms by a factor growing from "
           << first.imbalance << " to " << last.imbalance << " (alpha^2 growth); no geometry can balance it";
    } else if (Rg == 0) {
        os << "flat: the curvature term vanishes, so the L2 term must be O(theta + theta'); it exceeds that bound by "
           << "a factor growing from " << first.imbalance << " to " << last.imbalance << ": contradiction";
    } else if (last.term_curvature > last.term_l2) {
        os << "curvature term dominates the L2 term (ratio " << last.term_curvature / last.term_l2
           << " at the last row); the balance forces " << (Rg > 0 ? "R_g >= 0, satisfied here" : "R_g >= 0, violated here");
    } else {
        os << "L2 term dominates the curvature term (ratio " << last.term_l2 / last.term_curvature
           << " at the last row); the balance forces R_g > 0" << (Rg > 0 ? ", satisfied here" : ", violated here");
    }
    t.conclusion = os.str();
    return t;
}

} // namespace polysob
