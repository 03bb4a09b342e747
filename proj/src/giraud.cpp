#include "polysob/giraud.hpp"

#include "polysob/parallel.hpp"
#include "polysob/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace polysob {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

void require_dimension(int n)
{
    if (n < 2) throw std::invalid_argument("giraud: n >= 2 required");
}

// |S^{m-1}| = 2 π^{m/2} / Γ(m/2); m = 1 gives the two points of S^0.
double sphere_measure(int m) { return 2 * std::pow(std::numbers::pi, m / 2.0) / std::tgamma(m / 2.0); }

} // namespace

EnvelopeKernel EnvelopeKernel::make(double a, double p, double alpha, int n)
{
    require_dimension(n);
    if (!(a > 0 && a <= n)) throw std::invalid_argument("EnvelopeKernel: a in (0, n] required");
    if (!(p > n)) throw std::invalid_argument("EnvelopeKernel: p > n required");
    if (!(alpha > 0)) throw std::invalid_argument("EnvelopeKernel: alpha > 0 required");
    return {a, p, alpha, 0.0};
}

EnvelopeKernel EnvelopeKernel::shifted(double a, double p, double alpha, double mu, int n)
{
    require_dimension(n);
    if (!(mu > 0 && mu <= 1)) throw std::invalid_argument("EnvelopeKernel: mu in (0, 1] required");
    if (!(p > n)) throw std::invalid_argument("EnvelopeKernel: p > n required");
    if (!(a < n + p)) throw std::invalid_argument("EnvelopeKernel: a < n + p required for integrability");
    if (!(alpha > 0)) throw std::invalid_argument("EnvelopeKernel: alpha > 0 required");
    return {a, p, alpha, mu};
}

double EnvelopeKernel::operator()(double d, int n) const
{
    return std::pow(mu + d, a - n) / (1 + std::pow(alpha * d, p));
}

namespace {

// Natural radius below which the kernel is dominated by its behaviour at 0.
double kernel_scale(const EnvelopeKernel& k)
{
    double s = 1 / k.alpha;
    if (k.mu > 0) s = std::min(s, k.mu);
    return s;
}

// Exponent c with k(s) s^{n-1} ~ s^{c-1} at 0.
double kernel_order(const EnvelopeKernel& k, int n) { return k.mu > 0 ? n : k.a; }

// ∫ over {|z| < |z - y|} of C(|z|) O(|z - y|) dz in polar coordinates about 0, |y| = d.
Integral half_space_integral(const EnvelopeKernel& C, const EnvelopeKernel& O, double d, int n)
{
    const double omega = sphere_measure(n - 1);
    auto inner = [&](double s) {
        const double phi0 = s <= d / 2 ? 0.0 : std::acos(d / (2 * s));
        auto f = [&](double phi) {
            const double h = std::sin(phi / 2);
            const double rho = std::sqrt((s - d) * (s - d) + 4 * s * d * h * h);
            return O(rho, n) * std::pow(std::sin(phi), n - 2);
        };
        return omega * integrate(f, phi0, std::numbers::pi, 1e-12).value;
    };
    auto outer = [&](double s) { return s > 0 ? C(s, n) * std::pow(s, n - 1) * inner(s) : 0.0; };

    // [0, s1] through s = s1 u^{1/a}, which makes the s^{a-1} singularity flat; a shifted
    // kernel is smooth at 0 and keeps s = s1 u.
    const double s1 = std::min(d / 2, kernel_scale(C));
    const double c = C.mu > 0 ? 1.0 : C.a;
    Integral I = integrate(
        [&](double u) {
            if (u <= 0) return 0.0;
            const double s = s1 * std::pow(u, 1 / c);
            return outer(s) * s / (c * u);
        },
        0.0, 1.0, 1e-11);

    std::vector<double> breaks{s1};
    const double far = 64 * std::max({d, 1 / C.alpha, 1 / O.alpha});
    for (double x = 2 * s1; x < far; x *= 2) {
        if (breaks.back() < d / 2 && x > d / 2) breaks.push_back(d / 2);
        breaks.push_back(x);
    }
    I += integrate_pieces(outer, breaks, 1e-11);
    const double S = breaks.back();
    I += integrate([&](double t) { return t > 0 ? outer(1 / t) / (t * t) : 0.0; }, 0.0, 1 / S, 1e-11);
    return I;
}

} // namespace

ConvolutionSample convolve_radial(const EnvelopeKernel& X, const EnvelopeKernel& Y, double d, int n)
{
    require_dimension(n);
    if (!(d > 0)) throw std::invalid_argument("convolve_radial: d > 0 required");
    Integral I = half_space_integral(X, Y, d, n);
    I += half_space_integral(Y, X, d, n);
    if (!(I.error <= 1e-6 * std::abs(I.value))) {
        std::ostringstream os;
        os << "convolve_radial: quadrature did not reach 1e-6 relative at d = " << d << " (error " << I.error
           << ", value " << I.value << ")";
        throw QuadratureFailure(os.str(), 0.0, d);
    }
    return {d, I.value, I.error};
}

namespace {

// Radial proposal: law c ρ^{c-1}/L^c on [0, L) with probability 1/2, Pareto tail L/ρ² beyond.
struct RadialProposal {
    double c, L;
    double sample(double u, double v) const
    {
        return u < 0.5 ? L * std::pow(v, 1 / c) : L / (1 - v);
    }
    double radial_density(double rho) const
    {
        return rho < L ? 0.5 * c * std::pow(rho / L, c - 1) / L : 0.5 * L / (rho * rho);
    }
};

} // namespace

MonteCarloEstimate convolve_monte_carlo(const EnvelopeKernel& X, const EnvelopeKernel& Y, double d, int n,
                                        std::uint64_t samples, std::uint64_t seed, unsigned jobs)
{
    require_dimension(n);
    if (!(d > 0) || samples < 2) throw std::invalid_argument("convolve_monte_carlo: d > 0 and samples >= 2 required");
    const RadialProposal P0{kernel_order(X, n), std::min(d, kernel_scale(X))};
    const RadialProposal P1{kernel_order(Y, n), std::min(d, kernel_scale(Y))};
    const double omega = sphere_measure(n);

    constexpr std::size_t chunks = 64;
    struct Sums {
        double sum = 0, sum_sq = 0;
    };
    auto chunk = [&](std::size_t c) {
        std::seed_seq seq{seed, static_cast<std::uint64_t>(c)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::normal_distribution<double> normal;
        const std::uint64_t count = samples / chunks + (c < samples % chunks ? 1 : 0);
        std::vector<double> z(n);
        Sums s;
        for (std::uint64_t i = 0; i < count; ++i) {
            const bool from_y = unif(rng) < 0.5;
            const RadialProposal& P = from_y ? P1 : P0;
            const double rho = P.sample(unif(rng), unif(rng));
            double norm = 0;
            for (double& x : z) {
                x = normal(rng);
                norm += x * x;
            }
            norm = std::sqrt(norm);
            for (double& x : z) x *= rho / norm;
            if (from_y) z[0] += d;
            double r0 = 0, r1 = 0;
            for (int j = 0; j < n; ++j) {
                r0 += z[j] * z[j];
                const double w = j == 0 ? z[0] - d : z[j];
                r1 += w * w;
            }
            r0 = std::sqrt(r0);
            r1 = std::sqrt(r1);
            const double q = 0.5 * P0.radial_density(r0) / (omega * std::pow(r0, n - 1)) +
                             0.5 * P1.radial_density(r1) / (omega * std::pow(r1, n - 1));
            const double w = X(r0, n) * Y(r1, n) / q;
            s.sum += w;
            s.sum_sq += w * w;
        }
        return s;
    };
    const auto parts = parallel_map<Sums>(chunks, chunk, jobs);
    Sums total;
    for (const auto& p : parts) {
        total.sum += p.sum;
        total.sum_sq += p.sum_sq;
    }
    const double N = static_cast<double>(samples);
    MonteCarloEstimate e;
    e.samples = samples;
    e.value = total.sum / N;
    const double var = std::max(0.0, total.sum_sq / N - e.value * e.value);
    e.standard_error = std::sqrt(var / (N - 1));
    return e;
}

GiraudRegime giraud_regime(double a, double b, int n)
{
    const double s = a + b - n;
    if (std::abs(s) < 1e-12) return GiraudRegime::Critical;
    return s < 0 ? GiraudRegime::Subcritical : GiraudRegime::Supercritical;
}

std::string to_string(GiraudRegime r)
{
    switch (r) {
    case GiraudRegime::Subcritical: return "a+b<n";
    case GiraudRegime::Critical: return "a+b=n";
    case GiraudRegime::Supercritical: return "a+b>n";
    }
    return "?";
}

double GiraudParams::tail_exponent() const { return std::min(a + q, b + p); }

double giraud_bound(const GiraudParams& g, double alpha, double d)
{
    const double m = g.tail_exponent();
    const double t = alpha * d;
    switch (giraud_regime(g.a, g.b, g.n)) {
    case GiraudRegime::Subcritical: return std::pow(d, g.a + g.b - g.n) / (1 + std::pow(t, m));
    case GiraudRegime::Critical: return t < 0.5 ? std::abs(std::log(t)) : std::pow(t, -m);
    case GiraudRegime::Supercritical:
        return std::pow(alpha, g.n - g.a - g.b) / (1 + std::pow(t, m - g.a - g.b + g.n));
    }
    return nan_value;
}

namespace {

struct LineFit {
    double slope = 0.0, intercept = 0.0, r_squared = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    const double N = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / N, my = sy / N;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    // a flat exact line has syy = 0: a perfect fit
    f.r_squared = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
    return f;
}

void validate(const GiraudParams& g)
{
    require_dimension(g.n);
    if (!(g.a > 0 && g.a <= g.n && g.b > 0 && g.b <= g.n))
        throw std::invalid_argument("regime_verify: a, b in (0, n] required");
    if (!(g.p > g.n && g.q > g.n)) throw std::invalid_argument("regime_verify: p, q > n required");
}

} // namespace

bool GiraudReport::ok() const
{
    if (!std::isfinite(max_ratio) || !(min_ratio > 0)) return false;
    return std::all_of(fits.begin(), fits.end(), [](const ExponentFit& f) { return f.ok; });
}

GiraudReport regime_verify(const GiraudParams& g, const std::vector<double>& alpha_grid,
                           const std::vector<double>& d_grid, unsigned jobs)
{
    validate(g);
    if (alpha_grid.empty() || d_grid.empty()) throw std::invalid_argument("regime_verify: empty grid");
    GiraudReport rep;
    rep.params = g;
    rep.regime = giraud_regime(g.a, g.b, g.n);
    const std::size_t nd = d_grid.size();
    rep.samples = parallel_map<GiraudPoint>(
        alpha_grid.size() * nd,
        [&](std::size_t i) {
            const double alpha = alpha_grid[i / nd], d = d_grid[i % nd];
            const auto X = EnvelopeKernel::make(g.a, g.p, alpha, g.n);
            const auto Y = EnvelopeKernel::make(g.b, g.q, alpha, g.n);
            const auto z = convolve_radial(X, Y, d, g.n);
            return GiraudPoint{alpha, d, z.value, z.error, giraud_bound(g, alpha, d)};
        },
        jobs);

    rep.max_ratio = 0;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    for (const auto& s : rep.samples) {
        rep.max_ratio = std::max(rep.max_ratio, s.value / s.bound);
        rep.min_ratio = std::min(rep.min_ratio, s.value / s.bound);
    }

    // Z α^{a+b-n} is a function of t = αd alone on flat space; fit in (t, that).
    const double excess = g.a + g.b - g.n;
    const double m = g.tail_exponent();
    auto add_fit = [&](const std::string& window, bool log_law, double expected, auto in_window) {
        std::vector<double> x, y;
        for (const auto& s : rep.samples) {
            const double t = s.alpha * s.d;
            if (!in_window(t)) continue;
            x.push_back(std::log(t));
            const double w = s.value * std::pow(s.alpha, excess);
            y.push_back(log_law ? w : std::log(w));
        }
        if (x.size() < 3) return;
        const LineFit f = fit_line(x, y);
        ExponentFit e;
        e.window = window;
        e.fitted = f.slope;
        e.expected = expected;
        e.r_squared = f.r_squared;
        e.points = x.size();
        // R² carries no information on a flat window, where only the slope bound applies
        const bool linear = expected == 0.0 || f.r_squared >= 0.98;
        e.ok = linear && (log_law ? f.slope < 0 : std::abs(f.slope - expected) <= 0.1);
        rep.fits.push_back(e);
    };
    auto short_range = [](double t) { return t <= 0.3; };
    auto long_range = [](double t) { return t >= 3; };
    switch (rep.regime) {
    case GiraudRegime::Subcritical:
        add_fit("short", false, excess, short_range);
        add_fit("long", false, excess - m, long_range);
        break;
    case GiraudRegime::Critical:
        add_fit("log", true, nan_value, short_range);
        add_fit("long", false, -m, long_range);
        break;
    case GiraudRegime::Supercritical:
        add_fit("short", false, 0.0, short_range);
        add_fit("long", false, excess - m, long_range);
        break;
    }
    return rep;
}

MuVariantReport mu_envelope_variant(const GiraudParams& g, double alpha, const std::vector<double>& mu_grid,
                                    const std::vector<double>& d_grid, unsigned jobs)
{
    require_dimension(g.n);
    if (!(g.a + g.b < g.n)) throw std::invalid_argument("mu_envelope_variant: a + b < n required");
    if (g.b == 0) throw std::invalid_argument("mu_envelope_variant: b != 0 required");
    if (!(alpha >= 1)) throw std::invalid_argument("mu_envelope_variant: alpha >= 1 required");
    if (mu_grid.empty() || d_grid.empty()) throw std::invalid_argument("mu_envelope_variant: empty grid");
    MuVariantReport rep;
    rep.params = g;
    rep.alpha = alpha;
    const double m = g.tail_exponent();
    const std::size_t nd = d_grid.size();
    rep.samples = parallel_map<MuVariantPoint>(
        mu_grid.size() * nd,
        [&](std::size_t i) {
            const double mu = mu_grid[i / nd], d = d_grid[i % nd];
            const auto X = EnvelopeKernel::make(g.a, g.p, alpha, g.n);
            const auto Y = EnvelopeKernel::shifted(g.b, g.q, alpha, mu, g.n);
            const auto z = convolve_radial(X, Y, d, g.n);
            const double tail = 1 + std::pow(alpha * d, m);
            const double bound = g.b < 0 ? std::pow(mu, g.b) * std::pow(mu + d, g.a - g.n) / tail
                                         : std::pow(mu + d, g.a + g.b - g.n) / tail;
            return MuVariantPoint{mu, d, z.value, z.error, bound};
        },
        jobs);

    rep.max_ratio = 0;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    for (const auto& s : rep.samples) {
        rep.max_ratio = std::max(rep.max_ratio, s.value / s.bound);
        rep.min_ratio = std::min(rep.min_ratio, s.value / s.bound);
    }

    rep.fitted_mu_exponent = rep.implied_gamma = rep.r_squared = nan_value;
    if (g.b < 0 && mu_grid.size() >= 2) {
        double slope = 0, r2 = 1;
        for (std::size_t j = 0; j < nd; ++j) {
            std::vector<double> x, y;
            for (std::size_t i = 0; i < mu_grid.size(); ++i) {
                const auto& s = rep.samples[i * nd + j];
                x.push_back(std::log(s.mu));
                y.push_back(std::log(s.value * std::pow(s.mu + s.d, g.n - g.a)));
            }
            const LineFit f = fit_line(x, y);
            slope += f.slope / nd;
            r2 = std::min(r2, f.r_squared);
        }
        rep.fitted_mu_exponent = slope;
        rep.implied_gamma = g.n - slope;
        rep.r_squared = r2;
    }
    return rep;
}

} // namespace polysob
