#include "polysob/quotient.hpp"

#include "polysob/bspline.hpp"
#include "polysob/parallel.hpp"
#include "polysob/quadrature.hpp"
#include "polysob/radial_cas.hpp"
#include "polysob/radial_ops.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

namespace polysob {

namespace {

std::string format_number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

} // namespace

TestFunctionFamily TestFunctionFamily::make(const ModelManifold& m, const DimensionPair& d, Cutoff cutoff,
                                            double delta, std::vector<double> center)
{
    TestFunctionFamily f;
    f.manifold = m;
    f.dims = d;
    f.profile = radial_profile(m, center);
    f.center = std::move(center);
    f.cutoff = cutoff;
    f.gauge = conformal_dress(m, d);
    f.delta = delta > 0 ? delta : 0.25 * f.profile.validity_radius;
    if (2.0 * f.delta > f.profile.validity_radius)
        throw std::invalid_argument("TestFunctionFamily: 2δ must not exceed the validity radius");
    return f;
}

TestFunction::TestFunction(TestFunctionFamily family, double epsilon)
    : fam_(std::move(family)), eps_(epsilon), a_(bubble_scale(fam_.dims).to_double())
{
    if (!(epsilon > 0) || !(epsilon < fam_.max_epsilon()))
        throw std::invalid_argument("build_test_function: need 0 < ε < δ/10 (δ/10 = " +
                                    std::to_string(fam_.max_epsilon()) + ")");
}

double TestFunction::scale() const { return eps_ / std::sqrt(a_); }

Jet TestFunction::jet(double r, int order) const
{
    if (r >= support_radius()) return Jet(0.0, order);
    const auto& g = fam_.gauge;
    const double gap = 0.5 * (fam_.dims.n - 2 * fam_.dims.k);
    Jet R = Jet::variable(r, order);
    Jet y = g.trivial ? R : 2.0 * g.rho * tan(R / (2.0 * g.rho));
    Jet yy = y * y;
    // ε^{-gap} (1 + a (y/ε)^2)^{-gap}
    Jet bubble = std::pow(eps_, -gap) * pow(1.0 + (a_ / (eps_ * eps_)) * yy, -gap);
    Jet chi = fam_.cutoff(R / fam_.delta);
    Jet u = chi * bubble;
    if (!g.trivial) u = u * pow(1.0 + yy / (4.0 * g.rho * g.rho), gap);
    return u;
}

double TestFunction::value(double r) const { return jet(r, 0).value(); }

double TestFunction::half_laplacian(double r) const
{
    const int k = fam_.dims.k;
    if (r >= support_radius()) return 0.0;
    return half_laplacian_value(fam_.profile, jet(r, k), Jet::variable(r, k), k);
}

std::vector<double> TestFunction::breakpoints() const
{
    std::vector<double> b{0.0};
    for (double x = scale() / 16.0; x < fam_.delta; x *= 2.0) b.push_back(x);
    if (fam_.cutoff.kind() == Cutoff::Kind::Sharp) {
        b.push_back(fam_.delta);
        return b;
    }
    for (int i = 0; i <= 4; ++i) b.push_back(fam_.delta * (1.0 + 0.25 * i));
    return b;
}

TestFunction build_test_function(const TestFunctionFamily& family, double epsilon)
{
    return TestFunction(family, epsilon);
}

QuotientParts quotient_parts(const TestFunction& u, double rel_tol)
{
    const auto& fam = u.family();
    const auto& p = fam.profile;
    const double omega = sphere_area(fam.dims.n).to_double();
    const double two_star = to_double(critical_exponent(fam.dims));
    const auto breaks = u.breakpoints();
    auto energy = integrate_pieces(
        [&](double r) {
            double h = u.half_laplacian(r);
            return h * h * p.volume_density(r);
        },
        breaks, rel_tol);
    auto l2 = integrate_pieces(
        [&](double r) {
            double v = u.value(r);
            return v * v * p.volume_density(r);
        },
        breaks, rel_tol);
    auto mass = integrate_pieces(
        [&](double r) { return std::pow(std::abs(u.value(r)), two_star) * p.volume_density(r); }, breaks, rel_tol);
    QuotientParts q;
    q.energy = omega * energy.value;
    q.energy_error = omega * energy.error;
    q.l2 = omega * l2.value;
    q.l2_error = omega * l2.error;
    q.mass = omega * mass.value;
    q.mass_error = omega * mass.error;
    return q;
}

QuotientSample quotient_eval(const TestFunctionFamily& family, double epsilon, double B, double rel_tol)
{
    if (B < 0) throw std::invalid_argument("quotient_eval: B >= 0 required");
    TestFunction u(family, epsilon);
    QuotientParts parts = quotient_parts(u, rel_tol);
    const double e = 2.0 / to_double(critical_exponent(family.dims));
    const double denom = std::pow(parts.mass, e);
    QuotientSample s;
    s.epsilon = epsilon;
    s.theta = theta_regime(family.dims) == Regime::Low ? std::numeric_limits<double>::quiet_NaN()
                                                        : theta_eps(family.dims, epsilon);
    s.value = (parts.energy + B * parts.l2) / denom;
    s.error = (parts.energy_error + B * parts.l2_error) / denom + s.value * e * parts.mass_error / parts.mass;
    return s;
}

Regime theta_regime(const DimensionPair& d)
{
    if (d.n > 2 * d.k + 2) return Regime::Above;
    if (d.n == 2 * d.k + 2) return Regime::Critical;
    return Regime::Low;
}

std::string regime_tag(Regime r)
{
    switch (r) {
    case Regime::Above: return "n>2k+2";
    case Regime::Critical: return "n=2k+2";
    case Regime::Low: return "n=2k+1";
    }
    return "?";
}

double theta_eps(const DimensionPair& d, double epsilon)
{
    if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("theta_eps: 0 < ε < 1 required");
    switch (theta_regime(d)) {
    case Regime::Above: return epsilon * epsilon;
    case Regime::Critical: return epsilon * epsilon * std::log(1.0 / epsilon);
    case Regime::Low: break;
    }
    throw std::domain_error("theta_eps: regime n=2k+1 has no θ_ε (remainder O(ε^{n-2k}))");
}

std::vector<double> geometric_grid(double hi, double lo, int count)
{
    if (count < 2 || !(hi > lo) || !(lo > 0)) throw std::invalid_argument("geometric_grid: need hi > lo > 0, count >= 2");
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) g[i] = hi * std::pow(lo / hi, static_cast<double>(i) / (count - 1));
    return g;
}

QuotientCurve quotient_curve(const TestFunctionFamily& family, const std::vector<double>& eps_grid, double B,
                             unsigned jobs)
{
    QuotientCurve c;
    c.dims = family.dims;
    c.B = B;
    std::vector<double> grid = eps_grid;
    std::sort(grid.begin(), grid.end(), std::greater<>());
    c.samples = parallel_map<QuotientSample>(
        grid.size(), [&](std::size_t i) { return quotient_eval(family, grid[i], B); }, jobs);
    return c;
}

double NuisanceTerm::operator()(double epsilon) const
{
    double v = std::pow(epsilon, eps_power);
    if (log_power != 0.0) v *= std::pow(std::log(1.0 / epsilon), log_power);
    return v;
}

std::string NuisanceTerm::tag() const
{
    std::string s = "eps^" + format_number(eps_power);
    if (log_power != 0.0) s += "*ln(1/eps)^" + format_number(log_power);
    return s;
}

NuisanceTerm NuisanceTerm::theta_power(const DimensionPair& d, double p)
{
    if (theta_regime(d) == Regime::Low) throw std::domain_error("theta_power: θ_ε undefined for n=2k+1");
    return {2.0 * p, theta_regime(d) == Regime::Critical ? p : 0.0};
}

std::vector<NuisanceTerm> default_nuisance(const DimensionPair& d)
{
    if (theta_regime(d) == Regime::Critical) return {{2.0, 0.0}, {4.0, 1.0}, {4.0, 0.0}};
    // cutoff tail ε^m (with its log partner), the next curvature order ε^4, the next tail order ε^{m+2}
    const double m = std::min(4, d.n - 2 * d.k);
    std::vector<NuisanceTerm> terms{{m, 0.0}, {m, 1.0}};
    if (m != 4.0) terms.push_back({4.0, 0.0});
    terms.push_back({m + 2.0, 0.0});
    return terms;
}

namespace {

struct LinearFit {
    Eigen::VectorXd beta, sigma;
    double reduced_chi2 = 0.0;
};

// Weighted least squares with column scaling; covariance scaled by max(1, reduced χ²).
LinearFit weighted_lsq(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w)
{
    Eigen::VectorXd scale = X.cwiseAbs().colwise().maxCoeff().transpose();
    Eigen::MatrixXd Xw = w.asDiagonal() * (X * scale.cwiseInverse().asDiagonal());
    Eigen::VectorXd yw = w.cwiseProduct(y);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xw);
    LinearFit f;
    Eigen::VectorXd beta = qr.solve(yw);
    f.reduced_chi2 = (yw - Xw * beta).squaredNorm() / static_cast<double>(X.rows() - X.cols());
    Eigen::MatrixXd cov = (Xw.transpose() * Xw).inverse() * std::max(1.0, f.reduced_chi2);
    f.beta = beta.cwiseQuotient(scale);
    f.sigma = cov.diagonal().cwiseSqrt().cwiseQuotient(scale);
    return f;
}

} // namespace

SlopeFit slope_fit(const QuotientCurve& curve, std::optional<std::vector<NuisanceTerm>> nuisance)
{
    SlopeFit fit;
    fit.regime = theta_regime(curve.dims);
    if (fit.regime == Regime::Low) throw std::domain_error("slope_fit: θ_ε is undefined for n=2k+1");
    fit.nuisance_terms = nuisance.value_or(default_nuisance(curve.dims));
    const int cols = 2 + static_cast<int>(fit.nuisance_terms.size());
    const int rows = static_cast<int>(curve.samples.size());
    if (rows < 6 || rows < cols + 3)
        throw std::invalid_argument("slope_fit: need at least 6 samples and three more samples than parameters");
    for (int i = 1; i < rows; ++i)
        if (!(curve.samples[i].epsilon < curve.samples[i - 1].epsilon))
            throw std::invalid_argument("slope_fit: samples must have strictly decreasing ε");

    Eigen::MatrixXd X(rows, cols);
    Eigen::VectorXd y(rows), w(rows);
    for (int i = 0; i < rows; ++i) {
        const auto& s = curve.samples[i];
        X(i, 0) = 1.0;
        X(i, 1) = theta_eps(curve.dims, s.epsilon);
        for (int j = 2; j < cols; ++j) X(i, j) = fit.nuisance_terms[j - 2](s.epsilon);
        y(i) = s.value;
        w(i) = 1.0 / std::max(s.error, 1e-12 * std::abs(s.value));
    }
    LinearFit all = weighted_lsq(X, y, w);
    // Truncation systematics: shift of the estimates when the largest-ε sample is dropped, and
    // when the next even power ε^{p+2} beyond the highest nuisance power p joins the model.
    LinearFit tail = weighted_lsq(X.bottomRows(rows - 1), y.tail(rows - 1), w.tail(rows - 1));
    double p_max = 2.0;
    for (const auto& t : fit.nuisance_terms) p_max = std::max(p_max, t.eps_power);
    Eigen::MatrixXd Xe(rows, cols + 1);
    Xe << X, Eigen::VectorXd::NullaryExpr(rows, [&](Eigen::Index i) {
        return NuisanceTerm{p_max + 2.0, 0.0}(curve.samples[i].epsilon);
    });
    LinearFit extended = weighted_lsq(Xe, y, w);
    Eigen::VectorXd sigma = (all.sigma.array().square() + (all.beta - tail.beta).array().square() +
                             (all.beta - extended.beta.head(cols)).array().square())
                                .sqrt();

    fit.reduced_chi2 = all.reduced_chi2;
    fit.intercept = all.beta(0);
    fit.intercept_sigma = sigma(0);
    fit.slope = all.beta(1);
    fit.slope_sigma = sigma(1);
    for (int j = 2; j < cols; ++j) {
        fit.nuisance.push_back(all.beta(j));
        fit.nuisance_sigma.push_back(sigma(j));
    }
    fit.residual = std::sqrt((y - X * all.beta).squaredNorm() / rows) / std::abs(fit.intercept);
    return fit;
}

double predicted_slope(const ModelManifold& m, const DimensionPair& d, double /*B: lower order*/)
{
    if (m.dimension() != d.n) throw std::invalid_argument("predicted_slope: manifold dimension differs from n");
    if (theta_regime(d) == Regime::Low) throw std::domain_error("predicted_slope: requires n >= 2k+2");
    const double R = scalar_curvature(m);
    if (R == 0.0) return 0.0;
    const double C = half_laplacian_energy(d).value.to_double();
    const double mass = sharp_constant(d).bubble_mass.to_double();
    const double e = 2.0 / to_double(critical_exponent(d));
    return -to_double(c_small(d)) * R * C / std::pow(mass, e);
}

ProbeReport probe_iopt(const ModelManifold& m, const DimensionPair& d, double B, const std::vector<double>& eps_grid,
                       unsigned jobs)
{
    ProbeReport rep;
    rep.inverse_K = sharp_constant(d).inverse_K;
    if (!(B > 0)) {
        rep.rejected = true;
        rep.warning = "B <= 0 rejected: the inequality with B <= 0 already fails on constant functions";
        return rep;
    }
    auto fam = TestFunctionFamily::make(m, d);
    rep.samples = parallel_map<QuotientSample>(
        eps_grid.size(), [&](std::size_t i) { return quotient_eval(fam, eps_grid[i], B); }, jobs);
    rep.margin = -std::numeric_limits<double>::infinity();
    for (const auto& s : rep.samples) {
        const double margin = rep.inverse_K - (s.value + s.error);
        if (margin > 0) {
            rep.violated = true;
            rep.witness_epsilon = s.epsilon;
            rep.margin = margin;
            return rep;
        }
        rep.margin = std::max(rep.margin, margin);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Spline minimiser

namespace {

struct GaussRule {
    std::vector<double> x, w; // on [-1, 1]
};

template <int N>
GaussRule gauss_rule()
{
    using G = boost::math::quadrature::gauss<double, N>;
    GaussRule r;
    const auto& a = G::abscissa();
    const auto& wt = G::weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) {
            r.x.push_back(0.0);
            r.w.push_back(wt[i]);
        } else {
            r.x.push_back(a[i]);
            r.w.push_back(wt[i]);
            r.x.push_back(-a[i]);
            r.w.push_back(wt[i]);
        }
    }
    return r;
}

// Basis values (V), signed half-Laplacian values (E) and volume weights at quadrature nodes.
struct Discretization {
    Eigen::MatrixXd V, E;
    Eigen::VectorXd W, r;
};

Discretization discretize(const RadialSplineSpace& space, const RadialMetricProfile& p, int k, const GaussRule& rule)
{
    const int N = space.dimension();
    const int nodes = N * static_cast<int>(rule.x.size());
    const double omega = sphere_area(p.n).to_double();
    Discretization D;
    D.V = Eigen::MatrixXd::Zero(nodes, N);
    D.E = Eigen::MatrixXd::Zero(nodes, N);
    D.W.resize(nodes);
    D.r.resize(nodes);
    const auto& b = space.breakpoints();
    int row = 0;
    for (int i = 0; i < N; ++i) {
        const double lo = b[i], hi = b[i + 1], half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        for (std::size_t q = 0; q < rule.x.size(); ++q, ++row) {
            const double r = mid + half * rule.x[q];
            D.r(row) = r;
            D.W(row) = omega * half * rule.w[q] * p.volume_density(r);
            Jet c = laplacian_coefficient(p, Jet::variable(r, 1));
            const double c0 = c.value(), c1 = c.coefficient(1);
            auto loc = space.evaluate(r);
            for (int j = 0; j < loc.count; ++j) {
                const double f0 = loc.value[0][j], f1 = loc.value[1][j], f2 = loc.value[2][j], f3 = loc.value[3][j];
                double e = 0.0;
                switch (k) {
                case 1: e = f1; break;
                case 2: e = -f2 - c0 * f1; break;
                case 3: e = -f3 - c1 * f1 - c0 * f2; break;
                default: throw std::invalid_argument("minimize_quotient: k in {1, 2, 3} required");
                }
                D.V(row, loc.first + j) = f0;
                D.E(row, loc.first + j) = e;
            }
        }
    }
    return D;
}

struct QuotientForm {
    Discretization D;
    Eigen::MatrixXd A;
    double two_star = 0.0;

    QuotientForm(Discretization d, double l2_coefficient, double ts) : D(std::move(d)), two_star(ts)
    {
        A = D.E.transpose() * D.W.asDiagonal() * D.E + l2_coefficient * (D.V.transpose() * D.W.asDiagonal() * D.V);
    }
    double mass(const Eigen::VectorXd& c) const
    {
        Eigen::VectorXd u = D.V * c;
        double s = 0.0;
        for (int i = 0; i < u.size(); ++i) s += D.W(i) * std::pow(std::abs(u(i)), two_star);
        return s;
    }
    double J(const Eigen::VectorXd& c) const { return c.dot(A * c) / std::pow(mass(c), 2.0 / two_star); }
};

} // namespace

double MinimizationResult::profile(double r) const
{
    RadialSplineSpace s(breakpoints);
    return s.evaluate(coefficients, r);
}

double spline_quotient(const ModelManifold& m, const DimensionPair& d, double alpha, double B,
                       const std::vector<double>& breakpoints, const std::vector<double>& coefficients)
{
    RadialSplineSpace space(breakpoints);
    QuotientForm form(discretize(space, radial_profile(m), d.k, gauss_rule<20>()), B * std::pow(alpha, 2 * d.k),
                      to_double(critical_exponent(d)));
    return form.J(Eigen::Map<const Eigen::VectorXd>(coefficients.data(), static_cast<Eigen::Index>(coefficients.size())));
}

MinimizationResult minimize_quotient(const ModelManifold& m, const DimensionPair& d, double alpha, double B,
                                     const ProfileSpace& space_opt, const MinimizerOptions& opt)
{
    if (!(alpha > 0) || !(B > 0)) throw std::invalid_argument("minimize_quotient: α > 0 and B > 0 required");
    if (d.k > 3) throw std::invalid_argument("minimize_quotient: cubic splines support k <= 3");
    if (space_opt.dimension < 20 || space_opt.dimension > 200)
        throw std::invalid_argument("minimize_quotient: profile space dimension must lie in [20, 200]");
    const double lambda = B * std::pow(alpha, 2 * d.k);
    const auto profile = radial_profile(m);
    const double two_star = to_double(critical_exponent(d));

    auto fam = TestFunctionFamily::make(m, d);
    const double eps_floor = opt.initial_epsilon > 0 ? opt.initial_epsilon : 1e-3;
    const double R = space_opt.outer_radius > 0 ? space_opt.outer_radius : profile.validity_radius;
    const double h0 = space_opt.first_width > 0 ? space_opt.first_width : 0.1 * TestFunction(fam, eps_floor).scale();
    auto space = RadialSplineSpace::graded(h0, R, space_opt.dimension);
    QuotientForm form(discretize(space, profile, d.k, gauss_rule<10>()), lambda, two_star);
    Eigen::LDLT<Eigen::MatrixXd> solver(form.A);
    if (solver.info() != Eigen::Success) throw std::runtime_error("minimize_quotient: quadratic form not factorizable");
    const auto& D = form.D;

    // Energy-norm projection of a test function onto the space.
    auto project = [&](double eps) {
        TestFunction tf(fam, eps);
        Eigen::VectorXd hv(D.r.size()), uv(D.r.size());
        for (Eigen::Index i = 0; i < D.r.size(); ++i) {
            hv(i) = tf.half_laplacian(D.r(i));
            uv(i) = tf.value(D.r(i));
        }
        Eigen::VectorXd rhs = D.E.transpose() * D.W.cwiseProduct(hv) + lambda * (D.V.transpose() * D.W.cwiseProduct(uv));
        return Eigen::VectorXd(solver.solve(rhs));
    };
    // Start: the given ε, or the projected test function with the smallest J on a geometric ε ladder.
    Eigen::VectorXd c;
    if (opt.initial_epsilon > 0) {
        c = project(opt.initial_epsilon);
    } else {
        double best = std::numeric_limits<double>::infinity();
        for (double e : geometric_grid(0.99 * fam.max_epsilon(), eps_floor, 12)) {
            Eigen::VectorXd ce = project(e);
            const double j = form.J(ce);
            if (j < best) {
                best = j;
                c = ce;
            }
        }
    }
    if (opt.perturbation > 0) {
        std::mt19937_64 rng(opt.seed);
        std::normal_distribution<double> g(0.0, 1.0);
        const double amp = opt.perturbation * c.cwiseAbs().maxCoeff();
        for (int i = 0; i < c.size(); ++i) c(i) += amp * g(rng);
    }
    auto normalize = [&](Eigen::VectorXd& v) { v *= std::pow(form.mass(v), -1.0 / two_star); };
    normalize(c);

    MinimizationResult res;
    res.initial_value = form.J(c);
    double J = res.initial_value;
    for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
        Eigen::VectorXd u = D.V * c;
        Eigen::VectorXd t(u.size());
        for (int i = 0; i < u.size(); ++i) t(i) = D.W(i) * std::pow(std::abs(u(i)), two_star - 2) * u(i);
        Eigen::VectorXd grad = 2.0 * (form.A * c) - J * 2.0 * (D.V.transpose() * t);
        Eigen::VectorXd p = -solver.solve(grad);
        const double slope = grad.dot(p);
        if (!(-slope > opt.tolerance * J)) {
            res.converged = true;
            break;
        }
        double step = 1.0;
        Eigen::VectorXd trial;
        double Jt = J;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
            trial = c + step * p;
            Jt = form.J(trial);
            if (Jt <= J + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            res.converged = true; // no descent at machine resolution
            break;
        }
        normalize(trial);
        c = trial;
        J = Jt;
    }

    QuotientForm fine(discretize(space, profile, d.k, gauss_rule<20>()), lambda, two_star);
    res.lambda_est = fine.J(c);
    res.lambda_error = std::abs(res.lambda_est - J);
    res.breakpoints = space.breakpoints();
    res.coefficients.assign(c.data(), c.data() + c.size());
    return res;
}

} // namespace polysob
