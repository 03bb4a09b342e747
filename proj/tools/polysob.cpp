#include "cli_common.hpp"

#include "polysob/constants.hpp"
#include "polysob/giraud.hpp"
#include "polysob/green.hpp"
#include "polysob/quotient.hpp"
#include "polysob/radial_cas.hpp"
#include "polysob/regimes.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>

using namespace polysob;
using namespace polysob::cli;
using nlohmann::json;

namespace {

// Options shared by every subcommand.
struct Common {
    int n = 6, k = 2;
    std::string config, out, summary;
    int precision = 16;
    unsigned jobs = 0;
    std::uint64_t seed = 1;
};

struct ManifoldOptions {
    std::string kind = "sphere";
    double radius = 1.0;
    double period = 2 * std::numbers::pi;

    ModelManifold make(int n) const
    {
        if (kind == "sphere") return ModelManifold::sphere(n, radius);
        if (kind == "torus") return ModelManifold::torus(n, period);
        throw UsageFailure("--manifold must be sphere or torus");
    }
};

struct Outcome {
    json result;
    bool pass = true;
};

struct Subcommand {
    CLI::App* app = nullptr;
    std::function<Outcome()> run;
};

void add_common(CLI::App* app, Common& c, bool with_k = true)
{
    app->add_option("--n", c.n, "dimension n")->capture_default_str();
    if (with_k) app->add_option("--k", c.k, "order k (2 <= 2k < n)")->capture_default_str();
    app->add_option("--config", c.config, "JSON file of option values; explicit flags win");
    app->add_option("--out", c.out, "write the table (CSV) or report (JSON) here");
    app->add_option("--summary", c.summary, "also write the JSON summary here");
    app->add_option("--precision", c.precision, "significant digits (default: POLYSOB_PRECISION or 16)")
        ->capture_default_str();
    app->add_option("--jobs", c.jobs, "worker threads (0 = hardware concurrency)")->capture_default_str();
    app->add_option("--seed", c.seed, "seed of Monte Carlo oracles")->capture_default_str();
}

void add_manifold(CLI::App* app, ManifoldOptions& m)
{
    app->add_option("--manifold", m.kind, "sphere or torus")->capture_default_str();
    app->add_option("--radius", m.radius, "sphere radius")->capture_default_str();
    app->add_option("--period", m.period, "torus period")->capture_default_str();
}

// Effective configuration: every option except outputs, config and help.
json effective_config(const CLI::App* app)
{
    json j;
    j["subcommand"] = app->get_name();
    for (const CLI::Option* o : app->get_options()) {
        const std::string name = o->get_single_name();
        if (name.empty() || name == "help" || name == "config" || name == "out" || name == "summary" ||
            name == "jobs")
            continue;
        if (o->count() > 0) {
            const auto& r = o->results();
            j[name] = r.empty() ? "true" : r.back();
        } else {
            j[name] = o->get_default_str();
        }
    }
    return j;
}

// Arguments equivalent to the config file, placed before the user's flags so that those win.
std::vector<std::string> config_arguments(const json& cfg, const std::string& subcommand)
{
    std::vector<std::string> args;
    for (const auto& [key, value] : cfg.items()) {
        if (key == "subcommand") {
            if (value != subcommand) throw UsageFailure("config is for subcommand '" + value.get<std::string>() + "'");
            continue;
        }
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back("--" + key);
            continue;
        }
        args.push_back("--" + key);
        if (value.is_string())
            args.push_back(value.get<std::string>());
        else if (value.is_number_integer())
            args.push_back(std::to_string(value.get<long long>()));
        else if (value.is_number())
            args.push_back(format_number(value.get<double>()));
        else
            throw UsageFailure("config value of '" + key + "' must be a string, number or boolean");
    }
    return args;
}

json surd_json(const SymbolicConstant& c) { return {{"exact", c.to_string()}, {"value", c.to_double()}}; }

Outcome run_constants(const Common& c)
{
    const auto d = DimensionPair::make(c.n, c.k);
    const auto sc = sharp_constant(d);
    Outcome o;
    o.result["two_star"] = to_double(critical_exponent(d));
    o.result["two_star_exact"] = to_string(critical_exponent(d));
    o.result["a_nk"] = bubble_scale(d).to_string();
    o.result["a_nk_value"] = bubble_scale(d).to_double();
    o.result["c_nk"] = to_string(c_small(d));
    o.result["c_nk_value"] = to_double(c_small(d));
    o.result["K"] = sc.K;
    o.result["inverse_K"] = sc.inverse_K;
    o.result["bubble_mass"] = surd_json(sc.bubble_mass);
    o.result["c_green"] = surd_json(c_green(d));
    // K^{-n/2k} = ∫U^{2*}
    const double lhs = std::pow(sc.K, -static_cast<double>(c.n) / (2 * c.k));
    const double rel = std::abs(lhs / sc.bubble_mass.to_double() - 1);
    o.result["extremal_identity_relative_error"] = rel;
    o.pass = rel < 1e-12;
    if (!c.out.empty()) write_json(o.result, c.out);
    return o;
}

json certificate_json(const IdentityCertificate& c)
{
    return {{"identity", c.identity}, {"residual_zero", c.residual_zero}, {"residual_terms", c.residual_terms}};
}

Outcome run_identities(const Common& c)
{
    const auto d = DimensionPair::make(c.n, c.k);
    Outcome o;
    const auto bubble = verify_bubble_identity(d);
    o.result["bubble"] = certificate_json(bubble);
    json kernel = json::array();
    bool kernel_ok = true;
    for (const auto& cert : verify_kernel_identity(d)) {
        kernel.push_back(certificate_json(cert));
        kernel_ok = kernel_ok && cert.residual_zero;
    }
    o.result["kernel"] = kernel;
    // negative control: a wrong scale must leave a residual
    const auto control = verify_bubble_identity(d, ScaleContext::bubble(d).a_pow_k * Rational(2));
    o.result["perturbed_scale_control"] = certificate_json(control);
    o.pass = bubble.residual_zero && kernel_ok && !control.residual_zero;
    if (!c.out.empty()) write_json(o.result, c.out);
    return o;
}

struct GreenOptionsCli {
    std::string r_grid = "0.01:10:200";
    std::string spacing = "geometric";
};

Outcome run_green(const Common& c, const GreenOptionsCli& g)
{
    const auto d = DimensionPair::make(c.n, c.k);
    if (g.spacing != "geometric" && g.spacing != "linear") throw UsageFailure("--spacing must be geometric or linear");
    const auto grid = parse_grid(g.r_grid, g.spacing == "linear" ? Spacing::Linear : Spacing::Geometric);
    for (double r : grid)
        if (!(r > 0)) throw UsageFailure("--r-grid must be positive");
    GreenOptions opt;
    opt.precision_digits = c.precision;
    const auto gamma = gamma_fn(d, opt);
    CsvTable t({"r", "gamma", "r_pow_gap_gamma"});
    for (double r : grid) {
        const double v = gamma(r);
        t.add_row({r, v, std::pow(r, d.n - 2 * d.k) * v});
    }
    Outcome o;
    o.result["rows"] = t.rows();
    const auto fit = singular_constant(gamma);
    const double exact = c_green(d).to_double();
    o.result["singular_constant_fit"] = fit.constant;
    o.result["singular_constant_exact"] = exact;
    o.result["singular_constant_relative_error"] = std::abs(fit.constant / exact - 1);
    o.result["decay_rate"] = gamma.decay_rate();
    o.pass = std::abs(fit.constant / exact - 1) < 1e-6;
    if (!c.out.empty())
        t.write(c.out);
    else
        t.write(std::cout);
    return o;
}

struct QuotientCli {
    ManifoldOptions manifold;
    std::string eps_grid = "0.02:0.002:10";
    double B = 0.0;
    double delta = 0.0;
    double slope_tolerance = 0.1;
    double intercept_tolerance = 1e-3;
};

Outcome run_quotient_slope(const Common& c, const QuotientCli& q)
{
    const auto d = DimensionPair::make(c.n, c.k);
    const auto m = q.manifold.make(d.n);
    const auto fam = TestFunctionFamily::make(m, d, Cutoff(), q.delta);
    const auto grid = parse_grid(q.eps_grid);
    for (double e : grid)
        if (e > fam.max_epsilon() * (1 + 1e-12))
            throw UsageFailure("--eps-grid exceeds delta/10 = " + format_number(fam.max_epsilon()));
    const auto curve = quotient_curve(fam, grid, q.B, c.jobs);
    const auto fit = slope_fit(curve);
    const double pred = predicted_slope(m, d, q.B);
    const double invK = sharp_constant(d).inverse_K;

    CsvTable t({"epsilon", "theta", "Q", "Q_error"});
    for (const auto& s : curve.samples) t.add_row({s.epsilon, s.theta, s.value, s.error});
    Outcome o;
    o.result["manifold"] = m.describe();
    o.result["regime"] = regime_tag(fit.regime);
    o.result["slope"] = fit.slope;
    o.result["slope_sigma"] = fit.slope_sigma;
    o.result["predicted_slope"] = pred;
    o.result["intercept"] = fit.intercept;
    o.result["intercept_sigma"] = fit.intercept_sigma;
    o.result["inverse_K"] = invK;
    o.result["reduced_chi2"] = fit.reduced_chi2;
    json terms = json::array();
    for (const auto& n : fit.nuisance_terms) terms.push_back(n.tag());
    o.result["nuisance_terms"] = terms;
    const bool intercept_ok = std::abs(fit.intercept / invK - 1) < q.intercept_tolerance;
    const bool slope_ok = pred == 0.0 ? std::abs(fit.slope) < 2 * fit.slope_sigma
                                      : std::abs(fit.slope / pred - 1) < q.slope_tolerance;
    o.result["slope_check"] = pred == 0.0 ? "|slope| < 2 sigma" : "relative error < slope-tol";
    o.result["slope_ok"] = slope_ok;
    o.result["intercept_ok"] = intercept_ok;
    o.pass = slope_ok && intercept_ok;
    if (!c.out.empty()) t.write(c.out);
    return o;
}

struct ProbeCli {
    ManifoldOptions manifold;
    std::string eps_grid = "0.075:0.001:10";
    double B = 1.0;
};

Outcome run_probe(const Common& c, const ProbeCli& p)
{
    const auto d = DimensionPair::make(c.n, c.k);
    const auto m = p.manifold.make(d.n);
    const auto rep = probe_iopt(m, d, p.B, parse_grid(p.eps_grid), c.jobs);
    if (rep.rejected) throw UsageFailure("probe-iopt: " + rep.warning);
    CsvTable t({"epsilon", "theta", "Q", "Q_error"});
    for (const auto& s : rep.samples) t.add_row({s.epsilon, s.theta, s.value, s.error});
    Outcome o;
    o.result["manifold"] = m.describe();
    o.result["violated"] = rep.violated;
    o.result["witness_epsilon"] = rep.witness_epsilon ? json(*rep.witness_epsilon) : json(nullptr);
    o.result["margin"] = rep.margin;
    o.result["inverse_K"] = rep.inverse_K;
    if (!rep.warning.empty()) o.result["warning"] = rep.warning;
    // test functions undercut 1/K exactly when the θ_ε coefficient is negative
    const bool expected = predicted_slope(m, d, p.B) < 0;
    o.result["violation_expected"] = expected;
    o.pass = rep.violated == expected;
    if (!c.out.empty()) t.write(c.out);
    return o;
}

struct PohozaevCli {
    ManifoldOptions manifold;
    double alpha = 10.0;
    std::string mu_grid = "1e-3:1e-5:3";
    bool fd = false;
    double fd_h0 = 0.02;
    int fd_levels = 4;
};

json pohozaev_json(const PohozaevProfile& u, const PohozaevResult& r)
{
    return {{"profile", u.describe()}, {"residual", r.residual}, {"magnitude", r.magnitude}, {"relative", r.relative},
            {"flagged", r.flagged}};
}

Outcome run_pohozaev(const Common& c, const PohozaevCli& p)
{
    const auto d = DimensionPair::make(c.n, c.k);
    const auto m = p.manifold.make(d.n);
    Outcome o;
    bool ok = true;

    json checks = json::array();
    for (const auto& u : {PohozaevProfile::bubble(0.05, 1.0), PohozaevProfile::bubble(0.2, 1.0).with_bump(2 * d.k + 10),
                          PohozaevProfile::polynomial({1, -0.5, 0.3, 0.2, -0.1}, 0.8)}) {
        const auto r = pohozaev_check(u, d);
        checks.push_back(pohozaev_json(u, r));
        ok = ok && !r.flagged;
    }
    const auto sharp_profile = PohozaevProfile::bubble(0.1, 1.0, Cutoff(Cutoff::Kind::Sharp));
    const auto sharp = pohozaev_check(sharp_profile, d);
    o.result["pohozaev"] = checks;
    o.result["sharp_cutoff_control"] = pohozaev_json(sharp_profile, sharp);
    ok = ok && sharp.flagged;

    if (p.fd) {
        json fd = json::array();
        for (const auto& u : {PohozaevProfile::bubble(0.2, 1.0), PohozaevProfile::polynomial({1, -0.5, 0.3, 0.2, -0.1}, 0.8)}) {
            const auto q = u.with_bump(2 * d.k + 10);
            const auto f = pohozaev_refinement(q, d, p.fd_h0, p.fd_levels);
            fd.push_back({{"profile", q.describe()}, {"h", f.h}, {"residual", f.residual}, {"observed_order", f.observed_order}});
            ok = ok && std::abs(f.observed_order.back() - 8.0) < 0.3;
        }
        o.result["finite_difference"] = fd;
    }

    std::vector<BlowupParams> family;
    for (double mu : parse_grid(p.mu_grid)) {
        try {
            family.push_back(BlowupParams::make(p.alpha, mu, d));
        } catch (const std::invalid_argument& e) {
            throw UsageFailure(e.what());
        }
    }
    const auto table = balance_table(m, d, family, {}, c.jobs);
    CsvTable t({"alpha", "mu", "beta", "term_curvature", "term_l2", "theta", "theta_prime", "imbalance"});
    json regimes = json::array();
    for (const auto& r : table.rows) {
        t.add_row({r.params.alpha, r.params.mu, r.params.beta(), r.term_curvature, r.term_l2, r.theta, r.theta_prime,
                   r.imbalance});
        regimes.push_back(r.regime);
    }
    o.result["manifold"] = m.describe();
    o.result["regimes"] = regimes;
    o.result["conclusion"] = table.conclusion;
    o.pass = ok;
    if (!c.out.empty()) t.write(c.out);
    return o;
}

struct GiraudCli {
    double a = 2, b = 2, p = 7, q = 7;
    std::string alpha_grid = "2,4,8";
    std::string d_grid = "5e-4:500:13";
    std::uint64_t mc_samples = 0;
    double mc_d = 1.0;
    std::string mu_grid;
    std::string mu_d_grid = "0.1,0.3,0.5";
    double mu_alpha = 1.0;
};

Outcome run_giraud(const Common& c, const GiraudCli& g)
{
    const GiraudParams params{c.n, g.a, g.b, g.p, g.q};
    const auto alphas = parse_list(g.alpha_grid);
    const auto ds = g.d_grid.find(':') != std::string::npos ? parse_grid(g.d_grid) : parse_list(g.d_grid);
    Outcome o;
    bool ok = true;
    if (!g.mu_grid.empty()) {
        // μ-shifted envelope: b may be negative
        const auto mu_d = g.mu_d_grid.find(':') != std::string::npos ? parse_grid(g.mu_d_grid) : parse_list(g.mu_d_grid);
        const auto mu = g.mu_grid.find(':') != std::string::npos ? parse_grid(g.mu_grid) : parse_list(g.mu_grid);
        const auto rep = mu_envelope_variant(params, g.mu_alpha, mu, mu_d, c.jobs);
        CsvTable t({"mu", "d", "Z", "Z_error", "bound"});
        for (const auto& s : rep.samples) t.add_row({s.mu, s.d, s.value, s.error, s.bound});
        o.result["variant"] = "mu";
        o.result["fitted_mu_exponent"] = std::isnan(rep.fitted_mu_exponent) ? json(nullptr) : json(rep.fitted_mu_exponent);
        o.result["implied_gamma"] = std::isnan(rep.implied_gamma) ? json(nullptr) : json(rep.implied_gamma);
        o.result["max_ratio"] = rep.max_ratio;
        o.result["min_ratio"] = rep.min_ratio;
        ok = std::isfinite(rep.max_ratio) && rep.min_ratio > 0;
        if (g.b < 0) ok = ok && std::abs(rep.fitted_mu_exponent - g.b) <= 0.1 && rep.r_squared >= 0.98;
        o.pass = ok;
        if (!c.out.empty()) t.write(c.out);
        return o;
    }
    const auto rep = regime_verify(params, alphas, ds, c.jobs);
    CsvTable t({"alpha", "d", "Z", "Z_error", "bound"});
    for (const auto& s : rep.samples) t.add_row({s.alpha, s.d, s.value, s.error, s.bound});
    o.result["regime"] = to_string(rep.regime);
    json fits = json::array();
    for (const auto& f : rep.fits)
        fits.push_back({{"window", f.window},
                        {"fitted_exponent", f.fitted},
                        {"expected_exponent", std::isnan(f.expected) ? json(nullptr) : json(f.expected)},
                        {"r_squared", f.r_squared},
                        {"points", f.points},
                        {"ok", f.ok}});
    o.result["fits"] = fits;
    o.result["max_ratio"] = rep.max_ratio;
    o.result["min_ratio"] = rep.min_ratio;
    ok = rep.ok();
    if (g.mc_samples > 0) {
        const auto X = EnvelopeKernel::make(g.a, g.p, alphas.front(), c.n);
        const auto Y = EnvelopeKernel::make(g.b, g.q, alphas.front(), c.n);
        const auto z = convolve_radial(X, Y, g.mc_d, c.n);
        const auto mc = convolve_monte_carlo(X, Y, g.mc_d, c.n, g.mc_samples, c.seed, c.jobs);
        const double sigmas = std::abs(mc.value - z.value) / mc.standard_error;
        o.result["monte_carlo"] = {{"alpha", alphas.front()}, {"d", g.mc_d},           {"quadrature", z.value},
                                   {"estimate", mc.value},    {"standard_error", mc.standard_error},
                                   {"deviation_sigmas", sigmas}, {"samples", mc.samples}, {"seed", c.seed}};
        ok = ok && sigmas < 3;
    }
    o.pass = ok;
    if (!c.out.empty()) t.write(c.out);
    return o;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"polysob: numerical companion for higher-order Sobolev inequalities on closed manifolds"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    Common common;
    common.precision = default_precision();
    GreenOptionsCli green;
    QuotientCli quotient;
    ProbeCli probe;
    PohozaevCli pohozaev;
    GiraudCli giraud;
    std::map<std::string, Subcommand> subs;

    auto* c_constants = app.add_subcommand("constants", "closed-form constants of (n, k)");
    add_common(c_constants, common);
    subs["constants"] = {c_constants, [&] { return run_constants(common); }};

    auto* c_ident = app.add_subcommand("identities", "exact bubble and kernel identity certificates");
    add_common(c_ident, common);
    subs["identities"] = {c_ident, [&] { return run_identities(common); }};

    auto* c_green = app.add_subcommand("green", "fundamental solution of the polyharmonic operator plus one");
    add_common(c_green, common);
    c_green->add_option("--r-grid", green.r_grid, "first:last:count")->capture_default_str();
    c_green->add_option("--spacing", green.spacing, "geometric or linear")->capture_default_str();
    subs["green"] = {c_green, [&] { return run_green(common, green); }};

    auto* c_slope = app.add_subcommand("quotient-slope", "fit Q(eps) = 1/K + slope theta_eps + ...");
    add_common(c_slope, common);
    add_manifold(c_slope, quotient.manifold);
    c_slope->add_option("--eps-grid", quotient.eps_grid, "hi:lo:count (geometric)")->capture_default_str();
    c_slope->add_option("--B", quotient.B, "zeroth-order coefficient")->capture_default_str();
    c_slope->add_option("--delta", quotient.delta, "cutoff radius (0 = automatic)")->capture_default_str();
    c_slope->add_option("--slope-tol", quotient.slope_tolerance, "relative slope tolerance")->capture_default_str();
    c_slope->add_option("--intercept-tol", quotient.intercept_tolerance, "relative intercept tolerance")
        ->capture_default_str();
    subs["quotient-slope"] = {c_slope, [&] { return run_quotient_slope(common, quotient); }};

    auto* c_probe = app.add_subcommand("probe-iopt", "search for a test function below 1/K");
    add_common(c_probe, common);
    add_manifold(c_probe, probe.manifold);
    c_probe->add_option("--eps-grid", probe.eps_grid, "hi:lo:count (geometric)")->capture_default_str();
    c_probe->add_option("--B", probe.B, "zeroth-order coefficient (nonzero)")->capture_default_str();
    subs["probe-iopt"] = {c_probe, [&] { return run_probe(common, probe); }};

    auto* c_poho = app.add_subcommand("pohozaev-regimes", "Pohozaev residuals and blow-up balance table");
    add_common(c_poho, common);
    add_manifold(c_poho, pohozaev.manifold);
    c_poho->add_option("--alpha", pohozaev.alpha, "blow-up parameter alpha")->capture_default_str();
    c_poho->add_option("--mu-grid", pohozaev.mu_grid, "hi:lo:count (geometric)")->capture_default_str();
    c_poho->add_flag("--fd", pohozaev.fd, "also run the finite-difference refinement");
    c_poho->add_option("--fd-h0", pohozaev.fd_h0, "coarsest finite-difference step")->capture_default_str();
    c_poho->add_option("--fd-levels", pohozaev.fd_levels, "number of halvings")->capture_default_str();
    subs["pohozaev-regimes"] = {c_poho, [&] { return run_pohozaev(common, pohozaev); }};

    auto* c_giraud = app.add_subcommand("giraud", "convolution of envelope kernels and its regime exponents");
    common.n = 5;
    add_common(c_giraud, common, false);
    c_giraud->add_option("--a", giraud.a, "singular exponent of X")->capture_default_str();
    c_giraud->add_option("--b", giraud.b, "singular exponent of Y")->capture_default_str();
    c_giraud->add_option("--p", giraud.p, "tail exponent of X")->capture_default_str();
    c_giraud->add_option("--q", giraud.q, "tail exponent of Y")->capture_default_str();
    c_giraud->add_option("--alpha-grid", giraud.alpha_grid, "comma list")->capture_default_str();
    c_giraud->add_option("--d-grid", giraud.d_grid, "first:last:count or comma list")->capture_default_str();
    c_giraud->add_option("--mc-samples", giraud.mc_samples, "Monte Carlo samples (0 = skip)")->capture_default_str();
    c_giraud->add_option("--mc-d", giraud.mc_d, "separation of the Monte Carlo check")->capture_default_str();
    c_giraud->add_option("--mu-grid", giraud.mu_grid, "run the mu-shifted variant on these mu");
    c_giraud->add_option("--mu-d-grid", giraud.mu_d_grid, "separations of the mu variant")->capture_default_str();
    c_giraud->add_option("--mu-alpha", giraud.mu_alpha, "alpha of the mu variant")->capture_default_str();
    subs["giraud"] = {c_giraud, [&] { return run_giraud(common, giraud); }};

    // The config file is expanded into flags placed before the explicit ones.
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        for (std::size_t i = 0; i + 1 < args.size(); ++i) {
            if (args[i] != "--config") continue;
            auto it = std::find_if(args.begin(), args.end(), [&](const std::string& a) { return subs.count(a) > 0; });
            if (it == args.end()) throw UsageFailure("--config needs a subcommand");
            auto extra = config_arguments(read_config(args[i + 1]), *it);
            args.insert(it + 1, extra.begin(), extra.end());
            break;
        }
    } catch (const UsageFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return UsageError;
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return UsageError;
    }

    for (auto& [name, sub] : subs) {
        if (!sub.app->parsed()) continue;
        json summary;
        summary["config"] = effective_config(sub.app);
        summary["config_hash"] = config_hash(summary["config"]);
        try {
            Outcome o = sub.run();
            summary["result"] = o.result;
            summary["pass"] = o.pass;
            const json& out = summary;
            if (!common.summary.empty()) write_json(out, common.summary);
            // the green table goes to stdout without --out; keep its summary on stderr then
            (name == "green" && common.out.empty() ? std::cerr : std::cout) << out.dump(2) << '\n';
            return o.pass ? Success : VerificationFailure;
        } catch (const InvalidDimension& e) {
            std::cerr << "error: " << e.what() << '\n';
        } catch (const UsageFailure& e) {
            std::cerr << "error: " << e.what() << '\n';
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
        }
        return UsageError;
    }
    return UsageError;
}
