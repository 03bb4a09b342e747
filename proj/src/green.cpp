#include "polysob/green.hpp"

#include "polysob/radial_cas.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace polysob {

namespace {

template <class C>
C kernel_sum(const DimensionPair& d, const real_of<C>& r)
{
    using std::exp;
    using std::pow;
    using std::sqrt;
    using R = real_of<C>;
    const R pi = boost::math::constants::pi<R>();
    const int k = d.k;
    const R nu = R(d.n - 2) / 2;
    const R norm = pow(R(2) * pi, -R(d.n) / 2);
    C total(0);
    for (int m = 0; m < k; ++m) {
        C omega = exp(C(R(0), pi * R(2 * m + 1) / R(k)));
        C c = -omega / C(R(k)); // 1 / (k ω^{k-1}) with ω^k = -1
        C z = sqrt(-omega);
        total += c * C(norm) * pow(z / C(r), C(nu)) * macdonald_K(d.n - 2, C(z * C(r)));
    }
    return total;
}

// Solve A x = b in place by Gaussian elimination with partial pivoting.
template <class R>
std::vector<R> solve_dense(std::vector<std::vector<R>> a, std::vector<R> b)
{
    using std::abs;
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (abs(a[row][col]) > abs(a[piv][col])) piv = row;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t row = col + 1; row < n; ++row) {
            R f = a[row][col] / a[col][col];
            for (std::size_t j = col; j < n; ++j) a[row][j] -= f * a[col][j];
            b[row] -= f * b[col];
        }
    }
    std::vector<R> x(n);
    for (std::size_t i = n; i-- > 0;) {
        R s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

double integrate(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-13)
{
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 12, tol);
}

// Integration breakpoints for kernels living on scale 1 with exponential tail.
std::vector<double> radial_breakpoints(double r_cancel, double decay_rate)
{
    std::vector<double> pts{0.0, r_cancel, 0.5, 1.0, 2.0, 4.0, 8.0};
    double r_max = 80.0 / decay_rate;
    while (pts.back() < r_max) pts.push_back(std::min(pts.back() + 8.0, r_max));
    return pts;
}

} // namespace

// ---------------------------------------------------------------------------

std::complex<double> macdonald_K(double nu, std::complex<double> z)
{
    double twice = 2.0 * nu;
    if (std::abs(twice - std::round(twice)) > 1e-12)
        throw std::domain_error("macdonald_K: order must be an integer or half-integer");
    return macdonald_K(static_cast<int>(std::lround(twice)), z);
}

PartialFractionDecomp PartialFractionDecomp::make(int k)
{
    if (k < 1) throw std::invalid_argument("PartialFractionDecomp: k >= 1 required");
    PartialFractionDecomp pf;
    pf.k = k;
    for (int m = 0; m < k; ++m) {
        std::complex<double> w = std::polar(1.0, std::numbers::pi * (2 * m + 1) / k);
        pf.poles.push_back(w);
        std::complex<double> c(1.0);
        for (int j = 0; j < k; ++j)
            if (j != m) c /= (w - std::polar(1.0, std::numbers::pi * (2 * j + 1) / k));
        pf.residues.push_back(c);
    }
    return pf;
}

std::complex<double> PartialFractionDecomp::reconstruct(double t) const
{
    std::complex<double> s(0.0);
    for (std::size_t m = 0; m < poles.size(); ++m) s += residues[m] / (t - poles[m]);
    return s;
}

std::complex<double> PartialFractionDecomp::residue_sum() const
{
    std::complex<double> s(0.0);
    for (auto c : residues) s += c;
    return s;
}

BesselKernelSum::BesselKernelSum(DimensionPair d, GreenOptions options)
    : d_(d), opt_(options), pf_(PartialFractionDecomp::make(d.k))
{
    if (d_.n <= 2 * d_.k) throw InvalidDimension("BesselKernelSum requires n > 2k");
    for (auto w : pf_.poles) z_.push_back(std::sqrt(-w));
}

double BesselKernelSum::decay_rate() const
{
    double m = z_.front().real();
    for (auto z : z_) m = std::min(m, z.real());
    return m;
}

std::complex<double> BesselKernelSum::evaluate_double(double r) const
{
    return kernel_sum<std::complex<double>>(d_, r);
}

Float50 BesselKernelSum::evaluate_50(const Float50& r) const { return kernel_sum<Complex50>(d_, r).real(); }

Float100 BesselKernelSum::evaluate_100(const Float100& r) const { return kernel_sum<Complex100>(d_, r).real(); }

std::complex<double> BesselKernelSum::evaluate_complex(double r) const
{
    if (!(r > 0)) throw std::domain_error("Γ is evaluated at r > 0 only");
    if (opt_.precision_digits > 50) {
        auto v = kernel_sum<Complex100>(d_, Float100(r));
        return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
    }
    if (opt_.precision_digits > 16 || r < cancellation_radius()) {
        auto v = kernel_sum<Complex50>(d_, Float50(r));
        return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
    }
    return evaluate_double(r);
}

double BesselKernelSum::cancellation_radius() const
{
    // Terms are O(r^{2-n}) while the sum is O(r^{2k-n}); keep the loss below 10^3.
    if (d_.k == 1) return opt_.r_cancel;
    return std::max(opt_.r_cancel, std::pow(10.0, -3.0 / (2 * d_.k - 2)));
}

double BesselKernelSum::evaluate(double r) const { return evaluate_complex(r).real(); }

BesselKernelSum gamma_fn(const DimensionPair& d, GreenOptions options) { return BesselKernelSum(d, options); }

double gamma_alpha(const BesselKernelSum& g, double alpha, double r)
{
    if (!(alpha > 0)) throw std::domain_error("gamma_alpha: α > 0 required");
    return std::pow(alpha, g.dims().n - 2 * g.dims().k) * g.evaluate(alpha * r);
}

double green_mass(const BesselKernelSum& g)
{
    const int n = g.dims().n;
    const double omega = sphere_area(n).to_double();
    auto f = [&](double r) { return r > 0 ? std::pow(r, n - 1) * g.evaluate(r) : 0.0; };
    auto pts = radial_breakpoints(g.cancellation_radius(), g.decay_rate());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += integrate(f, pts[i], pts[i + 1]);
    return omega * total;
}

SingularityFit singular_constant(const BesselKernelSum& g, double r_lo, double r_hi)
{
    const DimensionPair& d = g.dims();
    const bool even = d.n % 2 == 0;
    auto basis = [&](const Float50& r, int terms) {
        std::vector<Float50> row(terms);
        row[0] = 1;
        for (int j = 1; j < terms; ++j) {
            if (!even) {
                row[j] = row[j - 1] * r;
            } else {
                // 1, r^2 ln r, r^2, r^4 ln r, r^4, ...
                int p = 2 * ((j + 1) / 2);
                Float50 rp = boost::multiprecision::pow(r, p);
                row[j] = (j % 2 == 1) ? rp * boost::multiprecision::log(r) : rp;
            }
        }
        return row;
    };
    auto fit = [&](int terms) {
        std::vector<std::vector<Float50>> a;
        std::vector<Float50> b;
        const Float50 pi = boost::math::constants::pi<Float50>();
        for (int i = 0; i < terms; ++i) {
            // Chebyshev nodes on [r_lo, r_hi]
            Float50 x = boost::multiprecision::cos(pi * (2 * i + 1) / (2 * terms));
            Float50 r = (Float50(r_lo) + Float50(r_hi)) / 2 + (Float50(r_hi) - Float50(r_lo)) / 2 * x;
            a.push_back(basis(r, terms));
            b.push_back(boost::multiprecision::pow(r, d.n - 2 * d.k) * g.evaluate_50(r));
        }
        return solve_dense(a, b)[0];
    };
    const int terms = even ? 13 : 14;
    Float50 hi = fit(terms);
    Float50 lo = fit(terms - 2);
    return {static_cast<double>(hi), static_cast<double>(boost::multiprecision::abs(hi - lo))};
}

// ---------------------------------------------------------------------------

double SurdConstant::to_double() const
{
    return polysob::to_double(coefficient) * std::sqrt(static_cast<double>(radicand)) *
           std::pow(std::numbers::pi, pi_exponent);
}

std::string SurdConstant::to_string() const
{
    std::ostringstream os;
    os << polysob::to_string(coefficient);
    if (radicand != 1) os << "*sqrt(" << radicand << ")";
    if (pi_exponent != 0) os << "*pi^{" << pi_exponent << "}";
    return os.str();
}

namespace {

// sin^2(π p) for p with denominator in {1, 2, 3, 4, 6}.
std::optional<Rational> sin_squared_pi(const Rational& p)
{
    // cos(2πp) is rational exactly for these reduced denominators
    BigInt den = denominator(p);
    Rational cos2;
    if (den == 1) cos2 = 1;
    else if (den == 2) cos2 = -1;
    else if (den == 3) cos2 = Rational(-1, 2);
    else if (den == 4) cos2 = 0;
    else if (den == 6) cos2 = Rational(1, 2);
    else return std::nullopt;
    return (Rational(1) - cos2) / 2;
}

SurdConstant make_surd(const Rational& coefficient, const Rational& square, int pi_exponent)
{
    // coefficient * sqrt(P/Q) = coefficient/Q * sqrt(P Q); pull squares out of P Q.
    BigInt pq = numerator(square) * denominator(square);
    BigInt out = 1;
    for (BigInt f = 2; f * f <= pq; ++f) {
        while (pq % (f * f) == 0) {
            pq /= f * f;
            out *= f;
        }
    }
    SurdConstant s;
    s.coefficient = coefficient * Rational(out) / Rational(denominator(square));
    s.radicand = pq;
    s.pi_exponent = pi_exponent;
    return s;
}

} // namespace

L2Norm l2_norm_sq(const DimensionPair& d)
{
    if (d.n >= 4 * d.k) throw DivergenceError("Γ is not square integrable for n >= 4k", -1);
    L2Norm out;
    const double pi = std::numbers::pi;
    const double p = double(d.n) / (2 * d.k);
    const double omega = sphere_area(d.n).to_double();
    out.plancherel = std::pow(2 * pi, -d.n) * omega / (2 * d.k) * (1 - p) * pi / std::sin(pi * p);

    BesselKernelSum g(d);
    auto f = [&](double r) {
        if (!(r > 0)) return 0.0;
        double v = g.evaluate(r);
        return std::pow(r, d.n - 1) * v * v;
    };
    auto pts = radial_breakpoints(g.cancellation_radius(), 2 * g.decay_rate());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += integrate(f, pts[i], pts[i + 1]);
    out.quadrature = omega * total;

    Rational pr(d.n, 2 * d.k);
    if (auto s2 = sin_squared_pi(pr)) {
        // (2π)^{-n} ω (1/2k) (p-1) π / |sin π p|
        SymbolicConstant w = sphere_area(d.n);
        if (w.half_pi_exponent() % 2 == 0) {
            int pi_exp = -d.n + w.half_pi_exponent() / 2 + 1;
            Rational c = w.mantissa() / Rational(BigInt(1) << d.n) / Rational(2 * d.k) * (pr - 1);
            out.plancherel_exact = make_surd(c, Rational(1) / *s2, pi_exp);
        }
    }
    return out;
}

SymbolicConstant c_U_constant(const DimensionPair& d)
{
    auto f = RadialRational::power_of_one_plus_t(Rational(d.n + 2 * d.k, 2), ScaleContext::bubble(d));
    return energy_integral(f, d);
}

DecayFit decay_fit(const BesselKernelSum& g, double r_lo, double r_hi)
{
    const DimensionPair& d = g.dims();
    const int samples = 2000;
    std::vector<double> rs, vs;
    for (int i = 0; i <= samples; ++i) {
        double r = r_lo + (r_hi - r_lo) * i / samples;
        rs.push_back(r);
        vs.push_back(std::log(std::abs(std::pow(r, d.n - 2 * d.k) * g.evaluate(r)) + 1e-300));
    }
    // local maxima of the log-modulus trace the envelope
    std::vector<double> px, py;
    for (int i = 1; i < samples; ++i) {
        if (vs[i] >= vs[i - 1] && vs[i] >= vs[i + 1]) {
            px.push_back(rs[i]);
            py.push_back(vs[i]);
        }
    }
    if (px.size() < 2) { // monotone (k = 1): use the whole trace
        px = rs;
        py = vs;
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < px.size(); ++i) {
        mx += px[i];
        my += py[i];
    }
    mx /= px.size();
    my /= px.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < px.size(); ++i) {
        sxy += (px[i] - mx) * (py[i] - my);
        sxx += (px[i] - mx) * (px[i] - mx);
    }
    return {sxy / sxx, -g.decay_rate()};
}

} // namespace polysob
