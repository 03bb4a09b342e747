#include "polysob/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace polysob {

ModelManifold ModelManifold::sphere(int n, double radius)
{
    if (n < 2) throw std::invalid_argument("sphere: n >= 2 required");
    if (!(radius > 0)) throw std::invalid_argument("sphere: radius must be positive");
    ModelManifold m;
    m.kind_ = Kind::RoundSphere;
    m.n_ = n;
    m.radius_ = radius;
    return m;
}

ModelManifold ModelManifold::torus(int n, std::vector<double> periods)
{
    if (n < 1) throw std::invalid_argument("torus: n >= 1 required");
    if (static_cast<int>(periods.size()) != n) throw std::invalid_argument("torus: need one period per dimension");
    for (double p : periods)
        if (!(p > 0)) throw std::invalid_argument("torus: periods must be positive");
    ModelManifold m;
    m.kind_ = Kind::FlatTorus;
    m.n_ = n;
    m.periods_ = std::move(periods);
    return m;
}

ModelManifold ModelManifold::torus(int n, double period) { return torus(n, std::vector<double>(n, period)); }

double ModelManifold::injectivity_radius() const
{
    if (is_sphere()) return std::numbers::pi * radius_;
    return 0.5 * *std::min_element(periods_.begin(), periods_.end());
}

double ModelManifold::ricci_eigenvalue() const { return is_sphere() ? (n_ - 1) / (radius_ * radius_) : 0.0; }

double ModelManifold::total_volume() const
{
    if (is_sphere()) return sphere_area(n_ + 1).to_double() * std::pow(radius_, n_);
    double v = 1.0;
    for (double p : periods_) v *= p;
    return v;
}

std::string ModelManifold::describe() const
{
    std::ostringstream os;
    if (is_sphere()) {
        os << "sphere(n=" << n_ << ", radius=" << radius_ << ")";
    } else {
        os << "torus(n=" << n_ << ", periods=[";
        for (std::size_t i = 0; i < periods_.size(); ++i) os << (i ? "," : "") << periods_[i];
        os << "])";
    }
    return os.str();
}

double scalar_curvature(const ModelManifold& m) { return m.dimension() * m.ricci_eigenvalue(); }

double tensor_Tg_trace(const ModelManifold& m, int k)
{
    const double n = m.dimension();
    const double R = scalar_curvature(m);
    const double tr_g = n;
    const double tr_ric = n * m.ricci_eigenvalue();
    const double c1 = k * (n - 2) / (4 * (n - 1));
    const double c2 = 2.0 * k * (k - 1) * (k + 1) / (3 * (n - 2));
    return c1 * R * tr_g - c2 * (tr_ric - R / (2 * (n - 1)) * tr_g);
}

// ---------------------------------------------------------------------------

double RadialMetricProfile::warp(double r) const
{
    return kind == ModelManifold::Kind::RoundSphere ? rho * std::sin(r / rho) : r;
}

double RadialMetricProfile::warp_derivative(double r) const
{
    return kind == ModelManifold::Kind::RoundSphere ? std::cos(r / rho) : 1.0;
}

double RadialMetricProfile::laplacian_coefficient(double r) const
{
    if (kind == ModelManifold::Kind::RoundSphere) return (n - 1) / (rho * std::tan(r / rho));
    return (n - 1) / r;
}

double RadialMetricProfile::volume_density(double r) const { return std::pow(warp(r), n - 1); }

RadialMetricProfile radial_profile(const ModelManifold& m, const std::vector<double>& center)
{
    if (!center.empty() && static_cast<int>(center.size()) != m.dimension() + (m.is_sphere() ? 1 : 0))
        throw std::invalid_argument("radial_profile: center has the wrong number of coordinates");
    RadialMetricProfile p;
    p.kind = m.kind();
    p.n = m.dimension();
    p.rho = m.is_sphere() ? m.radius() : 0.0;
    p.validity_radius = m.injectivity_radius();
    return p;
}

RadialMetricProfile euclidean_profile(int n)
{
    if (n < 1) throw std::invalid_argument("euclidean_profile: n >= 1 required");
    RadialMetricProfile p;
    p.n = n;
    p.validity_radius = std::numeric_limits<double>::infinity();
    return p;
}

// ---------------------------------------------------------------------------

double ConformalGauge::y_of_r(double r) const { return trivial ? r : 2 * rho * std::tan(r / (2 * rho)); }

double ConformalGauge::r_of_y(double y) const { return trivial ? y : 2 * rho * std::atan(y / (2 * rho)); }

double ConformalGauge::phi(double y) const
{
    if (trivial) return 1.0;
    return std::pow(1 + y * y / (4 * rho * rho), (n - 2 * k) / 2.0);
}

double ConformalGauge::dphi_dy(double y) const
{
    if (trivial) return 0.0;
    double s = 1 + y * y / (4 * rho * rho);
    return (n - 2 * k) / 2.0 * std::pow(s, (n - 2 * k) / 2.0 - 1) * y / (2 * rho * rho);
}

double ConformalGauge::volume_factor(double y) const
{
    if (trivial) return 1.0;
    return std::pow(1 + y * y / (4 * rho * rho), -n);
}

ConformalGauge conformal_dress(const ModelManifold& m, const DimensionPair& d)
{
    if (m.dimension() != d.n) throw std::invalid_argument("conformal_dress: manifold dimension differs from n");
    ConformalGauge g;
    g.n = d.n;
    g.k = d.k;
    g.trivial = !m.is_sphere();
    g.rho = m.is_sphere() ? m.radius() : 1.0;
    return g;
}

} // namespace polysob
