#include "polysob/radial_ops.hpp"

#include <stdexcept>

namespace polysob {

Jet warp(const RadialMetricProfile& p, const Jet& r)
{
    if (p.kind == ModelManifold::Kind::RoundSphere) return p.rho * sin(r / p.rho);
    return r;
}

Jet laplacian_coefficient(const RadialMetricProfile& p, const Jet& r)
{
    if (p.kind == ModelManifold::Kind::RoundSphere) {
        Jet s, c;
        sincos(r / p.rho, s, c);
        return (p.n - 1) / p.rho * (c / s);
    }
    return (p.n - 1) / r;
}

Jet radial_laplacian(const RadialMetricProfile& p, const Jet& f, const Jet& r)
{
    if (f.order() < 2) throw std::invalid_argument("radial_laplacian: jet order >= 2 required");
    const int m = f.order() - 2;
    Jet d1 = f.derivative();
    Jet d2 = d1.derivative();
    return -d2 - laplacian_coefficient(p, r.truncated(m)) * d1.truncated(m);
}

Jet radial_laplacian_power(const RadialMetricProfile& p, const Jet& f, const Jet& r, int q)
{
    Jet g = f;
    for (int i = 0; i < q; ++i) g = radial_laplacian(p, g, r);
    return g;
}

double half_laplacian_value(const RadialMetricProfile& p, const Jet& f, const Jet& r, int k)
{
    if (f.order() < k) throw std::invalid_argument("half_laplacian_value: jet order >= k required");
    Jet g = radial_laplacian_power(p, f, r, k / 2);
    return k % 2 == 0 ? g.value() : g.coefficient(1);
}

} // namespace polysob
