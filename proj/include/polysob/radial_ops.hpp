#pragma once

#include "polysob/geometry.hpp"
#include "polysob/jet.hpp"

namespace polysob {

/// Warp w(r) of the profile as a jet in r.
Jet warp(const RadialMetricProfile& p, const Jet& r);

/// (n-1) w'/w as a jet in r.
Jet laplacian_coefficient(const RadialMetricProfile& p, const Jet& r);

/// Δ f = -f'' - (n-1)(w'/w) f' for a radial jet f expanded at the same point as r.
/// The result has order f.order() - 2.
Jet radial_laplacian(const RadialMetricProfile& p, const Jet& f, const Jet& r);

/// Δ^q f, order f.order() - 2q.
Jet radial_laplacian_power(const RadialMetricProfile& p, const Jet& f, const Jet& r, int q);

/// Signed radial component of Δ^{k/2} f: Δ^{k/2} f for even k and ∂_r Δ^{(k-1)/2} f for odd k.
/// Needs f.order() >= k; its square is the density |Δ^{k/2} f|^2.
double half_laplacian_value(const RadialMetricProfile& p, const Jet& f, const Jet& r, int k);

} // namespace polysob
