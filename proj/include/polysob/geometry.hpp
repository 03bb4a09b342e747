#pragma once

#include "polysob/constants.hpp"

#include <string>
#include <vector>

namespace polysob {

/// Round sphere of radius ρ or flat torus R^n / ⊕ L_i Z, both in dimension n.
class ModelManifold {
public:
    enum class Kind { RoundSphere, FlatTorus };

    static ModelManifold sphere(int n, double radius = 1.0);
    static ModelManifold torus(int n, std::vector<double> periods);
    /// Cubic torus with all periods equal.
    static ModelManifold torus(int n, double period = 1.0);

    Kind kind() const { return kind_; }
    int dimension() const { return n_; }
    double radius() const { return radius_; }
    const std::vector<double>& periods() const { return periods_; }
    bool is_sphere() const { return kind_ == Kind::RoundSphere; }

    double injectivity_radius() const;
    /// Ric = λ g.
    double ricci_eigenvalue() const;
    double total_volume() const;
    std::string describe() const;

private:
    Kind kind_ = Kind::FlatTorus;
    int n_ = 0;
    double radius_ = 0.0;
    std::vector<double> periods_;
};

double scalar_curvature(const ModelManifold& m);

/// Tr_g T_g with T_g = k(n-2)/(4(n-1)) R g - 2k(k-1)(k+1)/(3(n-2)) (Ric - R/(2(n-1)) g).
double tensor_Tg_trace(const ModelManifold& m, int k);

/// Geodesic polar profile about a point: √|g| = (w(r)/r)^{n-1} in normal coordinates.
struct RadialMetricProfile {
    ModelManifold::Kind kind = ModelManifold::Kind::FlatTorus;
    int n = 0;
    double rho = 0.0;
    /// Profile is valid on [0, validity_radius).
    double validity_radius = 0.0;

    double warp(double r) const;
    double warp_derivative(double r) const;
    /// (n-1) w'/w, the first-order coefficient of the radial Laplacian.
    double laplacian_coefficient(double r) const;
    /// w(r)^{n-1}; the volume element is ω_{n-1} w^{n-1} dr.
    double volume_density(double r) const;
};

/// Profile about `center` (ignored by homogeneity of both models, kept for the interface).
RadialMetricProfile radial_profile(const ModelManifold& m, const std::vector<double>& center = {});

/// Flat R^n profile with unbounded validity radius.
RadialMetricProfile euclidean_profile(int n);

/// Exact conformal chart about a point: geodesic radius r ↔ flat radius y, and
/// φ with φ^{4/(n-2k)} g flat. On the torus the gauge is the identity.
struct ConformalGauge {
    bool trivial = true;
    int n = 0;
    int k = 0;
    double rho = 1.0;

    double y_of_r(double r) const;
    double r_of_y(double y) const;
    /// φ as a function of the flat radius |y|.
    double phi(double y) const;
    double dphi_dy(double y) const;
    /// dv_g / dy = (1 + |y|^2/(4ρ^2))^{-n}.
    double volume_factor(double y) const;
};

ConformalGauge conformal_dress(const ModelManifold& m, const DimensionPair& d);

} // namespace polysob
