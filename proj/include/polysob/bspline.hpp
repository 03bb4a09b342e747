#pragma once

#include <array>
#include <vector>

namespace polysob {

/// Clamped cubic B-spline basis on [0, R] restricted to profiles with
/// u'(0) = 0 and u(R) = u'(R) = 0. The first two raw B-splines are merged
/// (zero slope at 0) and the last two are dropped, so dimension() equals the
/// number of knot intervals.
class RadialSplineSpace {
public:
    /// Breakpoints 0 = b_0 < b_1 < ... < b_N = R.
    explicit RadialSplineSpace(std::vector<double> breakpoints);

    /// N intervals: [0, h0] followed by geometric growth up to R.
    static RadialSplineSpace graded(double first_width, double outer_radius, int intervals);

    int dimension() const { return static_cast<int>(breaks_.size()) - 1; }
    const std::vector<double>& breakpoints() const { return breaks_; }
    double outer_radius() const { return breaks_.back(); }

    /// Interval index containing r (clamped to the last interval).
    int interval(double r) const;

    /// Reduced basis functions nonzero at r with derivatives 0..3:
    /// value[d][j] belongs to reduced index first + j.
    struct Local {
        int first = 0;
        int count = 0;
        std::array<std::array<double, 4>, 4> value{};
    };
    Local evaluate(double r) const;

    /// Σ c_i ψ_i^{(d)}(r).
    double evaluate(const std::vector<double>& coefficients, double r, int derivative = 0) const;

private:
    std::vector<double> breaks_;
    std::vector<double> knots_;
};

} // namespace polysob
