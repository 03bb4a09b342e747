#include "polysob/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>

namespace polysob {

QuadratureFailure::QuadratureFailure(const std::string& what, double a_, double b_)
    : std::runtime_error(what), a(a_), b(b_)
{
}

Integral integrate(const std::function<double(double)>& f, double a, double b, double rel_tol)
{
    Integral r;
    if (b <= a) return r;
    // Boost's adaptive driver misjudges convergence on very short intervals; integrate on [0, 1].
    const double h = b - a;
    r.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate([&](double t) { return h * f(a + h * t); },
                                                                          0.0, 1.0, 15, rel_tol, &r.error, &r.l1);
    if (!std::isfinite(r.value) || r.error > std::sqrt(rel_tol) * r.l1 + 1e-300) {
        std::ostringstream os;
        os << "quadrature did not converge on annulus [" << a << ", " << b << "], error " << r.error << " vs |f| "
           << r.l1;
        throw QuadratureFailure(os.str(), a, b);
    }
    return r;
}

Integral integrate_pieces(const std::function<double(double)>& f, const std::vector<double>& breaks, double rel_tol)
{
    Integral total;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) total += integrate(f, breaks[i], breaks[i + 1], rel_tol);
    return total;
}

} // namespace polysob
