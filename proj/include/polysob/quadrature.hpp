#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace polysob {

struct Integral {
    double value = 0.0;
    double error = 0.0;
    /// ∫|f|, the scale against which `error` is judged.
    double l1 = 0.0;

    Integral& operator+=(const Integral& o)
    {
        value += o.value;
        error += o.error;
        l1 += o.l1;
        return *this;
    }
};

/// Adaptive quadrature did not reach tolerance on [a, b].
class QuadratureFailure : public std::runtime_error {
public:
    QuadratureFailure(const std::string& what, double a, double b);
    double a, b;
};

/// Adaptive 61-point Gauss-Kronrod on [a, b]. Throws QuadratureFailure when the
/// error estimate exceeds sqrt(rel_tol) of ∫|f| (a clear nonconvergence).
Integral integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12);

/// Sum over consecutive pieces [b_i, b_{i+1}] of a sorted breakpoint list.
Integral integrate_pieces(const std::function<double(double)>& f, const std::vector<double>& breaks,
                          double rel_tol = 1e-12);

} // namespace polysob
