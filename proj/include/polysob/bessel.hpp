#pragma once

// Macdonald function K_ν(z) for Re z > 0 and 2ν ∈ ℤ, generic over the complex scalar.

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace polysob {

using Float50 = boost::multiprecision::cpp_bin_float_50;
using Float100 = boost::multiprecision::cpp_bin_float_100;
using Complex50 = boost::multiprecision::cpp_complex_50;
using Complex100 = boost::multiprecision::cpp_complex_100;

template <class C>
struct complex_traits {
    using real = typename boost::multiprecision::component_type<C>::type;
};
template <>
struct complex_traits<std::complex<double>> {
    using real = double;
};

template <class C>
using real_of = typename complex_traits<C>::real;

namespace detail {

template <class C>
real_of<C> epsilon_of()
{
    return std::numeric_limits<real_of<C>>::epsilon();
}

// K_{m+1/2}(z) = sqrt(π/2z) e^{-z} Σ_{j=0}^{m} (m+j)! / (j! (m-j)!) (2z)^{-j}
template <class C>
C macdonald_half_integer(int m, const C& z)
{
    using std::exp;
    using std::sqrt;
    using R = real_of<C>;
    const R pi = boost::math::constants::pi<R>();
    C sum(1);
    C term(1);
    for (int j = 1; j <= m; ++j) {
        // ratio of consecutive coefficients: (m+j)(m-j+1) / j
        term = term * C(R((m + j) * (m - j + 1)) / R(j)) / (C(2) * z);
        sum += term;
    }
    return sqrt(C(pi) / (C(2) * z)) * exp(-z) * sum;
}

// Power series for K_n, n ≥ 0 integer; accurate for |z| ≲ 2.
template <class C>
C macdonald_integer_series(int n, const C& z)
{
    using std::abs;
    using std::log;
    using R = real_of<C>;
    const R euler = boost::math::constants::euler<R>();
    const R eps = epsilon_of<C>();
    const C half_z = z / C(2);
    const C q = half_z * half_z; // z^2/4

    C half_z_n(1);
    for (int i = 0; i < n; ++i) half_z_n *= half_z;

    // finite part: ½ (z/2)^{-n} Σ_{j<n} (n-j-1)!/j! (-q)^j
    C finite(0);
    if (n > 0) {
        R fact(1); // (n-1)!
        for (int i = 2; i <= n - 1; ++i) fact *= i;
        C term = C(fact);
        C mq = -q;
        for (int j = 0; j < n; ++j) {
            finite += term;
            if (j + 1 < n) term = term * mq / C(R(j + 1) * R(n - j - 1));
        }
        finite = finite / (C(2) * half_z_n);
    }

    // I_n and the ψ-weighted series
    R fact_n(1);
    for (int i = 2; i <= n; ++i) fact_n *= i;
    C term = C(R(1) / fact_n); // q^j / (j! (n+j)!)
    R psi_a = -euler;          // ψ(j+1)
    R psi_b = -euler;          // ψ(n+j+1)
    for (int i = 1; i <= n; ++i) psi_b += R(1) / R(i);
    C i_sum(0), psi_sum(0);
    for (int j = 0; j < 10000; ++j) {
        i_sum += term;
        C contrib = term * C(psi_a + psi_b);
        psi_sum += contrib;
        if (j > 2 && abs(term) <= eps * abs(i_sum) && abs(contrib) <= eps * abs(psi_sum)) break;
        term = term * q / C(R(j + 1) * R(n + j + 1));
        psi_a += R(1) / R(j + 1);
        psi_b += R(1) / R(n + j + 1);
    }
    const C i_n = half_z_n * i_sum;
    const R sign = (n % 2 == 0) ? R(1) : R(-1);
    return finite - C(sign) * log(half_z) * i_n + C(sign / 2) * half_z_n * psi_sum;
}

// Steed's continued fraction CF2 for K_0 and K_1, |z| ≥ 2, Re z > 0.
template <class C>
void macdonald_cf2(const C& z, C& k0, C& k1)
{
    using std::abs;
    using std::exp;
    using std::sqrt;
    using R = real_of<C>;
    const R pi = boost::math::constants::pi<R>();
    const R eps = epsilon_of<C>();
    C b = C(2) * (C(1) + z);
    C d = C(1) / b;
    C h = d;
    C delh = d;
    C q1(0), q2(1);
    const R a1 = R(1) / R(4);
    C q = C(a1), c = C(a1);
    R a = -a1;
    C s = C(1) + q * delh;
    for (int i = 1; i < 100000; ++i) {
        a -= R(2 * i);
        c = -c * C(a) / C(R(i + 1));
        C qnew = (q1 - b * q2) / C(a);
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += C(2);
        d = C(1) / (b + C(a) * d);
        delh = (b * d - C(1)) * delh;
        h += delh;
        C dels = q * delh;
        s += dels;
        if (abs(dels) < eps * abs(s)) break;
    }
    h = C(a1) * h;
    k0 = sqrt(C(pi) / (C(2) * z)) * exp(-z) / s;
    k1 = k0 * (z + C(R(1) / 2) - h) / z;
}

} // namespace detail

/// K_ν(z) with ν = twice_nu / 2 and Re z > 0.
template <class C>
C macdonald_K(int twice_nu, const C& z)
{
    using std::abs;
    using std::real;
    if (!(real(z) > 0)) throw std::domain_error("macdonald_K requires Re z > 0");
    if (twice_nu < 0) twice_nu = -twice_nu; // K_{-ν} = K_ν
    if (twice_nu % 2 == 1) return detail::macdonald_half_integer((twice_nu - 1) / 2, z);
    const int n = twice_nu / 2;
    if (abs(z) <= 2) return detail::macdonald_integer_series(n, z);
    C km, k;
    detail::macdonald_cf2(z, km, k);
    if (n == 0) return km;
    for (int j = 1; j < n; ++j) {
        C kp = km + C(real_of<C>(2 * j)) / z * k;
        km = k;
        k = kp;
    }
    return k;
}

/// Double-precision convenience overload; ν must be an integer or half-integer.
std::complex<double> macdonald_K(double nu, std::complex<double> z);

} // namespace polysob
