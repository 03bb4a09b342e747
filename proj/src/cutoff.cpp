#include "polysob/cutoff.hpp"

#include <array>
#include <cmath>

namespace polysob {

namespace {

// S(x) = x^7 Σ_{j=0}^{6} C(6+j, j) C(13, 6-j) (-x)^j, expanded to degree 13.
constexpr std::array<double, 14> smoothstep_coefficients()
{
    std::array<double, 14> c{};
    auto binom = [](int n, int k) {
        double b = 1.0;
        for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
        return b;
    };
    for (int j = 0; j <= 6; ++j) c[7 + j] = binom(6 + j, j) * binom(13, 6 - j) * ((j % 2) ? -1.0 : 1.0);
    return c;
}

const std::array<double, 14> kSmoothstep = smoothstep_coefficients();

template <class T>
T smoothstep_raw(const T& x)
{
    T acc = x * 0.0 + kSmoothstep[13];
    for (int i = 12; i >= 7; --i) acc = acc * x + kSmoothstep[i];
    T x7 = x * x;
    x7 = x7 * x7 * x7 * x;
    return acc * x7;
}

// S(x) + S(1 - x) = 1; evaluating the half nearer 0 avoids cancellation of the large
// alternating coefficients near x = 1.
template <class T>
T smoothstep(const T& x, double x0)
{
    return x0 <= 0.5 ? smoothstep_raw(x) : 1.0 - smoothstep_raw(1.0 - x);
}

double bump_tail(double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; }

Jet bump_tail(const Jet& x) { return x.value() > 0 ? exp(-1.0 / x) : Jet(0.0, x.order()); }

} // namespace

double Cutoff::operator()(double s) const
{
    if (s <= 1.0) return 1.0;
    if (s >= outer()) return 0.0;
    if (kind_ == Kind::Smoothstep6) return smoothstep(2.0 - s, 2.0 - s);
    double a = bump_tail(2.0 - s), b = bump_tail(s - 1.0);
    return a / (a + b);
}

Jet Cutoff::operator()(const Jet& s) const
{
    if (s.value() <= 1.0) return Jet(1.0, s.order());
    if (s.value() >= outer()) return Jet(0.0, s.order());
    if (kind_ == Kind::Smoothstep6) return smoothstep(2.0 - s, 2.0 - s.value());
    Jet a = bump_tail(2.0 - s), b = bump_tail(s - 1.0);
    return a / (a + b);
}

} // namespace polysob
