#include "polysob/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polysob {

namespace {

constexpr int kDegree = 3;

// Nonzero B-splines N_{span-3..span} and derivatives 0..3 at x (Cox-de Boor with
// the triangular derivative recurrence).
std::array<std::array<double, 4>, 4> basis_derivatives(const std::vector<double>& U, int span, double x)
{
    constexpr int p = kDegree;
    double ndu[p + 1][p + 1];
    double left[p + 1], right[p + 1];
    ndu[0][0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = x - U[span + 1 - j];
        right[j] = U[span + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            double temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }
    std::array<std::array<double, 4>, 4> ders{};
    for (int j = 0; j <= p; ++j) ders[0][j] = ndu[j][p];
    double a[2][p + 1];
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a[0][0] = 1.0;
        for (int k = 1; k <= p; ++k) {
            double d = 0.0;
            int rk = r - k, pk = p - k;
            if (r >= k) {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                d = a[s2][0] * ndu[rk][pk];
            }
            int j1 = rk >= -1 ? 1 : -rk;
            int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                d += a[s2][j] * ndu[rk + j][pk];
            }
            if (r <= pk) {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                d += a[s2][k] * ndu[r][pk];
            }
            ders[k][r] = d;
            std::swap(s1, s2);
        }
    }
    double f = p;
    for (int k = 1; k <= p; ++k) {
        for (int j = 0; j <= p; ++j) ders[k][j] *= f;
        f *= (p - k);
    }
    return ders;
}

} // namespace

RadialSplineSpace::RadialSplineSpace(std::vector<double> breakpoints) : breaks_(std::move(breakpoints))
{
    if (breaks_.size() < 3 || breaks_.front() != 0.0)
        throw std::invalid_argument("RadialSplineSpace: need breakpoints 0 = b_0 < ... < b_N with N >= 2");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        if (!(breaks_[i] > breaks_[i - 1])) throw std::invalid_argument("RadialSplineSpace: breakpoints must increase");
    knots_.assign(kDegree, 0.0);
    knots_.insert(knots_.end(), breaks_.begin(), breaks_.end());
    knots_.insert(knots_.end(), kDegree, breaks_.back());
}

RadialSplineSpace RadialSplineSpace::graded(double first_width, double outer_radius, int intervals)
{
    if (intervals < 2 || !(first_width > 0) || !(outer_radius > first_width))
        throw std::invalid_argument("RadialSplineSpace::graded: invalid grading");
    // Solve h0 (q^N - 1)/(q - 1) = R for the growth ratio q by bisection.
    auto span = [&](double q) { return std::abs(q - 1) < 1e-14 ? first_width * intervals : first_width * (std::pow(q, intervals) - 1) / (q - 1); };
    double lo = 1e-9, hi = 2.0;
    while (span(hi) < outer_radius) hi *= 2;
    if (span(lo) > outer_radius) lo = 1e-9;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (span(mid) < outer_radius ? lo : hi) = mid;
    }
    const double q = 0.5 * (lo + hi);
    std::vector<double> b{0.0};
    double h = first_width;
    for (int i = 0; i < intervals; ++i) {
        b.push_back(b.back() + h);
        h *= q;
    }
    b.back() = outer_radius;
    return RadialSplineSpace(std::move(b));
}

int RadialSplineSpace::interval(double r) const
{
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), r);
    int i = static_cast<int>(it - breaks_.begin()) - 1;
    return std::clamp(i, 0, dimension() - 1);
}

RadialSplineSpace::Local RadialSplineSpace::evaluate(double r) const
{
    const int i = interval(r);
    const int span = i + kDegree;
    auto raw = basis_derivatives(knots_, span, std::clamp(r, 0.0, outer_radius()));
    // Raw indices span-3..span; reduced index: raw 0,1 -> 0; raw j -> j-1 for 2 <= j <= M-3.
    const int raw_count = static_cast<int>(breaks_.size()) + 2; // N + 3
    Local out;
    int prev = -1;
    for (int j = 0; j <= kDegree; ++j) {
        int raw_index = span - kDegree + j;
        if (raw_index >= raw_count - 2) continue;
        int reduced = raw_index <= 1 ? 0 : raw_index - 1;
        if (prev < 0) out.first = reduced;
        int slot = reduced - out.first;
        for (int d = 0; d < 4; ++d) out.value[d][slot] += raw[d][j];
        out.count = slot + 1;
        prev = reduced;
    }
    return out;
}

double RadialSplineSpace::evaluate(const std::vector<double>& c, double r, int derivative) const
{
    if (static_cast<int>(c.size()) != dimension()) throw std::invalid_argument("RadialSplineSpace: coefficient size");
    Local l = evaluate(r);
    double s = 0.0;
    for (int j = 0; j < l.count; ++j) s += c[l.first + j] * l.value[derivative][j];
    return s;
}

} // namespace polysob
