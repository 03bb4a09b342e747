#pragma once

// Truncated Taylor series f(x0 + h) = Σ_{i ≤ order} c_i h^i with exact propagation
// through arithmetic and elementary functions.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace polysob {

class Jet {
public:
    static constexpr int max_order = 15;

    Jet() { c_.fill(0.0); }
    Jet(double value, int order) : order_(checked(order))
    {
        c_.fill(0.0);
        c_[0] = value;
    }

    /// The identity jet x0 + h.
    static Jet variable(double x0, int order)
    {
        Jet j(x0, order);
        if (order >= 1) j.c_[1] = 1.0;
        return j;
    }

    int order() const { return order_; }
    double value() const { return c_[0]; }
    double coefficient(int i) const { return i <= order_ ? c_[i] : 0.0; }
    /// i-th derivative at x0.
    double derivative_value(int i) const
    {
        double f = 1.0;
        for (int j = 2; j <= i; ++j) f *= j;
        return coefficient(i) * f;
    }

    /// d/dh, one order lower.
    Jet derivative() const
    {
        Jet d(0.0, order_ > 0 ? order_ - 1 : 0);
        for (int i = 0; i < order_; ++i) d.c_[i] = (i + 1) * c_[i + 1];
        return d;
    }

    Jet& operator+=(const Jet& o)
    {
        const int m = std::min(order_, o.order_);
        order_ = m;
        for (int i = 0; i <= m; ++i) c_[i] += o.c_[i];
        clear_tail();
        return *this;
    }
    Jet& operator-=(const Jet& o)
    {
        const int m = std::min(order_, o.order_);
        order_ = m;
        for (int i = 0; i <= m; ++i) c_[i] -= o.c_[i];
        clear_tail();
        return *this;
    }
    Jet& operator*=(double s)
    {
        for (int i = 0; i <= order_; ++i) c_[i] *= s;
        return *this;
    }
    Jet& operator+=(double s)
    {
        c_[0] += s;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator-(Jet a)
    {
        a *= -1.0;
        return a;
    }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator+(Jet a, double s) { return a += s; }
    friend Jet operator+(double s, Jet a) { return a += s; }
    friend Jet operator-(Jet a, double s) { return a += -s; }
    friend Jet operator-(double s, const Jet& a) { return -a + s; }
    friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }

    friend Jet operator*(const Jet& a, const Jet& b)
    {
        Jet r(0.0, std::min(a.order_, b.order_));
        for (int i = 0; i <= r.order_; ++i) {
            double s = 0.0;
            for (int j = 0; j <= i; ++j) s += a.c_[j] * b.c_[i - j];
            r.c_[i] = s;
        }
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b)
    {
        if (b.c_[0] == 0.0) throw std::domain_error("Jet division by a series with zero constant term");
        Jet r(0.0, std::min(a.order_, b.order_));
        for (int i = 0; i <= r.order_; ++i) {
            double s = a.c_[i];
            for (int j = 1; j <= i; ++j) s -= b.c_[j] * r.c_[i - j];
            r.c_[i] = s / b.c_[0];
        }
        return r;
    }
    friend Jet operator/(double s, const Jet& b) { return Jet(s, b.order_) / b; }

    friend Jet exp(const Jet& g)
    {
        Jet e(std::exp(g.c_[0]), g.order_);
        for (int m = 1; m <= g.order_; ++m) {
            double s = 0.0;
            for (int j = 1; j <= m; ++j) s += j * g.c_[j] * e.c_[m - j];
            e.c_[m] = s / m;
        }
        return e;
    }

    friend Jet log(const Jet& g)
    {
        Jet l(std::log(g.c_[0]), g.order_);
        for (int m = 1; m <= g.order_; ++m) {
            double s = 0.0;
            for (int j = 1; j < m; ++j) s += j * l.c_[j] * g.c_[m - j];
            l.c_[m] = (g.c_[m] - s / m) / g.c_[0];
        }
        return l;
    }

    /// g^p for g(x0) > 0.
    friend Jet pow(const Jet& g, double p)
    {
        Jet y(std::pow(g.c_[0], p), g.order_);
        for (int m = 1; m <= g.order_; ++m) {
            double s = 0.0;
            for (int j = 1; j <= m; ++j) s += ((p + 1.0) * j - m) * g.c_[j] * y.c_[m - j];
            y.c_[m] = s / (m * g.c_[0]);
        }
        return y;
    }

    friend void sincos(const Jet& g, Jet& s, Jet& c)
    {
        s = Jet(std::sin(g.c_[0]), g.order_);
        c = Jet(std::cos(g.c_[0]), g.order_);
        for (int m = 1; m <= g.order_; ++m) {
            double a = 0.0, b = 0.0;
            for (int j = 1; j <= m; ++j) {
                a += j * g.c_[j] * c.c_[m - j];
                b += j * g.c_[j] * s.c_[m - j];
            }
            s.c_[m] = a / m;
            c.c_[m] = -b / m;
        }
    }
    friend Jet sin(const Jet& g)
    {
        Jet s, c;
        sincos(g, s, c);
        return s;
    }
    friend Jet cos(const Jet& g)
    {
        Jet s, c;
        sincos(g, s, c);
        return c;
    }
    friend Jet tan(const Jet& g)
    {
        Jet s, c;
        sincos(g, s, c);
        return s / c;
    }
    friend Jet atan(const Jet& g)
    {
        Jet r(std::atan(g.c_[0]), g.order_);
        if (g.order_ == 0) return r;
        Jet q = g.derivative() / (1.0 + g.truncated(g.order_ - 1) * g.truncated(g.order_ - 1));
        for (int m = 1; m <= g.order_; ++m) r.c_[m] = q.c_[m - 1] / m;
        return r;
    }

    Jet truncated(int order) const
    {
        Jet t = *this;
        t.order_ = std::min(order_, checked(order));
        t.clear_tail();
        return t;
    }

private:
    static int checked(int order)
    {
        if (order < 0 || order > max_order) throw std::invalid_argument("Jet order out of range");
        return order;
    }
    void clear_tail()
    {
        for (int i = order_ + 1; i <= max_order; ++i) c_[i] = 0.0;
    }

    int order_ = 0;
    std::array<double, max_order + 1> c_;
};

} // namespace polysob
