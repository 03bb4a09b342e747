#pragma once

#include "polysob/jet.hpp"

namespace polysob {

/// Radial cutoff χ with χ ≡ 1 on [0, 1] and χ ≡ 0 on [2, ∞).
class Cutoff {
public:
    enum class Kind {
        /// 1 - S(s - 1), S the degree-13 smoothstep; C^6 across s = 1 and s = 2.
        Smoothstep6,
        /// Quotient of exp(-1/x) bumps; C^∞.
        Smooth,
        /// Indicator of [0, 1]; only for negative controls.
        Sharp,
    };

    explicit Cutoff(Kind kind = Kind::Smoothstep6) : kind_(kind) {}

    Kind kind() const { return kind_; }
    double operator()(double s) const;
    Jet operator()(const Jet& s) const;
    /// Points where χ fails to be analytic.
    double inner() const { return 1.0; }
    double outer() const { return kind_ == Kind::Sharp ? 1.0 : 2.0; }

private:
    Kind kind_;
};

} // namespace polysob
