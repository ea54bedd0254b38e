#pragma once

#include <algorithm>
#include <cmath>

#include "gkdv/errors.hpp"

namespace gkdv {

/// Parameters of a two-soliton configuration with speeds (1, c), 0 < c < 1.
/// Only the subcritical exponents with explicit cascade systems are admitted.
struct SolitonParams {
    int p = 4;
    double c = 0.01;

    SolitonParams() = default;
    SolitonParams(int p_, double c_) : p(p_), c(c_) { validate(); }

    void validate() const {
        if (p != 2 && p != 4)
            throw UnsupportedExponent("p must be 2 or 4, got " + std::to_string(p));
        if (!(c > 0.0) || !(c < 1.0))
            throw Error("speed ratio c must lie in (0,1), got " + std::to_string(c));
    }

    // q = 1/(p-1) - 1/4; the L^2 scaling exponent of Q_c.
    double q() const { return 1.0 / (p - 1) - 0.25; }

    // Half-width of the interaction time window, T_c = c^{-1/2-1/100}.
    double Tc() const { return std::pow(c, -0.5 - 0.01); }

    // Residual exponent of the truncated construction.
    double n0(int k0, int l0) const {
        return (0.5 - 0.01) * std::min(double(k0) / (p - 1), 1.0 + l0);
    }
};

} // namespace gkdv
