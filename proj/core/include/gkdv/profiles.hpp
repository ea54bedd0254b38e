#pragma once

#include <cmath>

#include "gkdv/grid.hpp"
#include "gkdv/params.hpp"

namespace gkdv {

/// Closed-form traveling-wave profile Q, its rescalings Q_c, the auxiliary
/// odd function phi = -Q'/Q, and the standard integral identities.
namespace profiles {

// sup Q = ((p+1)/2)^{1/(p-1)}, attained at x = 0.
double Q_max(int p);

// Q(x) = ((p+1) / (2 cosh^2((p-1)x/2)))^{1/(p-1)}
double Q(int p, double x);

// phi(x) = tanh((p-1)x/2) = -Q'(x)/Q(x)
double phi(int p, double x);
// phi' = (p-1)/(p+1) Q^{p-1}
double phi_prime(int p, double x);
// phi'' = (p-1)^2/(p+1) Q' Q^{p-2}
double phi_second(int p, double x);

// Analytic derivatives of Q via Q' = -phi Q, Q'' = Q - Q^p.
double Q_prime(int p, double x);
double Q_second(int p, double x);
double Q_third(int p, double x);

// L phi = -phi'' + phi - p Q^{p-1} phi (tends to +-1 at +-infinity).
double L_phi(int p, double x);

// Q_c(x) = c^{1/(p-1)} Q(sqrt(c) x) and derivatives in x.
double Qc(const SolitonParams& prm, double x);
double Qc_prime(const SolitonParams& prm, double x);

/// Value and first three derivatives of Q_c^k (plus the fourth, needed when
/// (Q_c^k)' itself is differentiated three times). All closed-form.
struct QcPowDerivs {
    double v = 0, d1 = 0, d2 = 0, d3 = 0, d4 = 0;
};
QcPowDerivs qc_pow(const SolitonParams& prm, int k, double x);

/// Quadrature moments of Q with the residual-exponent cross-checks applied in tests.
struct Moments {
    double intQ = 0;       // ∫ Q
    double intQ2 = 0;      // ∫ Q^2
    double intQ3 = 0;      // ∫ Q^3
    double intQp1 = 0;     // ∫ Q^{p+1}
    double intQx2 = 0;     // ∫ (Q')^2
    double energy = 0;     // E(Q) = 1/2 ∫ (Q')^2 - 1/(p+1) ∫ Q^{p+1}
};

// Default grid half-width for Q-profiles; tails must sit below 1e-14.
inline constexpr double kProfileHalfWidth = 40.0;
inline constexpr int kProfilePoints = 1 << 14;

// Throws TailTruncation if Q(half_width) exceeds tail_tol.
Moments moments(int p, double half_width = kProfileHalfWidth, int n = kProfilePoints,
                double tail_tol = 1e-14);

// Sample x -> f(x) on the default profile grid.
GridFunction sample_profile(const std::function<double(double)>& f,
                            double half_width = kProfileHalfWidth, int n = kProfilePoints);

} // namespace profiles
} // namespace gkdv
