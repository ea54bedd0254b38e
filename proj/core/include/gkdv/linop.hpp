#pragma once

#include <memory>

#include "gkdv/grid.hpp"
#include "gkdv/params.hpp"
#include "gkdv/profiles.hpp"

namespace gkdv {

/// Report of an exponential-tail fit: |f(x)| ~ prefactor * e^{-rate |x|} on the
/// outer part of the grid.
struct DecayReport {
    double rate = 0.0;           // fitted exponential rate (average of both tails)
    double boundary_value = 0.0; // max |f| at the outermost samples
    bool decaying = false;
};

/// The linearized operator L f = -f'' + f - p Q^{p-1} f on a symmetric grid,
/// with the constrained inverse on the orthogonal complement of Q'.
class OperatorContext {
public:
    OperatorContext(const SolitonParams& prm,
                    double half_width = profiles::kProfileHalfWidth,
                    int n = profiles::kProfilePoints);
    ~OperatorContext();
    OperatorContext(OperatorContext&&) noexcept;
    OperatorContext& operator=(OperatorContext&&) noexcept;

    const SolitonParams& params() const { return prm_; }
    const GridFunction& layout() const { return Q_; }

    // Samples of Q, Q', and the potential p Q^{p-1} on the context grid.
    const GridFunction& Q() const { return Q_; }
    const GridFunction& Q_prime() const { return Qp_; }
    const GridFunction& potential() const { return pot_; }

    GridFunction sample(const std::function<double(double)>& f) const;

    // L f with the module's differentiation rule.
    GridFunction apply_L(const GridFunction& f) const;

    // The unique f with L f = h, <f, Q'> = 0, given <h, Q'> = 0 and decaying h.
    GridFunction solve_L(const GridFunction& h, double ortho_tol = 1e-8) const;

    DecayReport decay_check(const GridFunction& f) const;

    // V0 = -Q/(p-1) - (3/2) x Q'           (L V0 = 3Q - 2Q^p)
    GridFunction V0() const;
    // V1 with L V1 = p Q^{p-1}, even, decaying; closed form per exponent.
    GridFunction V1() const;
    // Z0 = 3Q'' + 3V0'' + pQ^{p-1} V0, evaluated in closed form.
    GridFunction Z0() const;
    // Z1 = 3V1'' + pQ^{p-1} V1 + pQ^{p-1}; V1'' taken from L V1 = pQ^{p-1}.
    GridFunction Z1() const;

    // Cumulative integral of Q^2 from 0 (odd primitive), used by V1 for p = 4.
    const GridFunction& int0_Q2() const { return intQ2_; }

    // L phi sampled in closed form (bounded, limits +-1).
    GridFunction L_phi() const;

private:
    SolitonParams prm_;
    GridFunction Q_, Qp_, pot_, intQ2_;
    struct Factorization;
    mutable std::unique_ptr<Factorization> fact_; // built lazily, reused across solves
    void ensure_factorized() const;
};

} // namespace gkdv
