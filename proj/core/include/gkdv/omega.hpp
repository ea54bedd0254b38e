#pragma once

#include "gkdv/linop.hpp"
#include "gkdv/structured.hpp"

namespace gkdv {

/// Solution of the model system
///   (L A)' + a (3Q - 2Q^p)' = F
///   (L B)' + a (3Q'')       - 3A'' - pQ^{p-1} A = G
/// in the structured class, with the scalar b = constant part of B's hat
/// polynomial (the degree-0 freedom that encodes the small-soliton shift).
struct OmegaSolution {
    double a = 0.0;
    StructuredFunction A, B;
    double b = 0.0;

    /// Numerical health of the intermediate odd right-hand side E.
    struct Diagnostics {
        double e_odd_defect = 0.0;     // asymmetry of E before solving
        double e_qprime_proj = 0.0;    // |<E, Q'>| / (||E|| ||Q'||)
        double e_tail = 0.0;           // |E| at the grid boundary
    } diag;
};

/// Polynomial reduction of the model system (step 1 of the existence proof):
/// splits off the polynomial content of (F, G) and returns the decaying
/// remainders (calF, calG) together with the polynomial parts of (A, B).
struct PeeledSystem {
    Polynomial A_tilde, A_hat;   // even / odd
    Polynomial B_tilde, B_hat0;  // odd / even (B_hat0 lacks the constant b)
    GridFunction calF, calG;     // decaying, odd / even
};

PeeledSystem peel_polynomials(const OperatorContext& ctx, const StructuredFunction& F,
                              const StructuredFunction& G);

OmegaSolution solve_model_system(const OperatorContext& ctx, const StructuredFunction& F,
                                 const StructuredFunction& G);

/// The two-parameter solution family: adds gamma times the homogeneous solution
/// (a_{1,0}, 1 + A_{1,0}, B_{1,0}) plus delta Q' to B.
OmegaSolution gauge_shift(const OperatorContext& ctx, const OmegaSolution& sol, double gamma,
                          double delta, const OmegaSolution& base);

/// Max-norm residuals of the two model equations for a candidate solution.
struct OmegaResiduals {
    double eqA = 0.0;
    double eqB = 0.0;
};
OmegaResiduals omega_residuals(const OperatorContext& ctx, const StructuredFunction& F,
                               const StructuredFunction& G, const OmegaSolution& sol);

} // namespace gkdv
