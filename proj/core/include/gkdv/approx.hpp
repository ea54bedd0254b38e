#pragma once

#include "gkdv/cascade.hpp"

namespace gkdv {

/// Evaluator for the approximate two-soliton
///   v(t,x) = Q(y) + Q_c(y_c) + sum c^l [ Q_c^k(y_c) A_{k,l}(y) + (Q_c^k)'(y_c) B_{k,l}(y) ]
/// with y_c = x + (1-c)t, y = x - alpha(y_c), and of the corrected v_# (p = 4).
/// All time derivatives are taken analytically through the (y, y_c) chain rule.
class ApproxSolution {
public:
    ApproxSolution(CascadeSolution cascade, double c);

    const CascadeSolution& cascade() const { return cas_; }
    const SolitonParams& params() const { return prm_; }
    double Tc() const { return prm_.Tc(); }

    double alpha(double s) const;
    double beta(double s) const;
    double beta_prime(double s) const;
    double beta_second(double s) const;

    // Measured envelope constants of Claim-level bounds |alpha| <= K c^{1/(p-1)-1/2},
    // |alpha'| <= K c^{1/(p-1)}; used by tests and logged by the CLI.
    struct AlphaEnvelope {
        double K_alpha = 0.0;
        double K_beta = 0.0;
        double min_one_plus_beta = 0.0;
    };
    AlphaEnvelope alpha_envelope() const;

    double eval_v(double t, double x) const;
    double eval_v_sharp(double t, double x) const; // throws WrongExponent unless p = 4

    struct PointEval {
        double v = 0, vx = 0, vxx = 0, vxxx = 0, vt = 0;
    };
    PointEval eval_full(double t, double x, bool sharp = false) const;

    // W(t,x) = v - Q(y) - Q_c(y_c); H^1 norm over the natural evaluation grid.
    double w_h1_norm(double t, double h_target = 0.02) const;

    struct Residual {
        GridFunction S;
        double l2 = 0.0;      // ||S||_L2
        double dx_l2 = 0.0;   // ||S_x||_L2
        double dxx_l2 = 0.0;  // ||S_xx||_L2
    };
    // S = v_t + (v_xx - v + v^p)_x sampled on the natural grid at time t.
    Residual residual(double t, bool sharp = false, double h_target = 0.02) const;

    struct RecompositionError {
        double err_full = 0.0;        // H^1 distance including the b_{2,0}(Q_c^2)' term
        double err_two_soliton = 0.0; // plain two-soliton H^1 distance
        double err_dx = 0.0;          // L2 distance of the x-derivative
        double err_right_tail = 0.0;  // H^1 on x > -T_c/2 after removing Q
        double Delta = 0.0;
        double Delta_c = 0.0;
    };
    // side = +1 evaluates at t = +T_c, side = -1 at t = -T_c. Requires p = 4 and
    // the (2,0) entry.
    RecompositionError recomposition_error(int side, double h_target = 0.02) const;

    // Natural evaluation grid covering both solitons with decayed tails at time t.
    GridFunction evaluation_grid(double t, double h_target = 0.02) const;

private:
    CascadeSolution cas_;
    SolitonParams prm_;
    struct Term {
        int k = 1;
        int l = 0;
        bool deriv_g = false; // g = (Q_c^k)' instead of Q_c^k
        double coeff = 1.0;   // c^l times any extra factor
        StructuredFunction f, df1, df2, df3;
    };
    std::vector<Term> terms_;
    Term sharp_term_; // -(b_{2,0}) (Q_c^2)' (1 + V1), p = 4 only
    bool has_sharp_ = false;
    std::vector<GridFunction> Jk_; // dense tables of int_0^u Q^k du, k = 1..kmax
    double b20_ = 0.0;

    void accumulate(PointEval& pe, const Term& term, double yc, double y, double b, double bp,
                    double bpp) const;
};

// Exact KdV (p = 2) two-soliton with speeds 1 and c in log-sum-exp form.
double p2_two_soliton(double c, double t, double x);

// Interaction phase constants of the exact solution: alpha(c) and the shifts
// Delta' = -log alpha > 0, Delta'_c = -Delta'/sqrt(c).
struct P2ShiftConstants {
    double alpha = 0.0;
    double Delta_prime = 0.0;
    double Delta_prime_c = 0.0;
};
P2ShiftConstants p2_shift_constants(double c);

} // namespace gkdv
