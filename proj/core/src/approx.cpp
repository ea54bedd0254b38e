#include "gkdv/approx.hpp"

#include <algorithm>
#include <cmath>

namespace gkdv {

namespace {

// Odd primitive int_0^u of an even decaying sample.
GridFunction odd_primitive_of_even(GridFunction f) {
    f.symmetrize(+1);
    GridFunction I = f.cumulative();
    double half = f.integrate() / 2.0;
    for (int i = 0; i < I.size(); ++i) I[i] -= half;
    I.symmetrize(-1);
    return I;
}

constexpr double kTableHalfWidth = 60.0;
constexpr int kTablePoints = 60001;

} // namespace

ApproxSolution::ApproxSolution(CascadeSolution cascade, double c)
    : cas_(std::move(cascade)), prm_(cas_.params.p, c) {
    const OperatorContext& ctx = *cas_.ctx;
    int kmax = 1;
    for (const auto& [o, s] : cas_.entries) kmax = std::max(kmax, o.first);
    Jk_.reserve(size_t(kmax));
    for (int k = 1; k <= kmax; ++k) {
        GridFunction qk = GridFunction::sample(-kTableHalfWidth, kTableHalfWidth, kTablePoints,
                                               [&](double u) { return std::pow(profiles::Q(prm_.p, u), k); });
        Jk_.push_back(odd_primitive_of_even(std::move(qk)));
    }
    for (const auto& [o, s] : cas_.entries) {
        double cl = std::pow(c, o.second);
        Term tA;
        tA.k = o.first;
        tA.l = o.second;
        tA.deriv_g = false;
        tA.coeff = cl;
        tA.f = s.A;
        tA.df1 = s.A.derivative(ctx, 6);
        tA.df2 = tA.df1.derivative(ctx, 6);
        tA.df3 = tA.df2.derivative(ctx, 6);
        terms_.push_back(std::move(tA));
        Term tB = terms_.back();
        tB.deriv_g = true;
        tB.f = s.B;
        tB.df1 = s.B.derivative(ctx, 6);
        tB.df2 = tB.df1.derivative(ctx, 6);
        tB.df3 = tB.df2.derivative(ctx, 6);
        terms_.push_back(std::move(tB));
    }
    if (prm_.p == 4) {
        if (const OmegaSolution* s20 = cas_.find(2, 0)) {
            b20_ = s20->b;
            Term w;
            w.k = 2;
            w.l = 0;
            w.deriv_g = true;
            w.coeff = -b20_; // cancels the b_{2,0} phi tail at t = -T_c
            GridFunction V1 = ctx.V1();
            w.f = StructuredFunction(V1, Polynomial::constant(1.0), Polynomial());
            w.df1 = w.f.derivative(ctx, 6);
            w.df2 = w.df1.derivative(ctx, 6);
            w.df3 = w.df2.derivative(ctx, 6);
            sharp_term_ = std::move(w);
            has_sharp_ = true;
        }
    }
}

double ApproxSolution::alpha(double s) const {
    const double rc = std::sqrt(prm_.c);
    double u = rc * s;
    double acc = 0.0;
    for (const auto& [o, sol] : cas_.entries) {
        const GridFunction& J = Jk_[size_t(o.first - 1)];
        double Ju = (u <= J.x_min()) ? J[0] : (u >= J.x_max()) ? J[J.size() - 1] : J.interp(u);
        acc += sol.a * std::pow(prm_.c, o.second + double(o.first) / (prm_.p - 1) - 0.5) * Ju;
    }
    return acc;
}

double ApproxSolution::beta(double s) const {
    double acc = 0.0;
    for (const auto& [o, sol] : cas_.entries)
        acc += sol.a * std::pow(prm_.c, o.second) * std::pow(profiles::Qc(prm_, s), o.first);
    return acc;
}

double ApproxSolution::beta_prime(double s) const {
    double acc = 0.0;
    for (const auto& [o, sol] : cas_.entries)
        acc += sol.a * std::pow(prm_.c, o.second) * profiles::qc_pow(prm_, o.first, s).d1;
    return acc;
}

double ApproxSolution::beta_second(double s) const {
    double acc = 0.0;
    for (const auto& [o, sol] : cas_.entries)
        acc += sol.a * std::pow(prm_.c, o.second) * profiles::qc_pow(prm_, o.first, s).d2;
    return acc;
}

ApproxSolution::AlphaEnvelope ApproxSolution::alpha_envelope() const {
    AlphaEnvelope env;
    env.min_one_plus_beta = 1e300;
    const double pow_a = std::pow(prm_.c, 1.0 / (prm_.p - 1) - 0.5);
    const double pow_b = std::pow(prm_.c, 1.0 / (prm_.p - 1));
    const double span = 4.0 * kTableHalfWidth / std::sqrt(prm_.c);
    const int samples = 4000;
    for (int i = 0; i <= samples; ++i) {
        double s = -span + 2.0 * span * i / samples;
        env.K_alpha = std::max(env.K_alpha, std::abs(alpha(s)) / pow_a);
        double b = beta(s);
        env.K_beta = std::max(env.K_beta, std::abs(b) / pow_b);
        env.min_one_plus_beta = std::min(env.min_one_plus_beta, 1.0 + b);
    }
    return env;
}

void ApproxSolution::accumulate(PointEval& pe, const Term& term, double yc, double y, double b,
                                double bp, double bpp) const {
    profiles::QcPowDerivs qd = profiles::qc_pow(prm_, term.k, yc);
    double g, g1, g2, g3;
    if (!term.deriv_g) {
        g = qd.v; g1 = qd.d1; g2 = qd.d2; g3 = qd.d3;
    } else {
        g = qd.d1; g1 = qd.d2; g2 = qd.d3; g3 = qd.d4;
    }
    const int p = prm_.p;
    double f = term.f.eval(p, y);
    double f1 = term.df1.eval(p, y);
    double f2 = term.df2.eval(p, y);
    double f3 = term.df3.eval(p, y);
    double ob = 1.0 - b;
    double w = term.coeff;
    pe.v += w * g * f;
    pe.vx += w * (g1 * f + g * f1 * ob);
    pe.vxx += w * (g2 * f + 2.0 * g1 * f1 * ob + g * (f2 * ob * ob - f1 * bp));
    pe.vxxx += w * (g3 * f + 3.0 * g2 * f1 * ob + 3.0 * g1 * (f2 * ob * ob - f1 * bp) +
                    g * (f3 * ob * ob * ob - 3.0 * f2 * ob * bp - f1 * bpp));
    pe.vt += w * (1.0 - prm_.c) * (g1 * f - g * b * f1);
}

ApproxSolution::PointEval ApproxSolution::eval_full(double t, double x, bool sharp) const {
    if (sharp && !has_sharp_)
        throw WrongExponent("v_# requires p = 4 and the (2,0) cascade entry");
    const int p = prm_.p;
    const double c = prm_.c;
    double yc = x + (1.0 - c) * t;
    double y = x - alpha(yc);
    double b = beta(yc), bp = beta_prime(yc), bpp = beta_second(yc);
    double ob = 1.0 - b;

    PointEval pe;
    // Q(y): analytic derivatives, no interpolation error.
    {
        double f = profiles::Q(p, y);
        double f1 = profiles::Q_prime(p, y);
        double f2 = profiles::Q_second(p, y);
        double f3 = profiles::Q_third(p, y);
        pe.v += f;
        pe.vx += f1 * ob;
        pe.vxx += f2 * ob * ob - f1 * bp;
        pe.vxxx += f3 * ob * ob * ob - 3.0 * f2 * ob * bp - f1 * bpp;
        pe.vt += (1.0 - c) * (-b * f1);
    }
    // Q_c(y_c)
    {
        profiles::QcPowDerivs qd = profiles::qc_pow(prm_, 1, yc);
        pe.v += qd.v;
        pe.vx += qd.d1;
        pe.vxx += qd.d2;
        pe.vxxx += qd.d3;
        pe.vt += (1.0 - c) * qd.d1;
    }
    for (const Term& term : terms_) accumulate(pe, term, yc, y, b, bp, bpp);
    if (sharp) accumulate(pe, sharp_term_, yc, y, b, bp, bpp);
    return pe;
}

double ApproxSolution::eval_v(double t, double x) const { return eval_full(t, x).v; }

double ApproxSolution::eval_v_sharp(double t, double x) const {
    return eval_full(t, x, true).v;
}

GridFunction ApproxSolution::evaluation_grid(double t, double h_target) const {
    const double c = prm_.c;
    double xc_center = -(1.0 - c) * std::abs(t);
    double margin_c = 28.0 / std::sqrt(c) + 10.0;
    ShiftConstants sc = shift_constants(cas_, c);
    double big = std::abs(sc.Delta) + 44.0;
    double lo = std::min(xc_center - margin_c, -big);
    double hi = std::max(-xc_center + margin_c, big);
    int n = int(std::ceil((hi - lo) / h_target)) + 1;
    return GridFunction(lo, hi, n);
}

double ApproxSolution::w_h1_norm(double t, double h_target) const {
    GridFunction g = evaluation_grid(t, h_target);
    GridFunction w = GridFunction::zeros_like(g);
    const int p = prm_.p;
    for (int i = 0; i < g.size(); ++i) {
        double x = g.x(i);
        double yc = x + (1.0 - prm_.c) * t;
        double y = x - alpha(yc);
        w[i] = eval_v(t, x) - profiles::Q(p, y) - profiles::Qc(prm_, yc);
    }
    return w.h1c_norm(1.0);
}

ApproxSolution::Residual ApproxSolution::residual(double t, bool sharp, double h_target) const {
    GridFunction g = evaluation_grid(t, h_target);
    Residual res;
    res.S = GridFunction::zeros_like(g);
    const int p = prm_.p;
    for (int i = 0; i < g.size(); ++i) {
        PointEval pe = eval_full(t, g.x(i), sharp);
        res.S[i] = pe.vt + pe.vxxx - pe.vx + p * std::pow(pe.v, p - 1) * pe.vx;
    }
    res.l2 = res.S.l2_norm();
    GridFunction d1 = res.S.derivative(1);
    res.dx_l2 = d1.l2_norm();
    res.dxx_l2 = res.S.derivative(2).l2_norm();
    return res;
}

ApproxSolution::RecompositionError ApproxSolution::recomposition_error(int side,
                                                                       double h_target) const {
    if (prm_.p != 4) throw WrongExponent("recomposition estimates are for p = 4");
    if (!cas_.find(2, 0)) throw Error("recomposition needs the (2,0) cascade entry");
    const double c = prm_.c;
    const double Tc = prm_.Tc();
    const double t = side * Tc;
    ShiftConstants sc = shift_constants(cas_, c);

    GridFunction g = evaluation_grid(t, h_target);
    GridFunction diff2 = GridFunction::zeros_like(g);  // v - Q - Q_c, both shifted
    GridFunction difff = GridFunction::zeros_like(g);  // additionally removes the (Q_c^2)' tail
    const int p = prm_.p;
    for (int i = 0; i < g.size(); ++i) {
        double x = g.x(i);
        double yc = x + (1.0 - c) * t;
        double v = eval_v(t, x);
        double two = profiles::Q(p, x - side * sc.Delta / 2.0) +
                     profiles::Qc(prm_, x + side * ((1.0 - c) * Tc - sc.Delta_c / 2.0));
        profiles::QcPowDerivs q2 = profiles::qc_pow(prm_, 2, yc);
        diff2[i] = v - two;
        // v carries -side * b20 (Q_c^2)'(y_c) at t = side T_c; remove it
        difff[i] = diff2[i] + side * b20_ * q2.d1;
    }
    RecompositionError out;
    out.Delta = sc.Delta;
    out.Delta_c = sc.Delta_c;
    out.err_full = difff.h1c_norm(1.0);
    out.err_two_soliton = diff2.h1c_norm(1.0);
    out.err_dx = diff2.derivative(1).l2_norm();

    // Right tail: || v(T_c) - Q(. - Delta/2) ||_{H^1(x > -T_c/2)} (evaluated at side=+1 frame).
    double tp = Tc;
    GridFunction gg = evaluation_grid(tp, h_target);
    double lo = -Tc / 2.0;
    int i0 = 0;
    while (i0 < gg.size() && gg.x(i0) < lo) ++i0;
    int m = gg.size() - i0;
    if (m > 16) {
        GridFunction tail(gg.x(i0), gg.x(gg.size() - 1), m);
        for (int i = 0; i < m; ++i) {
            double x = tail.x(i);
            tail[i] = eval_v(tp, x) - profiles::Q(p, x - sc.Delta / 2.0);
        }
        out.err_right_tail = tail.h1c_norm(1.0);
    }
    return out;
}

double p2_two_soliton(double c, double t, double x) {
    const double rc = std::sqrt(c);
    const double la = 2.0 * std::log((1.0 - rc) / (1.0 + rc)); // log alpha
    const double th[4] = {0.0, x - t, rc * (x - c * t), (x - t) + rc * (x - c * t) + la};
    const double ka[4] = {0.0, 1.0, rc, 1.0 + rc};
    double m = th[0];
    for (double v : th) m = std::max(m, v);
    double s0 = 0, s1 = 0, s2 = 0;
    for (int i = 0; i < 4; ++i) {
        double e = std::exp(th[i] - m);
        s0 += e;
        s1 += ka[i] * e;
        s2 += ka[i] * ka[i] * e;
    }
    return 6.0 * (s2 * s0 - s1 * s1) / (s0 * s0);
}

P2ShiftConstants p2_shift_constants(double c) {
    P2ShiftConstants out;
    double rc = std::sqrt(c);
    out.alpha = std::pow((1.0 - rc) / (1.0 + rc), 2);
    out.Delta_prime = -std::log(out.alpha);
    out.Delta_prime_c = -out.Delta_prime / rc;
    return out;
}

} // namespace gkdv
