#include "gkdv/structured.hpp"

#include <cmath>

namespace gkdv {

double StructuredFunction::eval(int p, double x) const {
    double acc = ybar_.interp(x);
    acc += tilde_.eval(x);
    if (!hat_.zero()) acc += profiles::phi(p, x) * hat_.eval(x);
    return acc;
}

GridFunction StructuredFunction::on_grid(const OperatorContext& ctx) const {
    ctx.layout().require_layout(ybar_);
    GridFunction g = ybar_;
    const int p = ctx.params().p;
    for (int i = 0; i < g.size(); ++i) {
        double x = g.x(i);
        g[i] += tilde_.eval(x);
        if (!hat_.zero()) g[i] += profiles::phi(p, x) * hat_.eval(x);
    }
    return g;
}

StructuredFunction StructuredFunction::operator+(const StructuredFunction& o) const {
    return StructuredFunction(ybar_ + o.ybar_, tilde_ + o.tilde_, hat_ + o.hat_);
}

StructuredFunction StructuredFunction::operator-(const StructuredFunction& o) const {
    return StructuredFunction(ybar_ - o.ybar_, tilde_ - o.tilde_, hat_ - o.hat_);
}

StructuredFunction StructuredFunction::scaled(double s) const {
    return StructuredFunction(ybar_ * s, tilde_ * s, hat_ * s);
}

StructuredFunction StructuredFunction::mul(const OperatorContext& ctx,
                                           const StructuredFunction& o) const {
    ctx.layout().require_layout(ybar_);
    ctx.layout().require_layout(o.ybar_);
    const int p = ctx.params().p;
    const GridFunction& lay = ctx.layout();
    // (a + t + phi h)(b + s + phi g) =
    //   [ab + as + bt + phi(ag + bh) - (1-phi^2) h g]    (decaying)
    // + [ts + hg]                                        (tilde)
    // + phi [tg + sh]                                    (hat)
    GridFunction yb = GridFunction::zeros_like(lay);
    for (int i = 0; i < yb.size(); ++i) {
        double x = lay.x(i);
        double a = ybar_[i], b = o.ybar_[i];
        double t = tilde_.eval(x), s = o.tilde_.eval(x);
        double h = hat_.eval(x), g = o.hat_.eval(x);
        double ph = profiles::phi(p, x);
        double one_minus_phi2 = 1.0 - ph * ph;
        yb[i] = a * b + a * s + b * t + ph * (a * g + b * h) - one_minus_phi2 * h * g;
    }
    Polynomial nt = tilde_ * o.tilde_ + hat_ * o.hat_;
    Polynomial nh = tilde_ * o.hat_ + o.tilde_ * hat_;
    return StructuredFunction(std::move(yb), std::move(nt), std::move(nh));
}

StructuredFunction StructuredFunction::mul_decaying(const OperatorContext& ctx,
                                                    const GridFunction& g) const {
    ctx.layout().require_layout(g);
    GridFunction vals = on_grid(ctx);
    vals *= g;
    return decaying(std::move(vals));
}

StructuredFunction StructuredFunction::derivative(const OperatorContext& ctx, int accuracy) const {
    ctx.layout().require_layout(ybar_);
    const int p = ctx.params().p;
    GridFunction yb = ybar_.derivative(1, accuracy);
    if (!hat_.zero()) {
        for (int i = 0; i < yb.size(); ++i) {
            double x = yb.x(i);
            yb[i] += profiles::phi_prime(p, x) * hat_.eval(x);
        }
    }
    return StructuredFunction(std::move(yb), tilde_.derivative(), hat_.derivative());
}

double StructuredFunction::parity_defect(const OperatorContext& ctx, int parity) const {
    GridFunction g = on_grid(ctx);
    return g.parity_defect(parity);
}

} // namespace gkdv
