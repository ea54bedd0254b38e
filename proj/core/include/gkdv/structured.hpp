#pragma once

#include "gkdv/grid.hpp"
#include "gkdv/linop.hpp"
#include "gkdv/polynomial.hpp"

namespace gkdv {

/// A function with the decomposition f = ybar + tilde + phi * hat, where ybar
/// decays (sampled on the context grid), tilde and hat are polynomials, and
/// phi = tanh((p-1)x/2). The family is closed under sums, products,
/// differentiation and multiplication by decaying samples.
class StructuredFunction {
public:
    StructuredFunction() = default;
    StructuredFunction(GridFunction ybar, Polynomial tilde, Polynomial hat)
        : ybar_(std::move(ybar)), tilde_(std::move(tilde)), hat_(std::move(hat)) {}

    static StructuredFunction decaying(GridFunction g) {
        return StructuredFunction(std::move(g), Polynomial(), Polynomial());
    }
    static StructuredFunction zero(const OperatorContext& ctx) {
        return decaying(GridFunction::zeros_like(ctx.layout()));
    }
    static StructuredFunction constant(const OperatorContext& ctx, double a) {
        return StructuredFunction(GridFunction::zeros_like(ctx.layout()),
                                  Polynomial::constant(a), Polynomial());
    }
    static StructuredFunction phi_times(const OperatorContext& ctx, Polynomial hat) {
        return StructuredFunction(GridFunction::zeros_like(ctx.layout()), Polynomial(),
                                  std::move(hat));
    }

    const GridFunction& ybar() const { return ybar_; }
    const Polynomial& tilde() const { return tilde_; }
    const Polynomial& hat() const { return hat_; }

    bool has_layout(const GridFunction& g) const { return ybar_.same_layout(g); }

    // Pointwise evaluation anywhere (ybar interpolated, 0 outside its grid).
    double eval(int p, double x) const;

    // Samples on the context grid (exact grid values, no interpolation).
    GridFunction on_grid(const OperatorContext& ctx) const;

    StructuredFunction operator+(const StructuredFunction& o) const;
    StructuredFunction operator-(const StructuredFunction& o) const;
    StructuredFunction scaled(double s) const;

    // Product, using phi^2 = 1 - (1 - phi^2) with 1 - phi^2 decaying.
    StructuredFunction mul(const OperatorContext& ctx, const StructuredFunction& o) const;

    // Multiplication by a decaying sampled factor g (absorbs everything into ybar).
    StructuredFunction mul_decaying(const OperatorContext& ctx, const GridFunction& g) const;

    // d/dx, with (phi * hat)' = phi' hat + phi hat' and phi' decaying.
    StructuredFunction derivative(const OperatorContext& ctx, int accuracy = 4) const;

    // Largest deviation from even (parity=+1) or odd (parity=-1) symmetry of the
    // grid samples, relative to the max magnitude.
    double parity_defect(const OperatorContext& ctx, int parity) const;

    int max_poly_degree() const { return std::max(tilde_.degree(), hat_.degree()); }

private:
    GridFunction ybar_;
    Polynomial tilde_, hat_;
};

} // namespace gkdv
