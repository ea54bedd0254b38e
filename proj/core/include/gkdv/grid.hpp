#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "gkdv/errors.hpp"

namespace gkdv {

/// Samples of a real function on a uniform 1-D grid, with the quadrature and
/// differentiation rules used throughout the construction (composite Simpson,
/// centered 4th-order stencils, 6-point Lagrange interpolation).
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(double x_min, double x_max, int n);

    static GridFunction sample(double x_min, double x_max, int n,
                               const std::function<double(double)>& f);

    // Zero function on the same layout as g.
    static GridFunction zeros_like(const GridFunction& g);

    int size() const { return int(values_.size()); }
    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    double spacing() const { return h_; }
    double x(int i) const { return x_min_ + h_ * i; }

    double& operator[](int i) { return values_[i]; }
    double operator[](int i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    bool same_layout(const GridFunction& g) const;
    void require_layout(const GridFunction& g) const;

    GridFunction& operator+=(const GridFunction& g);
    GridFunction& operator-=(const GridFunction& g);
    GridFunction& operator*=(const GridFunction& g);
    GridFunction& operator*=(double s);
    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator*(GridFunction a, const GridFunction& b) { return a *= b; }
    friend GridFunction operator*(GridFunction a, double s) { return a *= s; }
    friend GridFunction operator*(double s, GridFunction a) { return a *= s; }

    // Composite Simpson (3/8 rule on the last panel when the point count is even).
    double integrate() const;
    double inner(const GridFunction& g) const;
    double l2_norm() const;
    // H^1_c norm (||f'||^2 + c ||f||^2)^{1/2}; c = 1 gives the plain H^1 norm.
    double h1c_norm(double c = 1.0) const;
    double max_abs() const;

    // Centered stencils in the interior (accuracy 4 or 6), one-sided at the edges.
    GridFunction derivative(int order = 1, int accuracy = 4) const;

    // Cumulative integral from the left edge, 4th-order local cubic rule.
    GridFunction cumulative() const;

    // 6-point Lagrange interpolation; returns 0 outside the grid.
    double interp(double x) const;

    // Mirror index: x(mirror(i)) == -x(i) on symmetric grids.
    int mirror(int i) const { return size() - 1 - i; }
    bool symmetric_layout() const { return std::abs(x_min_ + x_max_) < 1e-12 * (x_max_ - x_min_); }

    // Largest |f(i) - parity*f(mirror(i))| / max|f|; 0 for exactly even (parity=+1)
    // or odd (parity=-1) samples.
    double parity_defect(int parity) const;

    // Replace samples by their even/odd part.
    void symmetrize(int parity);

private:
    double x_min_ = 0.0, x_max_ = 0.0, h_ = 0.0;
    std::vector<double> values_;
};

} // namespace gkdv
