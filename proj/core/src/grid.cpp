#include "gkdv/grid.hpp"

#include <algorithm>
#include <cmath>

namespace gkdv {

GridFunction::GridFunction(double x_min, double x_max, int n)
    : x_min_(x_min), x_max_(x_max), values_(size_t(n), 0.0) {
    if (n < 8 || !(x_max > x_min))
        throw Error("GridFunction needs x_max > x_min and n >= 8");
    h_ = (x_max - x_min) / (n - 1);
}

GridFunction GridFunction::sample(double x_min, double x_max, int n,
                                  const std::function<double(double)>& f) {
    GridFunction g(x_min, x_max, n);
    for (int i = 0; i < n; ++i) g.values_[size_t(i)] = f(g.x(i));
    return g;
}

GridFunction GridFunction::zeros_like(const GridFunction& g) {
    GridFunction z(g.x_min_, g.x_max_, g.size());
    return z;
}

bool GridFunction::same_layout(const GridFunction& g) const {
    return size() == g.size() && std::abs(x_min_ - g.x_min_) < 1e-12 &&
           std::abs(x_max_ - g.x_max_) < 1e-12;
}

void GridFunction::require_layout(const GridFunction& g) const {
    if (!same_layout(g)) throw GridMismatch("grid layouts differ");
}

GridFunction& GridFunction::operator+=(const GridFunction& g) {
    require_layout(g);
    for (size_t i = 0; i < values_.size(); ++i) values_[i] += g.values_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& g) {
    require_layout(g);
    for (size_t i = 0; i < values_.size(); ++i) values_[i] -= g.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(const GridFunction& g) {
    require_layout(g);
    for (size_t i = 0; i < values_.size(); ++i) values_[i] *= g.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

double GridFunction::integrate() const {
    const int n = size();
    const std::vector<double>& f = values_;
    if (n < 4) throw Error("integrate: grid too small");
    double acc = 0.0;
    int m = n;
    // Composite Simpson needs an even interval count; peel a 3/8 panel otherwise.
    if (n % 2 == 0) {
        acc += 3.0 * h_ / 8.0 * (f[size_t(n - 4)] + 3 * f[size_t(n - 3)] + 3 * f[size_t(n - 2)] + f[size_t(n - 1)]);
        m = n - 3;
    }
    double s_odd = 0.0, s_even = 0.0;
    for (int i = 1; i < m - 1; i += 2) s_odd += f[size_t(i)];
    for (int i = 2; i < m - 1; i += 2) s_even += f[size_t(i)];
    acc += h_ / 3.0 * (f[0] + 4.0 * s_odd + 2.0 * s_even + f[size_t(m - 1)]);
    return acc;
}

double GridFunction::inner(const GridFunction& g) const {
    require_layout(g);
    GridFunction prod = *this;
    prod *= g;
    return prod.integrate();
}

double GridFunction::l2_norm() const { return std::sqrt(std::max(0.0, inner(*this))); }

double GridFunction::h1c_norm(double c) const {
    GridFunction d = derivative(1);
    double a = d.inner(d), b = inner(*this);
    return std::sqrt(std::max(0.0, a + c * b));
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

GridFunction GridFunction::derivative(int order, int accuracy) const {
    const int n = size();
    const std::vector<double>& f = values_;
    GridFunction d = zeros_like(*this);
    auto at = [&](int i) { return f[size_t(std::clamp(i, 0, n - 1))]; };
    if (accuracy == 6) {
        // centered 7/9-point stencils; 4th-order one-sided rows near the edges
        GridFunction base = derivative(order, 4);
        if (order == 1) {
            const double w = 1.0 / (60.0 * h_);
            for (int i = 3; i < n - 3; ++i)
                d[i] = w * (-f[size_t(i - 3)] + 9 * f[size_t(i - 2)] - 45 * f[size_t(i - 1)] +
                            45 * f[size_t(i + 1)] - 9 * f[size_t(i + 2)] + f[size_t(i + 3)]);
            for (int i : {0, 1, 2, n - 3, n - 2, n - 1}) d[i] = base[i];
        } else if (order == 2) {
            const double w = 1.0 / (180.0 * h_ * h_);
            for (int i = 3; i < n - 3; ++i)
                d[i] = w * (2 * f[size_t(i - 3)] - 27 * f[size_t(i - 2)] + 270 * f[size_t(i - 1)] -
                            490 * f[size_t(i)] + 270 * f[size_t(i + 1)] - 27 * f[size_t(i + 2)] +
                            2 * f[size_t(i + 3)]);
            for (int i : {0, 1, 2, n - 3, n - 2, n - 1}) d[i] = base[i];
        } else if (order == 3) {
            const double w = 1.0 / h_ / h_ / h_;
            for (int i = 4; i < n - 4; ++i)
                d[i] = w * (-7.0 / 240 * f[size_t(i - 4)] + 3.0 / 10 * f[size_t(i - 3)] -
                            169.0 / 120 * f[size_t(i - 2)] + 61.0 / 30 * f[size_t(i - 1)] -
                            61.0 / 30 * f[size_t(i + 1)] + 169.0 / 120 * f[size_t(i + 2)] -
                            3.0 / 10 * f[size_t(i + 3)] + 7.0 / 240 * f[size_t(i + 4)]);
            for (int i : {0, 1, 2, 3, n - 4, n - 3, n - 2, n - 1}) d[i] = base[i];
        } else {
            throw Error("derivative: order must be 1, 2 or 3");
        }
        return d;
    }
    if (accuracy != 4) throw Error("derivative: accuracy must be 4 or 6");
    if (order == 1) {
        const double w = 1.0 / (12.0 * h_);
        for (int i = 2; i < n - 2; ++i)
            d[i] = w * (f[size_t(i - 2)] - 8 * f[size_t(i - 1)] + 8 * f[size_t(i + 1)] - f[size_t(i + 2)]);
        for (int i : {0, 1, n - 2, n - 1}) {
            int s = (i < 2) ? 1 : -1;  // one-sided 4th-order
            d[i] = s / (12.0 * h_) *
                   (-25 * at(i) + 48 * at(i + s) - 36 * at(i + 2 * s) + 16 * at(i + 3 * s) - 3 * at(i + 4 * s));
        }
    } else if (order == 2) {
        const double w = 1.0 / (12.0 * h_ * h_);
        for (int i = 2; i < n - 2; ++i)
            d[i] = w * (-f[size_t(i - 2)] + 16 * f[size_t(i - 1)] - 30 * f[size_t(i)] +
                        16 * f[size_t(i + 1)] - f[size_t(i + 2)]);
        for (int i : {0, 1, n - 2, n - 1}) {
            int s = (i < 2) ? 1 : -1;
            d[i] = 1.0 / (12.0 * h_ * h_) *
                   (45 * at(i) - 154 * at(i + s) + 214 * at(i + 2 * s) - 156 * at(i + 3 * s) +
                    61 * at(i + 4 * s) - 10 * at(i + 5 * s));
        }
    } else if (order == 3) {
        const double w = 1.0 / (8.0 * h_ * h_ * h_);
        for (int i = 3; i < n - 3; ++i)
            d[i] = w * (f[size_t(i - 3)] - 8 * f[size_t(i - 2)] + 13 * f[size_t(i - 1)] -
                        13 * f[size_t(i + 1)] + 8 * f[size_t(i + 2)] - f[size_t(i + 3)]);
        for (int i : {0, 1, 2, n - 3, n - 2, n - 1}) {
            int s = (i < 3) ? 1 : -1;
            // one-sided 2nd-order; used only where the tails have decayed
            d[i] = s / (2.0 * h_ * h_ * h_) *
                   (-5 * at(i) + 18 * at(i + s) - 24 * at(i + 2 * s) + 14 * at(i + 3 * s) - 3 * at(i + 4 * s));
        }
    } else {
        throw Error("derivative: order must be 1, 2 or 3");
    }
    return d;
}

GridFunction GridFunction::cumulative() const {
    const int n = size();
    const std::vector<double>& f = values_;
    GridFunction I = zeros_like(*this);
    if (n < 5) throw Error("cumulative: grid too small");
    // panel [x_0, x_1] from the cubic through the first four points
    I[1] = I[0] + h_ / 24.0 * (9 * f[0] + 19 * f[1] - 5 * f[2] + f[3]);
    for (int i = 1; i < n - 2; ++i)
        I[i + 1] = I[i] + h_ / 24.0 * (-f[size_t(i - 1)] + 13 * f[size_t(i)] + 13 * f[size_t(i + 1)] - f[size_t(i + 2)]);
    I[n - 1] = I[n - 2] + h_ / 24.0 * (f[size_t(n - 4)] - 5 * f[size_t(n - 3)] + 19 * f[size_t(n - 2)] + 9 * f[size_t(n - 1)]);
    return I;
}

double GridFunction::interp(double x) const {
    const int n = size();
    if (x < x_min_ || x > x_max_) return 0.0;
    int j = int(std::floor((x - x_min_) / h_));
    j = std::clamp(j, 0, n - 2);
    int lo = std::clamp(j - 2, 0, n - 6);
    double t = (x - this->x(lo)) / h_;  // in units of h from node lo
    double w[6];
    for (int k = 0; k < 6; ++k) {
        double num = 1.0, den = 1.0;
        for (int m = 0; m < 6; ++m) {
            if (m == k) continue;
            num *= (t - m);
            den *= double(k - m);
        }
        w[k] = num / den;
    }
    double acc = 0.0;
    for (int k = 0; k < 6; ++k) acc += w[k] * values_[size_t(lo + k)];
    return acc;
}

double GridFunction::parity_defect(int parity) const {
    if (!symmetric_layout()) throw Error("parity_defect needs a symmetric grid");
    double m = max_abs();
    if (m == 0.0) return 0.0;
    double worst = 0.0;
    for (int i = 0; i < size(); ++i)
        worst = std::max(worst, std::abs(values_[size_t(i)] - parity * values_[size_t(mirror(i))]));
    return worst / m;
}

void GridFunction::symmetrize(int parity) {
    if (!symmetric_layout()) throw Error("symmetrize needs a symmetric grid");
    for (int i = 0; i < size() / 2; ++i) {
        int j = mirror(i);
        double a = values_[size_t(i)], b = values_[size_t(j)];
        double s = 0.5 * (a + parity * b);
        values_[size_t(i)] = s;
        values_[size_t(j)] = parity * s;
    }
}

} // namespace gkdv
