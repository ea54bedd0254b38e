#pragma once

#include <vector>

#include "gkdv/errors.hpp"

namespace gkdv {

enum class Parity { Even, Odd, None };

/// Real polynomial in the monomial basis; degree -1 encodes the zero polynomial.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Polynomial constant(double a) { return Polynomial({a}); }

    int degree() const { return int(c_.size()) - 1; }
    bool zero() const { return c_.empty(); }
    double coeff(int k) const { return (k >= 0 && k < int(c_.size())) ? c_[size_t(k)] : 0.0; }
    const std::vector<double>& coeffs() const { return c_; }

    double eval(double x) const {
        double acc = 0.0;
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    Polynomial derivative() const {
        if (c_.size() <= 1) return Polynomial();
        std::vector<double> d(c_.size() - 1);
        for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = double(k) * c_[k];
        return Polynomial(std::move(d));
    }

    // Antiderivative vanishing at 0.
    Polynomial integral_from_zero() const {
        if (c_.empty()) return Polynomial();
        std::vector<double> d(c_.size() + 1, 0.0);
        for (size_t k = 0; k < c_.size(); ++k) d[k + 1] = c_[k] / double(k + 1);
        return Polynomial(std::move(d));
    }

    Polynomial operator+(const Polynomial& o) const {
        std::vector<double> d(std::max(c_.size(), o.c_.size()), 0.0);
        for (size_t k = 0; k < d.size(); ++k) d[k] = coeff(int(k)) + o.coeff(int(k));
        return Polynomial(std::move(d));
    }
    Polynomial operator-(const Polynomial& o) const { return *this + (o * -1.0); }
    Polynomial operator*(double s) const {
        std::vector<double> d = c_;
        for (double& v : d) v *= s;
        return Polynomial(std::move(d));
    }
    Polynomial operator*(const Polynomial& o) const {
        if (zero() || o.zero()) return Polynomial();
        std::vector<double> d(c_.size() + o.c_.size() - 1, 0.0);
        for (size_t i = 0; i < c_.size(); ++i)
            for (size_t j = 0; j < o.c_.size(); ++j) d[i + j] += c_[i] * o.c_[j];
        return Polynomial(std::move(d));
    }

    Parity parity() const {
        bool even = true, odd = true;
        for (size_t k = 0; k < c_.size(); ++k) {
            if (c_[k] == 0.0) continue;
            if (k % 2 == 0) odd = false; else even = false;
        }
        if (even && odd) return Parity::Even; // zero polynomial counts as even
        if (even) return Parity::Even;
        if (odd) return Parity::Odd;
        return Parity::None;
    }

    /// Unique polynomial P with -P'' + P = R, by descending-degree back-substitution.
    static Polynomial solve_minus_d2_plus_id(const Polynomial& R) {
        if (R.zero()) return Polynomial();
        int d = R.degree();
        std::vector<double> pc(size_t(d) + 1, 0.0);
        for (int k = d; k >= 0; --k) {
            double corr = (k + 2 <= d) ? double((k + 2) * (k + 1)) * pc[size_t(k + 2)] : 0.0;
            pc[size_t(k)] = R.coeff(k) + corr;
        }
        return Polynomial(std::move(pc));
    }

private:
    std::vector<double> c_;
    void trim() {
        while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
    }
};

} // namespace gkdv
