#include "gkdv/profiles.hpp"

#include <cmath>

namespace gkdv {
namespace profiles {

namespace {
// sech(y) without overflow for large |y|.
double sech(double y) {
    double a = std::abs(y);
    if (a > 700.0) return 0.0;
    return 2.0 * std::exp(-a) / (1.0 + std::exp(-2.0 * a));
}
} // namespace

double Q_max(int p) { return std::pow(0.5 * (p + 1), 1.0 / (p - 1)); }

double Q(int p, double x) {
    double s = sech(0.5 * (p - 1) * x);
    return std::pow(0.5 * (p + 1) * s * s, 1.0 / (p - 1));
}

double phi(int p, double x) { return std::tanh(0.5 * (p - 1) * x); }

double phi_prime(int p, double x) {
    return double(p - 1) / (p + 1) * std::pow(Q(p, x), p - 1);
}

double phi_second(int p, double x) {
    double q = Q(p, x);
    return double((p - 1) * (p - 1)) / (p + 1) * Q_prime(p, x) * std::pow(q, p - 2);
}

double Q_prime(int p, double x) { return -phi(p, x) * Q(p, x); }

double Q_second(int p, double x) {
    double q = Q(p, x);
    return q - std::pow(q, p);
}

double Q_third(int p, double x) {
    // (Q'' )' = Q' - p Q^{p-1} Q'
    double q = Q(p, x);
    return Q_prime(p, x) * (1.0 - p * std::pow(q, p - 1));
}

double L_phi(int p, double x) {
    double q = Q(p, x);
    return -phi_second(p, x) + phi(p, x) * (1.0 - p * std::pow(q, p - 1));
}

double Qc(const SolitonParams& prm, double x) {
    return std::pow(prm.c, 1.0 / (prm.p - 1)) * Q(prm.p, std::sqrt(prm.c) * x);
}

double Qc_prime(const SolitonParams& prm, double x) {
    double rc = std::sqrt(prm.c);
    return -rc * phi(prm.p, rc * x) * Qc(prm, x);
}

QcPowDerivs qc_pow(const SolitonParams& prm, int k, double x) {
    const int p = prm.p;
    const double c = prm.c;
    const double rc = std::sqrt(c);
    const double qc = Qc(prm, x);
    const double ph = phi(p, rc * x);
    auto powk = [&](int m) { return std::pow(qc, m); };
    auto d1_of = [&](int m, double val) { return -double(m) * rc * ph * val; }; // (Q_c^m)'
    QcPowDerivs r;
    r.v = powk(k);
    r.d1 = d1_of(k, r.v);
    const double mu = double(k) * (2 * k + p - 1) / (p + 1);
    const double qkp = powk(k + p - 1);
    r.d2 = c * k * k * r.v - mu * qkp;
    r.d3 = c * k * k * r.d1 - mu * d1_of(k + p - 1, qkp);
    const double nu = double(k) * (k + p - 1) * (2 * k + p - 1) * (2 * k + 3 * p - 3) /
                      double((p + 1) * (p + 1));
    r.d4 = c * c * std::pow(double(k), 4) * r.v -
           c * mu * (k * k + (k + p - 1) * (k + p - 1)) * qkp + nu * powk(k + 2 * p - 2);
    return r;
}

Moments moments(int p, double half_width, int n, double tail_tol) {
    if (Q(p, half_width) > tail_tol)
        throw TailTruncation("profile tail above tolerance at grid boundary");
    Moments m;
    auto integ = [&](const std::function<double(double)>& f) {
        return GridFunction::sample(-half_width, half_width, n, f).integrate();
    };
    m.intQ = integ([&](double x) { return Q(p, x); });
    m.intQ2 = integ([&](double x) { double q = Q(p, x); return q * q; });
    m.intQ3 = integ([&](double x) { double q = Q(p, x); return q * q * q; });
    m.intQp1 = integ([&](double x) { return std::pow(Q(p, x), p + 1); });
    m.intQx2 = integ([&](double x) { double d = Q_prime(p, x); return d * d; });
    m.energy = 0.5 * m.intQx2 - m.intQp1 / (p + 1);
    return m;
}

GridFunction sample_profile(const std::function<double(double)>& f, double half_width, int n) {
    return GridFunction::sample(-half_width, half_width, n, f);
}

} // namespace profiles
} // namespace gkdv
