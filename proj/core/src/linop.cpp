#include "gkdv/linop.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <vector>

namespace gkdv {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct OperatorContext::Factorization {
    Eigen::SparseLU<SpMat> lu;
    std::vector<double> weights; // quadrature weights of the constraint row
    bool ok = false;
};

OperatorContext::OperatorContext(const SolitonParams& prm, double half_width, int n)
    : prm_(prm) {
    Q_ = GridFunction::sample(-half_width, half_width, n,
                              [&](double x) { return profiles::Q(prm_.p, x); });
    Qp_ = GridFunction::sample(-half_width, half_width, n,
                               [&](double x) { return profiles::Q_prime(prm_.p, x); });
    pot_ = GridFunction::sample(-half_width, half_width, n, [&](double x) {
        return prm_.p * std::pow(profiles::Q(prm_.p, x), prm_.p - 1);
    });
    GridFunction q2 = Q_ * Q_;
    intQ2_ = q2.cumulative();
    double total = intQ2_.integrate(); // unused; keep the symmetric convention below
    (void)total;
    double half = q2.integrate() / 2.0;
    for (int i = 0; i < intQ2_.size(); ++i) intQ2_[i] -= half;
    intQ2_.symmetrize(-1);
}

OperatorContext::~OperatorContext() = default;
OperatorContext::OperatorContext(OperatorContext&&) noexcept = default;
OperatorContext& OperatorContext::operator=(OperatorContext&&) noexcept = default;

GridFunction OperatorContext::sample(const std::function<double(double)>& f) const {
    return GridFunction::sample(Q_.x_min(), Q_.x_max(), Q_.size(), f);
}

GridFunction OperatorContext::apply_L(const GridFunction& f) const {
    Q_.require_layout(f);
    GridFunction out = f.derivative(2, 6);
    for (int i = 0; i < f.size(); ++i) out[i] = -out[i] + f[i] - pot_[i] * f[i];
    return out;
}

namespace {
// Simpson-type quadrature weights matching GridFunction::integrate().
std::vector<double> quad_weights(int n, double h) {
    std::vector<double> w(size_t(n), 0.0);
    int m = n;
    if (n % 2 == 0) {
        w[size_t(n - 4)] += 3.0 * h / 8.0;
        w[size_t(n - 3)] += 9.0 * h / 8.0;
        w[size_t(n - 2)] += 9.0 * h / 8.0;
        w[size_t(n - 1)] += 3.0 * h / 8.0;
        m = n - 3;
    }
    w[0] += h / 3.0;
    w[size_t(m - 1)] += h / 3.0;
    for (int i = 1; i < m - 1; i += 2) w[size_t(i)] += 4.0 * h / 3.0;
    for (int i = 2; i < m - 1; i += 2) w[size_t(i)] += 2.0 * h / 3.0;
    return w;
}
} // namespace

void OperatorContext::ensure_factorized() const {
    if (fact_ && fact_->ok) return;
    fact_ = std::make_unique<Factorization>();
    const int n = Q_.size();
    const double h = Q_.spacing();
    const double ih2 = 1.0 / (12.0 * h * h);
    std::vector<Triplet> trip;
    trip.reserve(size_t(n) * 6 + size_t(2) * n);
    // Dirichlet rows at the two outermost points per side (decay enforced).
    for (int i : {0, 1, n - 2, n - 1}) trip.emplace_back(i, i, 1.0);
    for (int i = 2; i < n - 2; ++i) {
        // -f'' with the centered 4th-order stencil, plus (1 - potential) f
        trip.emplace_back(i, i - 2, ih2);
        trip.emplace_back(i, i - 1, -16.0 * ih2);
        trip.emplace_back(i, i, 30.0 * ih2 + 1.0 - pot_[i]);
        trip.emplace_back(i, i + 1, -16.0 * ih2);
        trip.emplace_back(i, i + 2, ih2);
    }
    // Lagrange multiplier: L f + lambda Q' = h, <f, Q'>_quad = 0.
    fact_->weights = quad_weights(n, h);
    for (int i = 0; i < n; ++i) {
        double wq = fact_->weights[size_t(i)] * Qp_[i];
        if (wq != 0.0) trip.emplace_back(n, i, wq);
        if (Qp_[i] != 0.0 && i >= 2 && i < n - 2) trip.emplace_back(i, n, Qp_[i]);
    }
    SpMat A(n + 1, n + 1);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    fact_->lu.compute(A);
    if (fact_->lu.info() != Eigen::Success)
        throw SolveFailure("factorization of the constrained operator failed");
    fact_->ok = true;
}

GridFunction OperatorContext::solve_L(const GridFunction& h, double ortho_tol) const {
    Q_.require_layout(h);
    const int n = Q_.size();
    double hn = h.l2_norm();
    if (hn > 0.0) {
        double proj = h.inner(Qp_);
        double qn = Qp_.l2_norm();
        if (std::abs(proj) > ortho_tol * hn * qn)
            throw NotOrthogonal("right-hand side is not orthogonal to Q'");
    }
    ensure_factorized();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    for (int i = 2; i < n - 2; ++i) rhs[i] = h[i];
    Eigen::VectorXd sol = fact_->lu.solve(rhs);
    if (fact_->lu.info() != Eigen::Success)
        throw SolveFailure("constrained solve failed");
    GridFunction f = GridFunction::zeros_like(Q_);
    for (int i = 0; i < n; ++i) f[i] = sol[i];
    return f;
}

DecayReport OperatorContext::decay_check(const GridFunction& f) const {
    Q_.require_layout(f);
    DecayReport rep;
    const int n = f.size();
    rep.boundary_value = std::max(std::abs(f[0]), std::abs(f[n - 1]));
    double m = f.max_abs();
    if (m == 0.0) {
        rep.rate = std::numeric_limits<double>::infinity();
        rep.decaying = true;
        return rep;
    }
    const double L = f.x_max();
    auto tail_slope = [&](int dir) { // dir = +1 right tail, -1 left tail
        // least-squares fit of log|f| against |x| on |x| in [0.4 L, 0.8 L]
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (int i = 0; i < n; ++i) {
            double x = f.x(i) * dir;
            if (x < 0.4 * L || x > 0.8 * L) continue;
            double a = std::abs(f[i]);
            if (a < m * 1e-280) continue;
            double y = std::log(a);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++cnt;
        }
        if (cnt < 8) return 0.0;
        return -(cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    };
    double r1 = tail_slope(+1), r2 = tail_slope(-1);
    rep.rate = 0.5 * (r1 + r2);
    rep.decaying = (rep.rate > 0.05) && (rep.boundary_value < 1e-4 * m);
    return rep;
}

GridFunction OperatorContext::V0() const {
    const int p = prm_.p;
    return sample([&](double x) {
        return -profiles::Q(p, x) / (p - 1) - 1.5 * x * profiles::Q_prime(p, x);
    });
}

GridFunction OperatorContext::V1() const {
    const int p = prm_.p;
    if (p == 2)
        return sample([&](double x) {
            return -2.0 * profiles::Q(p, x) - x * profiles::Q_prime(p, x);
        });
    // p = 4: V1 = (Q' * int_0^x Q^2 - 2 Q^3) / 3
    GridFunction v = GridFunction::zeros_like(Q_);
    for (int i = 0; i < v.size(); ++i) {
        double q = Q_[i];
        v[i] = (Qp_[i] * intQ2_[i] - 2.0 * q * q * q) / 3.0;
    }
    return v;
}

GridFunction OperatorContext::Z0() const {
    // Z0 = 3Q'' + 3V0'' + pQ^{p-1} V0 with V0'' in closed form:
    // V0'' = -Q''/(p-1) - (3/2)(2Q'' + x Q''')
    const int p = prm_.p;
    return sample([&](double x) {
        double q2 = profiles::Q_second(p, x);
        double q3 = profiles::Q_third(p, x);
        double v0 = -profiles::Q(p, x) / (p - 1) - 1.5 * x * profiles::Q_prime(p, x);
        double v0pp = -q2 / (p - 1) - 1.5 * (2.0 * q2 + x * q3);
        double pot = p * std::pow(profiles::Q(p, x), p - 1);
        return 3.0 * q2 + 3.0 * v0pp + pot * v0;
    });
}

GridFunction OperatorContext::Z1() const {
    // V1'' = V1 - pQ^{p-1}V1 - pQ^{p-1}  (from  L V1 = pQ^{p-1})
    GridFunction v1 = V1();
    GridFunction z = GridFunction::zeros_like(Q_);
    for (int i = 0; i < z.size(); ++i) {
        double v1pp = v1[i] - pot_[i] * v1[i] - pot_[i];
        z[i] = 3.0 * v1pp + pot_[i] * v1[i] + pot_[i];
    }
    return z;
}

GridFunction OperatorContext::L_phi() const {
    const int p = prm_.p;
    return sample([&](double x) { return profiles::L_phi(p, x); });
}

} // namespace gkdv
