#include "gkdv/cascade.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace gkdv {

namespace {

GridFunction q_power(const OperatorContext& ctx, int m, double coeff) {
    const int p = ctx.params().p;
    return ctx.sample([&](double x) { return coeff * std::pow(profiles::Q(p, x), m); });
}

} // namespace

std::pair<StructuredFunction, StructuredFunction> assemble_FG(const OperatorContext& ctx, int k,
                                                              int l,
                                                              const CascadeSolution& prior) {
    const int p = ctx.params().p;
    auto D = [&](const StructuredFunction& f) { return f.derivative(ctx, 6); };
    auto D2 = [&](const StructuredFunction& f) { return f.derivative(ctx, 6).derivative(ctx, 6); };

    if (k == 1 && l == 0) {
        // F = p (Q^{p-1})', G = p Q^{p-1}
        GridFunction G = q_power(ctx, p - 1, double(p));
        GridFunction F = ctx.sample([&](double x) {
            return double(p) * (p - 1) * std::pow(profiles::Q(p, x), p - 2) *
                   profiles::Q_prime(p, x);
        });
        return {StructuredFunction::decaying(std::move(F)),
                StructuredFunction::decaying(std::move(G))};
    }

    if (k == 2 && l == 0) {
        const OmegaSolution& s1 = prior.at(1, 0);
        const StructuredFunction& A1 = s1.A;
        const StructuredFunction& B1 = s1.B;
        const double a1 = s1.a;
        GridFunction Qg = ctx.Q();
        GridFunction Qpp = ctx.sample([&](double x) { return profiles::Q_second(p, x); });
        GridFunction Qppp = ctx.sample([&](double x) { return profiles::Q_third(p, x); });
        if (p == 2) {
            GridFunction twoQ = Qg * 2.0;
            StructuredFunction F =
                D(A1.scaled(-1.0) + A1.mul(ctx, A1)) -
                (D2(B1).scaled(3.0) + B1.mul_decaying(ctx, twoQ)) -
                D(StructuredFunction::decaying(Qg) + D2(A1).scaled(3.0) +
                  A1.mul_decaying(ctx, twoQ)).scaled(a1) +
                StructuredFunction::decaying(Qppp * (3.0 * a1 * a1));
            StructuredFunction G =
                A1 + A1.mul(ctx, A1) +
                D(B1.scaled(-2.0) + A1.mul(ctx, B1)) -
                D(A1.derivative(ctx).scaled(9.0) + D2(B1).scaled(3.0) +
                  B1.mul_decaying(ctx, twoQ)).scaled(0.5 * a1) +
                StructuredFunction::decaying(Qpp * (1.5 * a1 * a1));
            return {F, G};
        }
        // p = 4
        GridFunction sixQ2 = ctx.sample([&](double x) {
            double q = profiles::Q(p, x);
            return 6.0 * q * q;
        });
        GridFunction fourQ3 = q_power(ctx, 3, 4.0);
        StructuredFunction oneA = StructuredFunction::constant(ctx, 1.0) + A1;
        StructuredFunction oneA2 = oneA.mul(ctx, oneA);
        StructuredFunction F =
            D(oneA2.mul_decaying(ctx, sixQ2)) -
            D(StructuredFunction::decaying(fourQ3) + D2(A1).scaled(3.0) +
              A1.mul_decaying(ctx, fourQ3)).scaled(a1) +
            StructuredFunction::decaying(Qppp * (3.0 * a1 * a1));
        StructuredFunction G =
            oneA2.mul_decaying(ctx, sixQ2) +
            D(B1.mul(ctx, oneA).mul_decaying(ctx, sixQ2)) -
            D(A1.derivative(ctx, 6).scaled(9.0) + D2(B1).scaled(3.0) +
              B1.mul_decaying(ctx, fourQ3)).scaled(0.5 * a1) +
            StructuredFunction::decaying(Qpp * (1.5 * a1 * a1));
        return {F, G};
    }

    if (k == 1 && l == 1 && p == 2) {
        const OmegaSolution& s1 = prior.at(1, 0);
        GridFunction twoQ = ctx.Q() * 2.0;
        StructuredFunction F = s1.A.derivative(ctx, 6).scaled(3.0) + D2(s1.B).scaled(3.0) +
                               s1.B.mul_decaying(ctx, twoQ);
        StructuredFunction G = s1.B.derivative(ctx, 6).scaled(3.0);
        return {F, G};
    }

    throw UnsupportedOrder("no explicit right-hand side for (k,l) = (" + std::to_string(k) +
                           "," + std::to_string(l) + ") with p = " + std::to_string(p));
}

CascadeSolution solve_cascade(const SolitonParams& prm, const std::vector<Order>& orders,
                              const CascadeOptions& opts) {
    prm.validate();
    CascadeSolution sol;
    sol.params = prm;
    sol.ctx = std::make_shared<OperatorContext>(prm, opts.half_width, opts.n);

    std::vector<Order> sorted = orders;
    std::sort(sorted.begin(), sorted.end(), [](const Order& a, const Order& b) {
        if (a.second != b.second) return a.second < b.second;
        return a.first < b.first;
    });
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (const Order& o : sorted) {
        // every predecessor among the supported explicit systems must be requested
        for (const Order& cand : {Order{1, 0}, Order{2, 0}, Order{1, 1}}) {
            if (precedes(cand, o) &&
                std::find(sorted.begin(), sorted.end(), cand) == sorted.end())
                throw Error("requested orders are not closed under the induction order");
        }
    }

    for (const Order& o : sorted) {
        auto [F, G] = assemble_FG(*sol.ctx, o.first, o.second, sol);
        OmegaSolution s = solve_model_system(*sol.ctx, F, G);
        sol.entries.emplace_back(o, std::move(s));
    }
    return sol;
}

namespace {

// Gauge factor of an entry: the even constant injected by gamma * (1 + A_{1,0}),
// normalized by the constant carried by the stored (1,0) solution itself.
double gauge_of(const CascadeSolution& sol, const OmegaSolution& entry) {
    double c10 = 0.0;
    if (const OmegaSolution* s1 = sol.find(1, 0)) c10 = s1->A.tilde().coeff(0);
    return entry.A.tilde().coeff(0) / (1.0 + c10);
}

} // namespace

ShiftConstants shift_constants(const CascadeSolution& sol, double c) {
    const int p = sol.params.p;
    ShiftConstants out;
    const OmegaSolution* s10 = sol.find(1, 0);
    if (!s10) throw Error("shift_constants needs the (1,0) entry");
    double g10 = s10->A.tilde().coeff(0);
    double a10_canon = s10->a / (1.0 + g10);
    double b10_canon = s10->b / (1.0 + g10);
    for (const auto& [o, s] : sol.entries) {
        double intQk = q_power(*sol.ctx, o.first, 1.0).integrate();
        double a_eff;
        if (o == Order{1, 0}) {
            a_eff = a10_canon;
        } else {
            a_eff = s.a - gauge_of(sol, s) * s10->a;
        }
        out.Delta += a_eff * std::pow(c, double(o.first) / (p - 1) + o.second - 0.5) * intQk;
    }
    out.Delta_c = 2.0 * b10_canon;
    return out;
}

CascadeSolution two_soliton_gauge(const CascadeSolution& sol) {
    if (sol.params.p != 2)
        throw WrongExponent("the explicit two-soliton gauge is defined for p = 2");
    const OmegaSolution& base = sol.at(1, 0);
    double b10 = base.b;
    CascadeSolution out;
    out.params = sol.params;
    out.ctx = sol.ctx;
    for (const auto& [o, s] : sol.entries) {
        if (o == Order{2, 0} || o == Order{1, 1}) {
            double target = (o == Order{2, 0} ? -0.5 : 0.5) * b10 * b10;
            double gamma = (target - s.A.tilde().coeff(0)) / (1.0 + base.A.tilde().coeff(0));
            out.entries.emplace_back(o, gauge_shift(*sol.ctx, s, gamma, 0.0, base));
        } else {
            out.entries.emplace_back(o, s);
        }
    }
    return out;
}

namespace {

nlohmann::json grid_to_json(const GridFunction& g) {
    return {{"x_min", g.x_min()}, {"x_max", g.x_max()}, {"n", g.size()}, {"values", g.values()}};
}

GridFunction grid_from_json(const nlohmann::json& j) {
    GridFunction g(j.at("x_min").get<double>(), j.at("x_max").get<double>(), j.at("n").get<int>());
    g.values() = j.at("values").get<std::vector<double>>();
    if (int(g.values().size()) != j.at("n").get<int>()) throw Error("corrupt grid payload");
    return g;
}

nlohmann::json struct_to_json(const StructuredFunction& f) {
    return {{"ybar", grid_to_json(f.ybar())},
            {"tilde", f.tilde().coeffs()},
            {"hat", f.hat().coeffs()}};
}

StructuredFunction struct_from_json(const nlohmann::json& j) {
    return StructuredFunction(grid_from_json(j.at("ybar")),
                              Polynomial(j.at("tilde").get<std::vector<double>>()),
                              Polynomial(j.at("hat").get<std::vector<double>>()));
}

} // namespace

nlohmann::json cascade_to_json(const CascadeSolution& sol) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [o, s] : sol.entries) {
        entries.push_back({{"k", o.first},
                           {"l", o.second},
                           {"a", s.a},
                           {"b", s.b},
                           {"A", struct_to_json(s.A)},
                           {"B", struct_to_json(s.B)}});
    }
    const GridFunction& lay = sol.ctx->layout();
    return {{"p", sol.params.p},
            {"c", sol.params.c},
            {"grid", {{"half_width", lay.x_max()}, {"n", lay.size()}}},
            {"entries", entries}};
}

CascadeSolution cascade_from_json(const nlohmann::json& j) {
    CascadeSolution sol;
    sol.params = SolitonParams(j.at("p").get<int>(), j.at("c").get<double>());
    sol.ctx = std::make_shared<OperatorContext>(sol.params,
                                                j.at("grid").at("half_width").get<double>(),
                                                j.at("grid").at("n").get<int>());
    for (const auto& e : j.at("entries")) {
        OmegaSolution s;
        s.a = e.at("a").get<double>();
        s.b = e.at("b").get<double>();
        s.A = struct_from_json(e.at("A"));
        s.B = struct_from_json(e.at("B"));
        sol.entries.emplace_back(Order{e.at("k").get<int>(), e.at("l").get<int>()}, std::move(s));
    }
    return sol;
}

} // namespace gkdv
