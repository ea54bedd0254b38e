#pragma once

#include <memory>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gkdv/omega.hpp"

namespace gkdv {

using Order = std::pair<int, int>; // (k, l)

// (k',l') strictly precedes (k,l) in the induction order.
inline bool precedes(const Order& a, const Order& b) {
    return (a.first < b.first && a.second <= b.second) ||
           (a.first <= b.first && a.second < b.second);
}

// xi(k,l) = (k-1)/(p-1) + l, the polynomial degree budget of entry (k,l).
inline double xi(int p, int k, int l) { return double(k - 1) / (p - 1) + l; }

/// Solutions of the explicit systems, indexed by (k,l), with the operator
/// context they were built on.
struct CascadeSolution {
    SolitonParams params;
    std::shared_ptr<const OperatorContext> ctx;
    std::vector<std::pair<Order, OmegaSolution>> entries;

    const OmegaSolution* find(int k, int l) const {
        for (const auto& e : entries)
            if (e.first == Order{k, l}) return &e.second;
        return nullptr;
    }
    const OmegaSolution& at(int k, int l) const {
        const OmegaSolution* s = find(k, l);
        if (!s) throw Error("cascade entry (" + std::to_string(k) + "," + std::to_string(l) + ") missing");
        return *s;
    }
};

/// Right-hand sides of the explicit systems. Supported orders:
/// (1,0) and (2,0) for p in {2,4}; additionally (1,1) for p = 2.
std::pair<StructuredFunction, StructuredFunction> assemble_FG(const OperatorContext& ctx, int k,
                                                              int l,
                                                              const CascadeSolution& prior);

struct CascadeOptions {
    double half_width = profiles::kProfileHalfWidth;
    int n = profiles::kProfilePoints;
};

CascadeSolution solve_cascade(const SolitonParams& prm, const std::vector<Order>& orders,
                              const CascadeOptions& opts = {});

/// Shift constants at speed ratio c, truncated to the available orders:
///   Delta   = sum a_{k,l} c^{k/(p-1)+l-1/2} * intQ^k
///   Delta_c = 2 b_{1,0}
/// Gauge content is stripped first: the solution family adds gamma * (1 + A_{1,0})
/// to A, whose non-decaying part is the even constant gamma, so gamma is read off
/// the constant coefficient of A's polynomial part and the compensating
/// gamma * a_{1,0} (resp. gamma * b_{1,0}) is removed. This makes both constants
/// invariant under gauge_shift.
struct ShiftConstants {
    double Delta = 0.0;
    double Delta_c = 0.0;
};
ShiftConstants shift_constants(const CascadeSolution& sol, double c);

/// The gauge in which the p = 2 entries match the explicit two-soliton expansion:
/// constant part of A_{2,0} equal to -b_{1,0}^2/2 and of A_{1,1} to +b_{1,0}^2/2.
CascadeSolution two_soliton_gauge(const CascadeSolution& sol);

nlohmann::json cascade_to_json(const CascadeSolution& sol);
CascadeSolution cascade_from_json(const nlohmann::json& j);

} // namespace gkdv
