#pragma once

#include <algorithm>
#include <cassert>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "odmts/bounds.hpp"
#include "odmts/design.hpp"
#include "odmts/follower.hpp"
#include "odmts/instance.hpp"
#include "odmts/lp.hpp"

namespace odmts {

enum class CutKind {
    benders,              // distance lower bound from a routing dual
    pareto,               // same, refined toward the core design
    nogood_adopt,         // rider adopts at the probed design, master said no
    nogood_reject,        // rider rejects at the probed design, master said yes
    strengthened_adopt,   // adoption holds for every larger design
    strengthened_reject,  // rejection holds for every smaller design
    lifted_adopt,         // adoption holds while the nearer idle hubs stay idle
    lifted_route,         // choice pinned to the legs the route actually rides
};

inline const char* cut_kind_name(CutKind k) {
    switch (k) {
        case CutKind::benders: return "benders";
        case CutKind::pareto: return "pareto";
        case CutKind::nogood_adopt: return "nogood_adopt";
        case CutKind::nogood_reject: return "nogood_reject";
        case CutKind::strengthened_adopt: return "strengthened_adopt";
        case CutKind::strengthened_reject: return "strengthened_reject";
        case CutKind::lifted_adopt: return "lifted_adopt";
        case CutKind::lifted_route: return "lifted_route";
    }
    return "?";
}

// One master-problem inequality:
//   d_coeff * d_r + delta_coeff * delta_r + sum(coef * z_leg) >= rhs
// Leg coefficients are keyed by leg position (see leg_position).
struct Cut {
    CutKind kind = CutKind::benders;
    int trip = -1;
    int num_hubs = 0;
    double d_coeff = 0.0;
    double delta_coeff = 0.0;
    std::vector<std::pair<int, double>> z_coeffs;  // sorted by leg position
    double rhs = 0.0;
};

inline double cut_leg_sum(const Cut& c, const Design& z) {
    double s = 0.0;
    for (auto [pos, coef] : c.z_coeffs) {
        auto [h, l] = leg_pair(c.num_hubs, pos);
        if (z.open(h, l)) s += coef;
    }
    return s;
}

inline double cut_lhs(const Cut& c, const Design& z, double d, double delta) {
    return c.d_coeff * d + c.delta_coeff * delta + cut_leg_sum(c, z);
}

inline bool cut_satisfied(const Cut& c, const Design& z, double d, double delta,
                          double tol = 1e-9) {
    return cut_lhs(c, z, d, delta) >= c.rhs - tol;
}

// Floor the cut puts under d_r at a fixed design; only meaningful for the
// distance cuts (d_coeff == 1).
inline double cut_distance_floor(const Cut& c, const Design& z) {
    assert(c.d_coeff == 1.0);
    return c.rhs - cut_leg_sum(c, z);
}

inline std::string cut_signature(const Cut& c) {
    std::ostringstream out;
    out << std::setprecision(17) << static_cast<int>(c.kind) << '|' << c.trip << '|'
        << c.d_coeff << '|' << c.delta_coeff << '|' << c.rhs;
    for (auto [pos, coef] : c.z_coeffs) out << '|' << pos << ':' << coef;
    return out.str();
}

// Growing cut collection with duplicate suppression; iteration order is
// insertion order so reruns replay identically.
class CutPool {
public:
    bool add(Cut c) {
        if (!seen_.insert(cut_signature(c)).second) return false;
        cuts_.push_back(std::move(c));
        return true;
    }
    const std::vector<Cut>& all() const { return cuts_; }
    std::size_t size() const { return cuts_.size(); }

private:
    std::vector<Cut> cuts_;
    std::set<std::string> seen_;
};

// d_r >= (u_or - u_de) - sum(v_hl z_hl), valid for every design by weak
// duality and tight at the design the dual was extracted from.
inline Cut benders_cut(const Instance& inst, int trip_index, const DualSolution& dual) {
    const int H = inst.num_hubs();
    Cut c;
    c.kind = CutKind::benders;
    c.trip = trip_index;
    c.num_hubs = H;
    c.d_coeff = 1.0;
    c.rhs = dual.u_origin - dual.u_dest;
    for (int h = 0; h < H; ++h)
        for (int l = 0; l < H; ++l) {
            if (h == l) continue;
            const double v = dual.v(h, l);
            if (v > 0.0) c.z_coeffs.emplace_back(leg_position(H, h, l), v);
        }
    return c;
}

// Benders cut refined toward the all-legs-half-open core design: among all
// duals tight at the probed design, pick one maximizing the bound there so
// the cut stays strong when other legs toggle. Falls back to the plain cut
// when the refinement program misbehaves.
inline Cut pareto_cut(const Instance& inst, int trip_index, const Design& design,
                      double d_star, const DualSolution& fallback, double eta = 0.5) {
    const int H = inst.num_hubs();
    const Trip& trip = inst.trips[trip_index];
    Design full(H);
    for (int h = 0; h < H; ++h)
        for (int l = 0; l < H; ++l)
            if (h != l) full.set(h, l, true);
    const detail::TripGraph g = detail::build_trip_graph(inst, trip, full);

    LinearProgram lp;
    std::vector<int> u_var(g.nodes.size());
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        double obj = 0.0;
        if (static_cast<int>(i) == g.origin_local) obj += 1.0;
        if (static_cast<int>(i) == g.dest_local) obj -= 1.0;
        u_var[i] = lp.add_var(obj);
    }
    const int legs = leg_count(H);
    std::vector<int> v_var(legs);
    for (int pos = 0; pos < legs; ++pos) v_var[pos] = lp.add_var(-eta);

    for (const detail::TripArc& arc : g.arcs) {
        std::vector<std::pair<int, double>> row = {{u_var[arc.from], 1.0},
                                                   {u_var[arc.to], -1.0}};
        if (arc.is_bus) row.emplace_back(v_var[leg_position(H, arc.hub_h, arc.hub_l)], -1.0);
        lp.add_row(std::move(row), '<', arc.d_w);
    }
    std::vector<std::pair<int, double>> tight = {{u_var[g.origin_local], 1.0},
                                                 {u_var[g.dest_local], -1.0}};
    for (int pos = 0; pos < legs; ++pos) {
        auto [h, l] = leg_pair(H, pos);
        if (design.open(h, l)) tight.emplace_back(v_var[pos], -1.0);
    }
    lp.add_row(std::move(tight), '=', d_star);

    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal) return benders_cut(inst, trip_index, fallback);

    Cut c;
    c.kind = CutKind::pareto;
    c.trip = trip_index;
    c.num_hubs = H;
    c.d_coeff = 1.0;
    c.rhs = sol.x[u_var[g.origin_local]] - sol.x[u_var[g.dest_local]];
    for (int pos = 0; pos < legs; ++pos) {
        const double v = sol.x[v_var[pos]];
        if (v > 0.0) c.z_coeffs.emplace_back(pos, v);
    }
    return c;
}

namespace detail {

inline void split_legs(const Design& z, std::vector<int>& open_pos, std::vector<int>& closed_pos) {
    const int H = z.num_hubs();
    for (int pos = 0; pos < leg_count(H); ++pos) {
        auto [h, l] = leg_pair(H, pos);
        (z.open(h, l) ? open_pos : closed_pos).push_back(pos);
    }
}

} // namespace detail

// Cuts reconciling the master's adoption guess with the choice the probed
// design actually induces. Empty when the guess was right. The first cut is
// always the plain design-specific one; the optional sharper variants follow
// when their preconditions hold.
inline std::vector<Cut> consistency_cuts(const Instance& inst, int trip_index,
                                         const Design& design, const RouteSolution& route,
                                         bool master_delta, bool strengthen = true,
                                         bool lifting = true) {
    const Trip& trip = inst.trips[trip_index];
    const bool choice = evaluate_choice(trip, route.f_value);
    if (choice == master_delta) return {};

    const int H = inst.num_hubs();
    const double threshold = trip.alpha * trip.t_cur + kChoiceTol;
    std::vector<int> open_pos, closed_pos;
    detail::split_legs(design, open_pos, closed_pos);

    std::vector<Cut> out;
    auto base = [&](CutKind kind, double delta_coeff, double rhs) {
        Cut c;
        c.kind = kind;
        c.trip = trip_index;
        c.num_hubs = H;
        c.delta_coeff = delta_coeff;
        c.rhs = rhs;
        return c;
    };

    if (choice) {
        // the rider adopts here, so delta may only drop to zero at designs
        // that differ from this one
        Cut plain = base(CutKind::nogood_adopt, 1.0, 1.0 - static_cast<double>(open_pos.size()));
        for (int pos : open_pos) plain.z_coeffs.emplace_back(pos, -1.0);
        for (int pos : closed_pos) plain.z_coeffs.emplace_back(pos, 1.0);
        std::sort(plain.z_coeffs.begin(), plain.z_coeffs.end());
        out.push_back(std::move(plain));

        if (strengthen) {
            const auto ub = ub_after_growth(inst, trip, route);
            if (ub && *ub <= threshold) {
                // every design keeping these legs open stays fast enough
                Cut c = base(CutKind::strengthened_adopt, 1.0,
                             1.0 - static_cast<double>(open_pos.size()));
                for (int pos : open_pos) c.z_coeffs.emplace_back(pos, -1.0);
                out.push_back(std::move(c));
            }
        }
        if (lifting) {
            if (!route.is_direct && !detail::endpoint_is_hub(inst, trip)) {
                const LiftingSets sets = lifting_sets(inst, trip, design, route);
                auto [m, n] = detail::route_hub_ends(inst, route);
                double near_in = std::numeric_limits<double>::infinity();
                double near_out = std::numeric_limits<double>::infinity();
                for (int h : sets.active_hubs) {
                    near_in = std::min(near_in, inst.network.dist(trip.origin, inst.hub_node(h)));
                    near_out = std::min(near_out, inst.network.dist(inst.hub_node(h), trip.destination));
                }
                // raw table lookups on both sides, so exact comparison is
                // the right test; a strictly closer idle hub on the route
                // falls outside the argument and must not fire
                const bool rides_nearest =
                    !sets.active_hubs.empty()
                    && inst.network.dist(trip.origin, inst.hub_node(m)) == near_in
                    && inst.network.dist(inst.hub_node(n), trip.destination) == near_out;
                if (rides_nearest) {
                    // adoption persists while the hubs that could shorten the
                    // shuttle rides stay idle, whatever else opens
                    std::set<int> w(sets.w_origin.begin(), sets.w_origin.end());
                    w.insert(sets.w_dest.begin(), sets.w_dest.end());
                    Cut c = base(CutKind::lifted_adopt, 1.0,
                                 1.0 - static_cast<double>(open_pos.size()));
                    for (int pos : open_pos) c.z_coeffs.emplace_back(pos, -1.0);
                    for (int h : w)
                        for (int l = 0; l < H; ++l)
                            if (l != h) c.z_coeffs.emplace_back(leg_position(H, h, l), 1.0);
                    std::sort(c.z_coeffs.begin(), c.z_coeffs.end());
                    out.push_back(std::move(c));
                }
            }
            // closing legs the route never rides cannot change the choice
            Cut c = base(CutKind::lifted_route, 1.0,
                         1.0 - static_cast<double>(route.bus_legs.size()));
            for (auto [h, l] : route.bus_legs) {
                assert(design.open(h, l));
                c.z_coeffs.emplace_back(leg_position(H, h, l), -1.0);
            }
            for (int pos : closed_pos) c.z_coeffs.emplace_back(pos, 1.0);
            std::sort(c.z_coeffs.begin(), c.z_coeffs.end());
            out.push_back(std::move(c));
        }
    } else {
        // the rider stays off here, so delta may only rise at other designs
        Cut plain = base(CutKind::nogood_reject, -1.0, -static_cast<double>(open_pos.size()));
        for (int pos : open_pos) plain.z_coeffs.emplace_back(pos, -1.0);
        for (int pos : closed_pos) plain.z_coeffs.emplace_back(pos, 1.0);
        std::sort(plain.z_coeffs.begin(), plain.z_coeffs.end());
        out.push_back(std::move(plain));

        if (strengthen) {
            const auto lb = lb_after_shrink(inst, trip, route);
            if (lb && *lb > threshold) {
                // even the best smaller design stays too slow; note the
                // strict test, a rider exactly on the threshold would ride
                Cut c = base(CutKind::strengthened_reject, -1.0, 0.0);
                for (int pos : closed_pos) c.z_coeffs.emplace_back(pos, 1.0);
                out.push_back(std::move(c));
            }
        }
        if (lifting) {
            Cut c = base(CutKind::lifted_route, -1.0,
                         -static_cast<double>(route.bus_legs.size()));
            for (auto [h, l] : route.bus_legs) {
                assert(design.open(h, l));
                c.z_coeffs.emplace_back(leg_position(H, h, l), -1.0);
            }
            for (int pos : closed_pos) c.z_coeffs.emplace_back(pos, 1.0);
            std::sort(c.z_coeffs.begin(), c.z_coeffs.end());
            out.push_back(std::move(c));
        }
    }
    return out;
}

} // namespace odmts
