#pragma once

#include <algorithm>
#include <cassert>
#include <limits>
#include <vector>

#include "odmts/design.hpp"
#include "odmts/instance.hpp"

namespace odmts {

// absolute tolerance on the cost component when comparing route labels
inline constexpr double kCostTol = 1e-9;
// absolute tolerance when comparing a duration against a rider's threshold
inline constexpr double kChoiceTol = 1e-9;

// A rider's best route for one trip under a fixed design.
struct RouteSolution {
    std::vector<std::pair<int, int>> bus_legs;     // hub index pairs, in route order
    std::vector<std::pair<int, int>> shuttle_legs; // node index pairs, in route order
    double d_value = 0.0;  // weighted cost + inconvenience
    double f_value = 0.0;  // door-to-door minutes, bus waits included
    bool is_direct = false;
};

// Shortest-path potentials extracted from a solved route subproblem.
struct DualSolution {
    double u_origin = 0.0;
    double u_dest = 0.0;
    std::vector<double> u_hub;  // per hub index
    Matrix v;                   // per ordered hub pair, diagonal zero
};

namespace detail {

struct TripArc {
    int from, to;        // local graph node ids
    double d_w, f_w;
    bool is_bus;
    int hub_h = -1, hub_l = -1;  // hub indices when is_bus
};

// Local view of one trip's routing graph: origin, destination, and all hubs,
// deduplicated when an endpoint is itself a hub.
struct TripGraph {
    std::vector<int> nodes;      // instance node indices
    std::vector<TripArc> arcs;   // shuttle arcs always, bus arcs per design
    int origin_local = -1, dest_local = -1;
    std::vector<int> hub_local;  // local id per hub index

    int local_of(int node) const {
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i] == node) return static_cast<int>(i);
        return -1;
    }
};

// include_closed_bus adds every hub pair regardless of the design; the route
// solve never wants that, dual extraction handles closed pairs separately.
inline TripGraph build_trip_graph(const Instance& inst, const Trip& trip, const Design& design) {
    TripGraph g;
    auto add_node = [&](int node) {
        int loc = g.local_of(node);
        if (loc >= 0) return loc;
        g.nodes.push_back(node);
        return static_cast<int>(g.nodes.size() - 1);
    };
    g.origin_local = add_node(trip.origin);
    g.dest_local = add_node(trip.destination);
    const int H = inst.num_hubs();
    g.hub_local.resize(H);
    for (int h = 0; h < H; ++h) g.hub_local[h] = add_node(inst.hub_node(h));

    const ArcWeights w(inst);
    auto add_shuttle = [&](int from_node, int to_node) {
        if (from_node == to_node) return;
        int a = g.local_of(from_node), b = g.local_of(to_node);
        for (const TripArc& arc : g.arcs)
            if (!arc.is_bus && arc.from == a && arc.to == b) return;  // already present
        g.arcs.push_back({a, b, w.gamma(from_node, to_node),
                          inst.network.time(from_node, to_node), false});
    };
    for (int h = 0; h < H; ++h) add_shuttle(trip.origin, inst.hub_node(h));
    for (int h = 0; h < H; ++h) add_shuttle(inst.hub_node(h), trip.destination);
    add_shuttle(trip.origin, trip.destination);

    for (int h = 0; h < H; ++h)
        for (int l = 0; l < H; ++l) {
            if (h == l || !design.open(h, l)) continue;
            g.arcs.push_back({g.hub_local[h], g.hub_local[l], w.tau(h, l),
                              w.bus_leg_minutes(h, l), true, h, l});
        }
    return g;
}

struct RouteLabel {
    double d = std::numeric_limits<double>::infinity();
    double f = std::numeric_limits<double>::infinity();
    std::vector<int> arc_seq;   // arc ids from the origin
    std::vector<int> node_seq;  // instance node indices visited after the origin
    bool reached = false;
};

// cost first, minutes second, then the visited node sequence for a stable pick
inline bool label_less(const RouteLabel& a, const RouteLabel& b) {
    if (a.d < b.d - kCostTol) return true;
    if (b.d < a.d - kCostTol) return false;
    if (a.f < b.f) return true;
    if (b.f < a.f) return false;
    return a.node_seq < b.node_seq;
}

// Shortest path under the two-part weight; small graphs, so plain n^2 scan.
inline RouteLabel route_search(const TripGraph& g) {
    const std::size_t n = g.nodes.size();
    std::vector<RouteLabel> label(n);
    std::vector<char> settled(n, 0);
    label[g.origin_local] = {0.0, 0.0, {}, {}, true};
    for (std::size_t round = 0; round < n; ++round) {
        int best = -1;
        for (std::size_t i = 0; i < n; ++i) {
            if (settled[i] || !label[i].reached) continue;
            if (best < 0 || label_less(label[i], label[best])) best = static_cast<int>(i);
        }
        if (best < 0) break;
        settled[best] = 1;
        for (std::size_t a = 0; a < g.arcs.size(); ++a) {
            const TripArc& arc = g.arcs[a];
            if (arc.from != best || settled[arc.to]) continue;
            RouteLabel cand;
            cand.d = label[best].d + arc.d_w;
            cand.f = label[best].f + arc.f_w;
            cand.arc_seq = label[best].arc_seq;
            cand.arc_seq.push_back(static_cast<int>(a));
            cand.node_seq = label[best].node_seq;
            cand.node_seq.push_back(g.nodes[arc.to]);
            cand.reached = true;
            if (!label[arc.to].reached || label_less(cand, label[arc.to]))
                label[arc.to] = std::move(cand);
        }
    }
    return label[g.dest_local];
}

inline RouteSolution route_from_label(const TripGraph& g, const RouteLabel& label) {
    RouteSolution r;
    r.d_value = label.d;
    r.f_value = label.f;
    for (int a : label.arc_seq) {
        const TripArc& arc = g.arcs[a];
        if (arc.is_bus) r.bus_legs.emplace_back(arc.hub_h, arc.hub_l);
        else r.shuttle_legs.emplace_back(g.nodes[arc.from], g.nodes[arc.to]);
    }
    r.is_direct = r.bus_legs.empty() && r.shuttle_legs.size() == 1;
    return r;
}

} // namespace detail

// Best route for one trip under the given design. Always feasible: the direct
// shuttle arc exists no matter which legs are open.
inline RouteSolution solve_follower(const Instance& inst, const Trip& trip, const Design& design) {
    const detail::TripGraph g = detail::build_trip_graph(inst, trip, design);
    const detail::RouteLabel best = detail::route_search(g);
    assert(best.reached);
    return detail::route_from_label(g, best);
}

// Cross-check variant: collapses the two-part weight into bigm * cost + minutes
// and runs an ordinary shortest path. Agrees with solve_follower once bigm
// outweighs the largest minutes spread divided by the smallest cost gap.
inline RouteSolution solve_follower_bigm(const Instance& inst, const Trip& trip,
                                         const Design& design, double bigm) {
    const detail::TripGraph g = detail::build_trip_graph(inst, trip, design);
    const std::size_t n = g.nodes.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> cost(n, inf);
    std::vector<std::vector<int>> seq(n);
    std::vector<char> settled(n, 0), reached(n, 0);
    cost[g.origin_local] = 0.0;
    reached[g.origin_local] = 1;
    for (std::size_t round = 0; round < n; ++round) {
        int best = -1;
        for (std::size_t i = 0; i < n; ++i) {
            if (settled[i] || !reached[i]) continue;
            if (best < 0 || cost[i] < cost[best]
                || (cost[i] == cost[best] && seq[i] < seq[best]))
                best = static_cast<int>(i);
        }
        if (best < 0) break;
        settled[best] = 1;
        for (std::size_t a = 0; a < g.arcs.size(); ++a) {
            const detail::TripArc& arc = g.arcs[a];
            if (arc.from != best || settled[arc.to]) continue;
            const double c = cost[best] + bigm * arc.d_w + arc.f_w;
            auto s = seq[best];
            s.push_back(static_cast<int>(a));
            if (!reached[arc.to] || c < cost[arc.to]
                || (c == cost[arc.to] && s < seq[arc.to])) {
                cost[arc.to] = c;
                seq[arc.to] = std::move(s);
                reached[arc.to] = 1;
            }
        }
    }
    detail::RouteLabel label;
    label.reached = true;
    label.arc_seq = seq[g.dest_local];
    label.d = 0.0;
    label.f = 0.0;
    for (int a : label.arc_seq) {
        label.d += g.arcs[a].d_w;
        label.f += g.arcs[a].f_w;
    }
    return detail::route_from_label(g, label);
}

// Shortest-path potentials toward the destination in the cost space, over the
// arcs available under the design. u is exact, so (u_origin - u_dest) equals
// the optimal route cost, and v picks up the slack of closed legs only.
inline DualSolution extract_duals(const Instance& inst, const Trip& trip, const Design& design) {
    const detail::TripGraph g = detail::build_trip_graph(inst, trip, design);
    const std::size_t n = g.nodes.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, inf);
    std::vector<char> settled(n, 0);
    dist[g.dest_local] = 0.0;
    for (std::size_t round = 0; round < n; ++round) {
        int best = -1;
        for (std::size_t i = 0; i < n; ++i) {
            if (settled[i] || dist[i] == inf) continue;
            if (best < 0 || dist[i] < dist[best]) best = static_cast<int>(i);
        }
        if (best < 0) break;
        settled[best] = 1;
        for (const detail::TripArc& arc : g.arcs)  // traverse arcs backwards
            if (arc.to == best && !settled[arc.from])
                dist[arc.from] = std::min(dist[arc.from], dist[best] + arc.d_w);
    }

    DualSolution dual;
    dual.u_origin = dist[g.origin_local];
    dual.u_dest = 0.0;
    const int H = inst.num_hubs();
    dual.u_hub.resize(H);
    for (int h = 0; h < H; ++h) dual.u_hub[h] = dist[g.hub_local[h]];
    dual.v = Matrix(H);
    const ArcWeights w(inst);
    for (int h = 0; h < H; ++h)
        for (int l = 0; l < H; ++l) {
            if (h == l) continue;
            // exact potentials make open legs slack-free; pin them to zero so
            // rounding dust cannot leak into cut coefficients
            if (design.open(h, l)) continue;
            dual.v(h, l) = std::max(0.0, dual.u_hub[h] - dual.u_hub[l] - w.tau(h, l));
        }
    return dual;
}

// Value the dual solution assigns to an arbitrary design; a lower bound on the
// optimal route cost there, exact at the design the dual came from.
inline double dual_objective(const DualSolution& dual, const Design& design) {
    double obj = dual.u_origin - dual.u_dest;
    const int H = design.num_hubs();
    for (int h = 0; h < H; ++h)
        for (int l = 0; l < H; ++l)
            if (h != l && design.open(h, l)) obj -= dual.v(h, l);
    return obj;
}

// Whether the rider sticks with the system when offered f_value minutes;
// matching the current mode exactly still wins the rider over.
inline bool evaluate_choice(const Trip& trip, double f_value) {
    assert(trip.has_choice);
    return f_value <= trip.alpha * trip.t_cur + kChoiceTol;
}

} // namespace odmts
