#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <vector>

#include "odmts/follower.hpp"

namespace odmts {

// Per-trip envelope of route costs across all designs.
struct TripBounds {
    double big_m = 0.0;    // cost with nothing open: the worst any design can do
    double d_lower = 0.0;  // cost with everything open: the best any design can do
};

inline TripBounds compute_big_m(const Instance& inst, const Trip& trip) {
    const int H = inst.num_hubs();
    Design empty(H), full(H);
    for (int h = 0; h < H; ++h)
        for (int l = 0; l < H; ++l)
            if (h != l) full.set(h, l, true);
    TripBounds b;
    b.big_m = solve_follower(inst, trip, empty).d_value;
    b.d_lower = solve_follower(inst, trip, full).d_value;
    return b;
}

namespace detail {

inline bool endpoint_is_hub(const Instance& inst, const Trip& trip) {
    return inst.hub_index_of(trip.origin) >= 0 || inst.hub_index_of(trip.destination) >= 0;
}

// first and last hub of a non-direct route; trips that start or end on a hub
// never reach here because the duration bounds skip them
inline std::pair<int, int> route_hub_ends(const Instance& inst, const RouteSolution& route) {
    const int m = inst.hub_index_of(route.shuttle_legs.front().second);
    const int n = inst.hub_index_of(route.shuttle_legs.back().first);
    return {m, n};
}

inline double min_access_sum(const Instance& inst, const Trip& trip) {
    double best_in = std::numeric_limits<double>::infinity();
    double best_out = std::numeric_limits<double>::infinity();
    for (int h = 0; h < inst.num_hubs(); ++h) {
        const int hn = inst.hub_node(h);
        best_in = std::min(best_in, inst.network.dist(trip.origin, hn));
        best_out = std::min(best_out, inst.network.dist(hn, trip.destination));
    }
    return best_in + best_out;
}

inline double max_access_sum(const Instance& inst, const Trip& trip) {
    double worst_in = 0.0, worst_out = 0.0;
    for (int h = 0; h < inst.num_hubs(); ++h) {
        const int hn = inst.hub_node(h);
        worst_in = std::max(worst_in, inst.network.dist(trip.origin, hn));
        worst_out = std::max(worst_out, inst.network.dist(hn, trip.destination));
    }
    return worst_in + worst_out;
}

} // namespace detail

// Ceiling on the trip duration under any design that keeps every currently
// open leg and opens more. Skips trips that start or end on a hub, and a
// pure-time objective (theta == 0) carries no such ceiling at all.
inline std::optional<double> ub_after_growth(const Instance& inst, const Trip& trip,
                                             const RouteSolution& route) {
    const double theta = inst.econ.theta;
    if (theta <= 0.0) return std::nullopt;
    if (detail::endpoint_is_hub(inst, trip)) return std::nullopt;
    const double coeff = (1.0 - theta) / theta * inst.econ.shuttle_cost_per_mile;
    const double t1 = route.f_value;
    const double minsum = detail::min_access_sum(inst, trip);
    if (route.is_direct) {
        const double direct = inst.network.dist(trip.origin, trip.destination);
        return std::max(t1, t1 + coeff * (direct - minsum));
    }
    auto [m, n] = detail::route_hub_ends(inst, route);
    const double access = inst.network.dist(trip.origin, inst.hub_node(m))
                        + inst.network.dist(inst.hub_node(n), trip.destination);
    return t1 + coeff * (access - minsum);
}

// Floor on the trip duration under any design obtained by closing legs.
// Direct riders keep exactly their duration; hub riders can only get slower
// down to the stated slack.
inline std::optional<double> lb_after_shrink(const Instance& inst, const Trip& trip,
                                             const RouteSolution& route) {
    const double theta = inst.econ.theta;
    if (theta <= 0.0) return std::nullopt;
    if (detail::endpoint_is_hub(inst, trip)) return std::nullopt;
    const double t1 = route.f_value;
    if (route.is_direct) return t1;
    const double coeff = (1.0 - theta) / theta * inst.econ.shuttle_cost_per_mile;
    auto [m, n] = detail::route_hub_ends(inst, route);
    const double access = inst.network.dist(trip.origin, inst.hub_node(m))
                        + inst.network.dist(inst.hub_node(n), trip.destination);
    const double direct = inst.network.dist(trip.origin, trip.destination);
    const double worst = std::max(detail::max_access_sum(inst, trip), direct);
    return t1 + coeff * (access - worst);
}

// Trips that ride direct no matter which legs open: reaching any hub pair
// already costs at least the direct distance. Index list, ascending.
inline std::vector<int> detect_direct_trips(const Instance& inst) {
    std::vector<int> out;
    for (std::size_t r = 0; r < inst.trips.size(); ++r) {
        const Trip& trip = inst.trips[r];
        if (detail::min_access_sum(inst, trip)
            >= inst.network.dist(trip.origin, trip.destination))
            out.push_back(static_cast<int>(r));
    }
    return out;
}

// Hub sets used to widen design-specific cuts.
struct LiftingSets {
    std::vector<int> active_hubs;               // hubs with an outgoing open leg
    std::vector<int> w_origin;                  // inactive hubs closer to the origin than any active one
    std::vector<int> w_dest;                    // inactive hubs closer to the destination
    std::vector<std::pair<int, int>> route_arcs; // bus legs the route actually rides
};

inline LiftingSets lifting_sets(const Instance& inst, const Trip& trip, const Design& design,
                                const RouteSolution& route) {
    LiftingSets s;
    const int H = inst.num_hubs();
    std::vector<char> active(H, 0);
    for (int h = 0; h < H; ++h)
        for (int l = 0; l < H; ++l)
            if (h != l && design.open(h, l)) {
                active[h] = 1;
                break;
            }
    double near_origin = std::numeric_limits<double>::infinity();
    double near_dest = std::numeric_limits<double>::infinity();
    for (int h = 0; h < H; ++h)
        if (active[h]) {
            s.active_hubs.push_back(h);
            near_origin = std::min(near_origin, inst.network.dist(trip.origin, inst.hub_node(h)));
            near_dest = std::min(near_dest, inst.network.dist(inst.hub_node(h), trip.destination));
        }
    for (int h = 0; h < H; ++h) {
        if (active[h]) continue;
        if (inst.network.dist(trip.origin, inst.hub_node(h)) < near_origin)
            s.w_origin.push_back(h);
        if (inst.network.dist(inst.hub_node(h), trip.destination) < near_dest)
            s.w_dest.push_back(h);
    }
    s.route_arcs = route.bus_legs;
    return s;
}

} // namespace odmts
