#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "odmts/bounds.hpp"
#include "odmts/cuts.hpp"
#include "odmts/design.hpp"
#include "odmts/follower.hpp"
#include "odmts/instance.hpp"
#include "odmts/lp.hpp"

namespace odmts {

struct MasterTrip {
    double riders = 0.0;
    bool has_choice = false;
    bool fixed = false;      // rides direct at every design, folded into the constant
    double d_lower = 0.0;    // distance under the all-open design
    double big_m = 0.0;      // distance under the all-closed design
    double fixed_d = 0.0;
    double fixed_delta = 0.0;
};

// Leader problem data with the choice constraint relaxed; cuts added along
// the way tie the relaxation back to the follower's behavior.
struct MasterModel {
    int num_hubs = 0;
    std::vector<double> beta;  // leg opening cost, by leg position
    std::vector<MasterTrip> trips;
    double fare_revenue = 0.0;
    double fixed_constant = 0.0;
    CutPool pool;
};

inline MasterModel build_master(const Instance& inst, bool direct_preprocess = true) {
    MasterModel m;
    m.num_hubs = inst.num_hubs();
    const ArcWeights w(inst);
    m.fare_revenue = w.fare_revenue();
    const int legs = leg_count(m.num_hubs);
    m.beta.resize(legs);
    for (int pos = 0; pos < legs; ++pos) {
        auto [h, l] = leg_pair(m.num_hubs, pos);
        m.beta[pos] = w.beta(h, l);
    }
    std::vector<char> always_direct(inst.trips.size(), 0);
    if (direct_preprocess)
        for (int r : detect_direct_trips(inst)) always_direct[r] = 1;
    for (std::size_t r = 0; r < inst.trips.size(); ++r) {
        const Trip& trip = inst.trips[r];
        MasterTrip t;
        t.riders = trip.riders;
        t.has_choice = trip.has_choice;
        const TripBounds b = compute_big_m(inst, trip);
        t.d_lower = b.d_lower;
        t.big_m = b.big_m;
        t.fixed = always_direct[r] != 0;
        if (t.fixed) {
            t.fixed_d = t.big_m;
            const double f_direct = inst.network.time(trip.origin, trip.destination);
            t.fixed_delta =
                t.has_choice && evaluate_choice(trip, f_direct) ? 1.0 : 0.0;
            m.fixed_constant += t.has_choice
                ? t.riders * t.fixed_delta * (t.fixed_d - m.fare_revenue)
                : t.riders * t.fixed_d;
        }
        m.trips.push_back(t);
    }
    return m;
}

struct MasterSolution {
    bool feasible = false;
    Design design{0};
    double objective = std::numeric_limits<double>::infinity();
    std::vector<double> d;      // per trip
    std::vector<double> delta;  // per trip, zero for non-choice trips
    std::vector<double> nu;     // per trip, delta * d for choice trips
};

namespace detail {

// cuts regrouped per trip so design enumeration touches only what applies
struct TripCutIndex {
    std::vector<std::vector<const Cut*>> distance;  // d_coeff == 1
    std::vector<std::vector<const Cut*>> choice;    // delta_coeff != 0
};

inline TripCutIndex index_cuts(const MasterModel& m) {
    TripCutIndex idx;
    idx.distance.resize(m.trips.size());
    idx.choice.resize(m.trips.size());
    for (const Cut& c : m.pool.all()) {
        if (c.trip < 0 || c.trip >= static_cast<int>(m.trips.size())) continue;
        if (c.d_coeff == 1.0) idx.distance[c.trip].push_back(&c);
        else if (c.delta_coeff != 0.0) idx.choice[c.trip].push_back(&c);
    }
    return idx;
}

} // namespace detail

// Exact master solve by walking every degree-balanced design. Ties keep the
// earliest mask, so reruns pick the same design.
inline MasterSolution solve_master_builtin(const MasterModel& m) {
    const int H = m.num_hubs;
    const int legs = leg_count(H);
    const auto masks = balanced_design_masks(H);
    const auto idx = detail::index_cuts(m);
    const std::size_t n_trips = m.trips.size();

    // fixed trips cost the same everywhere; everything else is bounded below
    // by its cheapest possible contribution, giving a prune level per trip
    std::vector<double> floor_after(n_trips + 1, 0.0);
    for (std::size_t r = n_trips; r-- > 0;) {
        const MasterTrip& t = m.trips[r];
        double least = 0.0;
        if (!t.fixed)
            least = t.has_choice
                ? std::min(0.0, t.riders * (t.d_lower - m.fare_revenue))
                : t.riders * t.d_lower;
        floor_after[r] = floor_after[r + 1] + least;
    }

    MasterSolution best;
    std::vector<double> d(n_trips), delta(n_trips), nu(n_trips);
    for (const std::uint64_t mask : masks) {
        const Design z = design_from_mask(H, mask);
        double total = m.fixed_constant;
        for (int pos = 0; pos < legs; ++pos)
            if (mask >> pos & 1) total += m.beta[pos];

        bool cut_off = false;
        for (std::size_t r = 0; r < n_trips && !cut_off; ++r) {
            const MasterTrip& t = m.trips[r];
            if (t.fixed) {
                d[r] = t.fixed_d;
                delta[r] = t.fixed_delta;
                nu[r] = t.fixed_delta * t.fixed_d;
                continue;
            }
            if (total + floor_after[r] >= best.objective) {
                cut_off = true;
                break;
            }
            double dr = t.d_lower;
            for (const Cut* c : idx.distance[r])
                dr = std::max(dr, cut_distance_floor(*c, z));
            d[r] = dr;
            if (!t.has_choice) {
                delta[r] = 0.0;
                nu[r] = 0.0;
                total += t.riders * dr;
                continue;
            }
            // cut data is integral, so half-open thresholds read the bounds
            int lo = 0, hi = 1;
            for (const Cut* c : idx.choice[r]) {
                const double gap = c->rhs - cut_leg_sum(*c, z);
                if (c->delta_coeff > 0.0) {
                    if (gap >= 0.5) lo = 1;
                } else {
                    if (gap >= -0.5) hi = 0;
                }
            }
            if (lo > hi) {
                cut_off = true;
                break;
            }
            const double gain = t.riders * (dr - m.fare_revenue);
            int pick = lo;
            if (lo != hi && gain < 0.0) pick = 1;
            delta[r] = pick;
            nu[r] = pick ? dr : 0.0;
            total += pick ? gain : 0.0;
        }
        if (cut_off || total >= best.objective) continue;
        best.feasible = true;
        best.design = z;
        best.objective = total;
        best.d = d;
        best.delta = delta;
        best.nu = nu;
    }
    return best;
}

namespace detail {

struct BnbVars {
    std::vector<int> z;      // per leg position
    std::vector<int> d;      // per trip, -1 when fixed
    std::vector<int> delta;  // per choice trip, -1 otherwise
    std::vector<int> nu;
};

inline LinearProgram build_master_lp(const MasterModel& m, BnbVars& vars) {
    const int H = m.num_hubs;
    const int legs = leg_count(H);
    LinearProgram lp;
    lp.maximize = false;
    vars.z.resize(legs);
    for (int pos = 0; pos < legs; ++pos) {
        vars.z[pos] = lp.add_var(m.beta[pos]);
        lp.add_row({{vars.z[pos], 1.0}}, '<', 1.0);
    }
    const std::size_t n_trips = m.trips.size();
    vars.d.assign(n_trips, -1);
    vars.delta.assign(n_trips, -1);
    vars.nu.assign(n_trips, -1);
    for (std::size_t r = 0; r < n_trips; ++r) {
        const MasterTrip& t = m.trips[r];
        if (t.fixed) continue;
        vars.d[r] = lp.add_var(t.has_choice ? 0.0 : t.riders);
        lp.add_row({{vars.d[r], 1.0}}, '>', t.d_lower);
        if (t.has_choice) {
            vars.delta[r] = lp.add_var(-t.riders * m.fare_revenue);
            lp.add_row({{vars.delta[r], 1.0}}, '<', 1.0);
            vars.nu[r] = lp.add_var(t.riders);
            // the four product rows: with delta integral they force
            // nu = delta * d exactly, not just at the optimum
            lp.add_row({{vars.nu[r], 1.0}, {vars.d[r], -1.0}, {vars.delta[r], -t.big_m}},
                       '>', -t.big_m);
            lp.add_row({{vars.nu[r], 1.0}, {vars.delta[r], -t.big_m}}, '<', 0.0);
            lp.add_row({{vars.nu[r], 1.0}, {vars.d[r], -1.0}}, '<', 0.0);
        }
    }
    for (int h = 0; h < H; ++h) {
        std::vector<std::pair<int, double>> row;
        for (int l = 0; l < H; ++l) {
            if (l == h) continue;
            row.emplace_back(vars.z[leg_position(H, h, l)], 1.0);
            row.emplace_back(vars.z[leg_position(H, l, h)], -1.0);
        }
        lp.add_row(std::move(row), '=', 0.0);
    }
    for (const Cut& c : m.pool.all()) {
        if (c.trip < 0 || c.trip >= static_cast<int>(n_trips)) continue;
        if (m.trips[c.trip].fixed) continue;
        std::vector<std::pair<int, double>> row;
        if (c.d_coeff != 0.0) row.emplace_back(vars.d[c.trip], c.d_coeff);
        if (c.delta_coeff != 0.0) {
            if (vars.delta[c.trip] < 0) continue;
            row.emplace_back(vars.delta[c.trip], c.delta_coeff);
        }
        for (auto [pos, coef] : c.z_coeffs) row.emplace_back(vars.z[pos], coef);
        lp.add_row(std::move(row), '>', c.rhs);
    }
    return lp;
}

inline int pick_fractional(const std::vector<int>& vars, const std::vector<double>& x) {
    for (int v : vars) {
        if (v < 0) continue;
        const double f = x[v];
        if (f > 1e-6 && f < 1.0 - 1e-6) return v;
    }
    return -1;
}

} // namespace detail

// Branch and bound over the same relaxation, for cross-checking the exact
// enumeration and for hub counts past what enumeration can walk. Depth-first,
// rounding-down branch first, so results replay deterministically.
inline MasterSolution solve_master_bnb(const MasterModel& m) {
    detail::BnbVars vars;
    const LinearProgram base = detail::build_master_lp(m, vars);
    std::vector<int> binaries;
    for (int v : vars.z) binaries.push_back(v);
    for (int v : vars.delta)
        if (v >= 0) binaries.push_back(v);

    MasterSolution best;
    struct Node {
        std::vector<std::pair<int, double>> fixings;
    };
    std::vector<Node> stack{{}};
    while (!stack.empty()) {
        Node node = std::move(stack.back());
        stack.pop_back();
        LinearProgram lp = base;
        for (auto [var, val] : node.fixings) lp.add_row({{var, 1.0}}, '=', val);
        const LpSolution sol = solve_lp(lp);
        if (sol.status != LpStatus::optimal) continue;
        const double obj = sol.objective + m.fixed_constant;
        if (obj >= best.objective - 1e-9) continue;
        const int frac = detail::pick_fractional(binaries, sol.x);
        if (frac >= 0) {
            Node up = node;
            up.fixings.emplace_back(frac, 1.0);
            Node down = std::move(node);
            down.fixings.emplace_back(frac, 0.0);
            stack.push_back(std::move(up));    // popped second
            stack.push_back(std::move(down));  // popped first
            continue;
        }
        best.feasible = true;
        best.objective = obj;
        best.design = Design(m.num_hubs);
        for (int pos = 0; pos < leg_count(m.num_hubs); ++pos) {
            auto [h, l] = leg_pair(m.num_hubs, pos);
            best.design.set(h, l, sol.x[vars.z[pos]] > 0.5);
        }
        const std::size_t n_trips = m.trips.size();
        best.d.assign(n_trips, 0.0);
        best.delta.assign(n_trips, 0.0);
        best.nu.assign(n_trips, 0.0);
        for (std::size_t r = 0; r < n_trips; ++r) {
            const MasterTrip& t = m.trips[r];
            if (t.fixed) {
                best.d[r] = t.fixed_d;
                best.delta[r] = t.fixed_delta;
                best.nu[r] = t.fixed_delta * t.fixed_d;
                continue;
            }
            best.d[r] = sol.x[vars.d[r]];
            if (t.has_choice) {
                best.delta[r] = sol.x[vars.delta[r]] > 0.5 ? 1.0 : 0.0;
                best.nu[r] = best.delta[r] * best.d[r];
            }
        }
    }
    return best;
}

inline void validate_backend(const std::string& backend) {
    if (backend == "builtin" || backend == "bnb") return;
    if (backend.rfind("external:", 0) == 0)
        throw IoError("master backend '" + backend
                      + "' is not available in this build; use builtin or bnb");
    throw IoError("unknown master backend '" + backend + "'");
}

inline MasterSolution solve_master(const MasterModel& m, const std::string& backend) {
    validate_backend(backend);
    if (backend == "builtin") return solve_master_builtin(m);
    return solve_master_bnb(m);
}

} // namespace odmts
