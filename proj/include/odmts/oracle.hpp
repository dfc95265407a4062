#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "odmts/follower.hpp"

namespace odmts {

struct OracleRow {
    Design design{0};
    double objective = 0.0;
    std::vector<bool> rides;  // per trip: non-choice trips always ride
    std::vector<double> d;
    std::vector<double> f;
};

struct OracleResult {
    Design best_design{0};
    double best_objective = std::numeric_limits<double>::infinity();
    std::vector<OracleRow> per_design_table;  // every balanced design, mask order
};

// Ground-truth reference: walk every arc subset, keep the degree-balanced
// ones, price each by solving the riders' problem outright. No shortcuts and
// no reuse of the solver's bookkeeping, so disagreement means a real bug.
inline OracleResult enumerate_bilevel(const Instance& inst, int max_hubs = 4) {
    const int H = inst.num_hubs();
    if (H > max_hubs)
        throw ValidationError("design enumeration covers at most "
                              + std::to_string(max_hubs) + " hubs, instance has "
                              + std::to_string(H));
    const int legs = leg_count(H);
    const ArcWeights w(inst);
    const double phi = w.fare_revenue();
    const std::size_t n = inst.trips.size();

    OracleResult res;
    std::vector<int> in_deg(H), out_deg(H);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << legs); ++mask) {
        std::fill(in_deg.begin(), in_deg.end(), 0);
        std::fill(out_deg.begin(), out_deg.end(), 0);
        for (int pos = 0; pos < legs; ++pos)
            if (mask >> pos & 1) {
                auto [h, l] = leg_pair(H, pos);
                ++out_deg[h];
                ++in_deg[l];
            }
        bool balanced = true;
        for (int h = 0; h < H; ++h)
            if (in_deg[h] != out_deg[h]) balanced = false;
        if (!balanced) continue;

        OracleRow row;
        row.design = design_from_mask(H, mask);
        row.rides.resize(n);
        row.d.resize(n);
        row.f.resize(n);
        for (int h = 0; h < H; ++h)
            for (int l = 0; l < H; ++l)
                if (h != l && row.design.open(h, l)) row.objective += w.beta(h, l);
        for (std::size_t r = 0; r < n; ++r) {
            const Trip& trip = inst.trips[r];
            const RouteSolution route = solve_follower(inst, trip, row.design);
            row.d[r] = route.d_value;
            row.f[r] = route.f_value;
            row.rides[r] = !trip.has_choice || evaluate_choice(trip, route.f_value);
            if (!trip.has_choice) row.objective += trip.riders * route.d_value;
            else if (row.rides[r]) row.objective += trip.riders * (route.d_value - phi);
        }
        if (row.objective < res.best_objective) {
            res.best_objective = row.objective;
            res.best_design = row.design;
        }
        res.per_design_table.push_back(std::move(row));
    }
    return res;
}

} // namespace odmts
