#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "odmts/decomposition.hpp"

namespace odmts {

// Rider groups the summary tables slice by: choice trips that take the new
// system, bound riders who were already on transit, and choice trips that
// keep their current mode.
enum class RiderGroup { adopting = 0, existing = 1, not_adopting = 2 };

inline const char* to_string(RiderGroup g) {
    switch (g) {
        case RiderGroup::adopting: return "adopting";
        case RiderGroup::existing: return "existing";
        default: return "not_adopting";
    }
}

// Weighted mean trip minutes for one income class and rider group. Empty
// groups keep NaN means, printed as NA.
struct DurationStats {
    int trips = 0;
    double riders = 0.0;
    double odmts_min = std::numeric_limits<double>::quiet_NaN();
    double direct_min = std::numeric_limits<double>::quiet_NaN();
    double baseline_min = std::numeric_limits<double>::quiet_NaN();
};

struct CostTable {
    double adoption_pct_medium = std::numeric_limits<double>::quiet_NaN();
    double adoption_pct_high = std::numeric_limits<double>::quiet_NaN();
    double odmts_riders = 0.0;
    double revenue = 0.0;
    double inv_cost = 0.0;
    double trv_cost = 0.0;
    double net_cost_per_rider = std::numeric_limits<double>::quiet_NaN();
};

struct DirectRow {
    int served_trips = 0;
    int direct_trips = 0;
    double direct_pct = std::numeric_limits<double>::quiet_NaN();
};

struct Report {
    // indexed [income class][rider group]
    std::array<std::array<DurationStats, 3>, 3> duration_table;
    CostTable cost_table;
    std::array<DirectRow, 3> direct_table;  // per income class, served trips only
    bool has_baseline = false;
};

inline Report build_report(const Instance& inst, const Design& design,
                           const std::optional<Design>& baseline = std::nullopt) {
    Report rep;
    rep.has_baseline = baseline.has_value();
    const DesignEvaluation eval = evaluate_design(inst, design);
    std::optional<DesignEvaluation> base_eval;
    if (baseline) base_eval = evaluate_design(inst, *baseline);

    std::array<std::array<std::array<double, 3>, 3>, 3> minute_sums{};  // class, group, column
    std::array<double, 3> choice_riders{}, choice_adopters{};

    for (std::size_t r = 0; r < inst.trips.size(); ++r) {
        const Trip& trip = inst.trips[r];
        const TripEvaluation& te = eval.trips[r];
        const int cls = static_cast<int>(trip.income_class);
        const int grp = !trip.has_choice ? 1 : te.rides ? 0 : 2;
        DurationStats& cell = rep.duration_table[cls][grp];
        cell.trips += 1;
        cell.riders += trip.riders;
        minute_sums[cls][grp][0] += trip.riders * te.route.f_value;
        minute_sums[cls][grp][1] +=
            trip.riders * inst.network.time(trip.origin, trip.destination);
        if (base_eval)
            minute_sums[cls][grp][2] += trip.riders * base_eval->trips[r].route.f_value;

        if (trip.has_choice) {
            choice_riders[cls] += trip.riders;
            if (te.rides) choice_adopters[cls] += trip.riders;
        }
        if (te.rides) {
            rep.cost_table.odmts_riders += trip.riders;
            rep.cost_table.trv_cost += trip.riders * te.route.d_value;
            DirectRow& row = rep.direct_table[cls];
            row.served_trips += 1;
            row.direct_trips += te.route.is_direct ? 1 : 0;
        }
    }

    for (int cls = 0; cls < 3; ++cls)
        for (int grp = 0; grp < 3; ++grp) {
            DurationStats& cell = rep.duration_table[cls][grp];
            if (cell.riders <= 0.0) continue;
            cell.odmts_min = minute_sums[cls][grp][0] / cell.riders;
            cell.direct_min = minute_sums[cls][grp][1] / cell.riders;
            if (base_eval) cell.baseline_min = minute_sums[cls][grp][2] / cell.riders;
        }

    const ArcWeights w(inst);
    const int H = inst.num_hubs();
    for (int h = 0; h < H; ++h)
        for (int l = 0; l < H; ++l)
            if (h != l && design.open(h, l)) rep.cost_table.inv_cost += w.beta(h, l);
    rep.cost_table.revenue = w.fare_revenue() * rep.cost_table.odmts_riders;
    if (choice_riders[1] > 0.0)
        rep.cost_table.adoption_pct_medium = 100.0 * choice_adopters[1] / choice_riders[1];
    if (choice_riders[2] > 0.0)
        rep.cost_table.adoption_pct_high = 100.0 * choice_adopters[2] / choice_riders[2];
    if (rep.cost_table.odmts_riders > 0.0)
        rep.cost_table.net_cost_per_rider =
            (rep.cost_table.inv_cost + rep.cost_table.trv_cost - rep.cost_table.revenue)
            / rep.cost_table.odmts_riders;
    for (int cls = 0; cls < 3; ++cls) {
        DirectRow& row = rep.direct_table[cls];
        if (row.served_trips > 0)
            row.direct_pct = 100.0 * row.direct_trips / row.served_trips;
    }
    return rep;
}

inline Report build_report(const Instance& inst, const SolveRun& run,
                           const std::optional<Design>& baseline = std::nullopt) {
    return build_report(inst, run.incumbent, baseline);
}

// Scales a per-horizon cost delta to a service year of 52 weeks, 5 days a
// week, 12 operating hours a day.
inline double annualized_savings(double per_horizon_delta, double horizon_hours) {
    return per_horizon_delta * 52.0 * 5.0 * (12.0 / horizon_hours);
}

inline double annualized_savings(const SolveRun& before, const SolveRun& after,
                                 double horizon_hours) {
    return annualized_savings(before.incumbent_objective - after.incumbent_objective,
                              horizon_hours);
}

} // namespace odmts
