#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>

#include "odmts/oracle.hpp"
#include "odmts/report.hpp"

namespace odmts {

namespace detail {

inline std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write file: " + path);
    return out;
}

// fixed two decimals for table money and minutes, NA for empty cells
inline std::string fmt2(double v) {
    if (std::isnan(v)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string fmt6(double v) {
    if (std::isnan(v)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace detail

inline json design_to_json(const Instance& inst, const Design& design) {
    const int H = design.num_hubs();
    json z = json::array();
    for (int h = 0; h < H; ++h) {
        json row = json::array();
        for (int l = 0; l < H; ++l) row.push_back(h != l && design.open(h, l) ? 1 : 0);
        z.push_back(std::move(row));
    }
    json legs = json::array();
    for (int pos = 0; pos < leg_count(H); ++pos) {
        auto [h, l] = leg_pair(H, pos);
        if (design.open(h, l))
            legs.push_back({inst.network.nodes[inst.hub_node(h)],
                            inst.network.nodes[inst.hub_node(l)]});
    }
    json hub_names = json::array();
    for (int node : inst.network.hubs) hub_names.push_back(inst.network.nodes[node]);
    return json{{"hubs", std::move(hub_names)},
                {"z", std::move(z)},
                {"open_legs", std::move(legs)}};
}

inline Design design_from_json(const json& j, int num_hubs) {
    const json& z = j.at("z");
    if (!z.is_array() || static_cast<int>(z.size()) != num_hubs)
        throw IoError("design.z: expected a " + std::to_string(num_hubs) + "-row matrix");
    Design d(num_hubs);
    for (int h = 0; h < num_hubs; ++h) {
        if (static_cast<int>(z[h].size()) != num_hubs)
            throw IoError("design.z: ragged row " + std::to_string(h));
        for (int l = 0; l < num_hubs; ++l)
            if (h != l && z[h][l].get<int>() != 0) d.set(h, l, true);
    }
    return d;
}

inline json solve_config_to_json(const SolveConfig& cfg) {
    return json{{"eps", cfg.eps},
                {"time_limit_seconds", cfg.time_limit_seconds},
                {"max_iterations", cfg.max_iterations},
                {"threads", cfg.threads},
                {"backend", cfg.backend},
                {"exhaustive_hub_limit", cfg.exhaustive_hub_limit},
                {"pareto", cfg.pareto},
                {"strengthen", cfg.strengthen},
                {"lifting", cfg.lifting},
                {"eta", cfg.eta},
                {"only_violated", cfg.only_violated},
                {"direct_preprocess", cfg.direct_preprocess}};
}

inline json result_to_json(const std::string& instance_path, const Instance& inst,
                           const SolveRun& run, const SolveConfig& cfg) {
    json trips = json::array();
    for (std::size_t r = 0; r < inst.trips.size(); ++r) {
        const Trip& trip = inst.trips[r];
        const TripEvaluation& te = run.incumbent_eval.trips[r];
        json legs = json::array();
        for (auto [h, l] : te.route.bus_legs)
            legs.push_back({inst.network.nodes[inst.hub_node(h)],
                            inst.network.nodes[inst.hub_node(l)]});
        json shuttles = json::array();
        for (auto [a, b] : te.route.shuttle_legs)
            shuttles.push_back({inst.network.nodes[a], inst.network.nodes[b]});
        trips.push_back({{"id", trip.id},
                         {"rides", te.rides},
                         {"d", te.route.d_value},
                         {"f", te.route.f_value},
                         {"direct", te.route.is_direct},
                         {"bus_legs", std::move(legs)},
                         {"shuttle_legs", std::move(shuttles)}});
    }
    return json{{"instance", instance_path},
                {"status", to_string(run.status)},
                {"objective", run.incumbent_objective},
                {"lower_bound", run.lower_bound},
                {"iterations", run.iterations.size()},
                {"design", design_to_json(inst, run.incumbent)},
                {"trips", std::move(trips)},
                {"config", solve_config_to_json(cfg)}};
}

inline void write_result(const json& result, const std::string& path) {
    auto out = detail::open_for_write(path);
    out << result.dump(2) << "\n";
}

inline json load_result(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open result file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError(path + ": invalid JSON: " + e.what());
    }
    return j;
}

// One compact JSON object per iteration. Wall times stay out so repeated
// runs write identical bytes; timing lives in the ablation table instead.
inline void write_runlog(const SolveRun& run, const std::string& path) {
    auto out = detail::open_for_write(path);
    for (const IterationRecord& rec : run.iterations) {
        json line{{"iter", rec.iteration},
                  {"lower_bound", rec.lower_bound},
                  {"upper_bound", rec.upper_bound},
                  {"incumbent_updated", rec.incumbent_updated},
                  {"cuts_added", rec.cuts_added}};
        out << line.dump() << "\n";
    }
}

namespace detail {

inline std::string design_label(const Instance& inst, const Design& design) {
    std::string label;
    for (int pos = 0; pos < leg_count(design.num_hubs()); ++pos) {
        auto [h, l] = leg_pair(design.num_hubs(), pos);
        if (!design.open(h, l)) continue;
        if (!label.empty()) label += ';';
        label += inst.network.nodes[inst.hub_node(h)] + ">"
               + inst.network.nodes[inst.hub_node(l)];
    }
    return label.empty() ? "-" : label;
}

} // namespace detail

inline void write_oracle_csv(const Instance& inst, const OracleResult& res,
                             const std::string& path) {
    auto out = detail::open_for_write(path);
    out << "design,objective,trip_id,d,f,rides\n";
    for (const OracleRow& row : res.per_design_table) {
        const std::string label = detail::design_label(inst, row.design);
        for (std::size_t r = 0; r < inst.trips.size(); ++r)
            out << label << ',' << detail::fmt6(row.objective) << ','
                << inst.trips[r].id << ',' << detail::fmt6(row.d[r]) << ','
                << detail::fmt6(row.f[r]) << ',' << (row.rides[r] ? 1 : 0) << "\n";
        if (inst.trips.empty())
            out << label << ',' << detail::fmt6(row.objective) << ",,,,\n";
    }
}

inline void write_ablate_csv(const std::vector<std::pair<std::string, SolveRun>>& variants,
                             const std::string& path) {
    auto out = detail::open_for_write(path);
    out << "variant,iteration,lower_bound,upper_bound,gap_pct,wall_time_seconds\n";
    for (const auto& [name, run] : variants) {
        for (const IterationRecord& rec : run.iterations) {
            const double scale = std::max(std::abs(rec.upper_bound), 1e-12);
            const double gap = 100.0 * (rec.upper_bound - rec.lower_bound) / scale;
            char wall[64];
            std::snprintf(wall, sizeof wall, "%.3f", rec.wall_time_seconds);
            out << name << ',' << rec.iteration << ',' << detail::fmt6(rec.lower_bound)
                << ',' << detail::fmt6(rec.upper_bound) << ',' << detail::fmt6(gap)
                << ',' << wall << "\n";
        }
    }
}

inline void write_report_csv(const Report& rep, const std::string& path) {
    auto out = detail::open_for_write(path);
    constexpr const char* classes[3] = {"low", "medium", "high"};
    out << "# duration\n";
    out << "income_class,group,trips,riders,odmts_min,direct_min,baseline_min\n";
    for (int cls = 0; cls < 3; ++cls)
        for (int grp = 0; grp < 3; ++grp) {
            const DurationStats& cell = rep.duration_table[cls][grp];
            out << classes[cls] << ',' << to_string(static_cast<RiderGroup>(grp)) << ','
                << cell.trips << ',' << static_cast<long long>(cell.riders) << ','
                << detail::fmt2(cell.odmts_min) << ',' << detail::fmt2(cell.direct_min)
                << ',' << detail::fmt2(cell.baseline_min) << "\n";
        }
    out << "\n# cost\n";
    out << "adoption_pct_medium,adoption_pct_high,odmts_riders,revenue,inv_cost,"
           "trv_cost,nc_per_rider\n";
    const CostTable& c = rep.cost_table;
    out << detail::fmt2(c.adoption_pct_medium) << ',' << detail::fmt2(c.adoption_pct_high)
        << ',' << static_cast<long long>(c.odmts_riders) << ',' << detail::fmt2(c.revenue)
        << ',' << detail::fmt2(c.inv_cost) << ',' << detail::fmt2(c.trv_cost) << ','
        << detail::fmt2(c.net_cost_per_rider) << "\n";
    out << "\n# direct\n";
    out << "income_class,served_trips,direct_trips,direct_pct\n";
    for (int cls = 0; cls < 3; ++cls) {
        const DirectRow& row = rep.direct_table[cls];
        out << classes[cls] << ',' << row.served_trips << ',' << row.direct_trips << ','
            << detail::fmt2(row.direct_pct) << "\n";
    }
}

inline json geojson_from(const Instance& inst, const Design& design) {
    if (inst.network.coords.size() != inst.network.nodes.size())
        throw ValidationError("instance carries no stop coordinates; nothing to draw");
    json features = json::array();
    for (int i = 0; i < inst.num_nodes(); ++i) {
        json props{{"id", inst.network.nodes[i]},
                   {"hub", inst.hub_index_of(i) >= 0}};
        if (inst.network.stop_income.size() == inst.network.nodes.size())
            props["income_class"] = to_string(inst.network.stop_income[i]);
        features.push_back(
            {{"type", "Feature"},
             {"geometry",
              {{"type", "Point"},
               {"coordinates", {inst.network.coords[i][0], inst.network.coords[i][1]}}}},
             {"properties", std::move(props)}});
    }
    const int H = design.num_hubs();
    for (int pos = 0; pos < leg_count(H); ++pos) {
        auto [h, l] = leg_pair(H, pos);
        if (!design.open(h, l)) continue;
        const int a = inst.hub_node(h), b = inst.hub_node(l);
        features.push_back(
            {{"type", "Feature"},
             {"geometry",
              {{"type", "LineString"},
               {"coordinates",
                {{inst.network.coords[a][0], inst.network.coords[a][1]},
                 {inst.network.coords[b][0], inst.network.coords[b][1]}}}}},
             {"properties",
              {{"from", inst.network.nodes[a]}, {"to", inst.network.nodes[b]}}}});
    }
    return json{{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

} // namespace odmts
