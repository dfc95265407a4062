#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "odmts/instance.hpp"

namespace odmts {

// Knobs for the synthetic case-study shape: uniform stops in a square,
// trips stratified by income with must-ride shares, destinations drawn from
// income-banded zones.
struct GenSpec {
    std::uint64_t seed = 7;
    int n_stops = 40;
    int n_hubs = 5;
    int n_trips = 100;
    std::array<double, 3> income_mix{0.4, 0.3, 0.3};        // low, medium, high
    std::array<double, 3> choice_fractions{0.0, 0.25, 0.5}; // complement must ride
    std::array<double, 3> alphas{2.0, 2.0, 1.5};
    double box_miles = 10.0;
    double speed_min_per_mile = 3.0;
    int riders_min = 1;  // rider volume per trip, uniform
    int riders_max = 4;
    // accessibility scenario: long low-income trips gain a patient choice
    bool long_low_income_choice = false;
    double long_low_income_alpha = 4.0;
};

inline void validate_gen_spec(const GenSpec& spec) {
    std::vector<std::string> out;
    if (spec.n_stops < 2) out.push_back("n_stops: need at least 2");
    if (spec.n_hubs < 1) out.push_back("n_hubs: need at least 1");
    if (spec.n_hubs > spec.n_stops) out.push_back("n_hubs: more hubs than stops");
    if (spec.n_trips < 0) out.push_back("n_trips: negative");
    double mix = 0.0;
    for (double f : spec.income_mix) {
        if (f < 0.0) out.push_back("income_mix: negative share");
        mix += f;
    }
    if (std::abs(mix - 1.0) > 1e-9) out.push_back("income_mix: shares must sum to 1");
    for (double f : spec.choice_fractions)
        if (f < 0.0 || f > 1.0) out.push_back("choice_fractions: outside [0,1]");
    for (double a : spec.alphas)
        if (a < 1.0) out.push_back("alphas: below 1");
    if (!(spec.box_miles > 0.0)) out.push_back("box_miles: must be positive");
    if (!(spec.speed_min_per_mile > 0.0)) out.push_back("speed_min_per_mile: must be positive");
    if (spec.riders_min < 1) out.push_back("riders_min: need at least 1");
    if (spec.riders_max < spec.riders_min) out.push_back("riders_max: below riders_min");
    if (spec.long_low_income_alpha < 1.0) out.push_back("long_low_income_alpha: below 1");
    if (!out.empty()) {
        std::string msg = "invalid generator spec";
        for (const auto& p : out) msg += "\n  " + p;
        throw ValidationError(msg);
    }
}

inline GenSpec parse_gen_spec(const json& j) {
    GenSpec spec;
    spec.seed = j.value("seed", spec.seed);
    spec.n_stops = j.value("n_stops", spec.n_stops);
    spec.n_hubs = j.value("n_hubs", spec.n_hubs);
    spec.n_trips = j.value("n_trips", spec.n_trips);
    if (j.contains("income_mix")) spec.income_mix = j.at("income_mix").get<std::array<double, 3>>();
    if (j.contains("choice_fractions"))
        spec.choice_fractions = j.at("choice_fractions").get<std::array<double, 3>>();
    if (j.contains("alphas")) spec.alphas = j.at("alphas").get<std::array<double, 3>>();
    spec.box_miles = j.value("box_miles", spec.box_miles);
    spec.speed_min_per_mile = j.value("speed_min_per_mile", spec.speed_min_per_mile);
    spec.riders_min = j.value("riders_min", spec.riders_min);
    spec.riders_max = j.value("riders_max", spec.riders_max);
    spec.long_low_income_choice =
        j.value("long_low_income_choice", spec.long_low_income_choice);
    spec.long_low_income_alpha = j.value("long_low_income_alpha", spec.long_low_income_alpha);
    validate_gen_spec(spec);
    return spec;
}

inline GenSpec load_gen_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open generator spec: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError(path + ": invalid JSON: " + e.what());
    }
    return parse_gen_spec(j);
}

namespace detail {

// largest-remainder split of total into three integer counts
inline std::array<int, 3> quota_split(const std::array<double, 3>& shares, int total) {
    std::array<int, 3> counts{};
    std::array<double, 3> rem{};
    int assigned = 0;
    for (int c = 0; c < 3; ++c) {
        const double want = shares[c] * total;
        counts[c] = static_cast<int>(std::floor(want));
        rem[c] = want - counts[c];
        assigned += counts[c];
    }
    while (assigned < total) {
        int pick = 0;
        for (int c = 1; c < 3; ++c)
            if (rem[c] > rem[pick]) pick = c;
        ++counts[pick];
        rem[pick] = -1.0;
        ++assigned;
    }
    return counts;
}

// greedy dispersal: start farthest from the centroid, then keep adding the
// stop farthest from everything picked so far; ties fall to the lower index
inline std::vector<int> farthest_point_hubs(const std::vector<std::array<double, 2>>& pts,
                                            int count) {
    const int n = static_cast<int>(pts.size());
    auto sq_dist = [&](const std::array<double, 2>& a, const std::array<double, 2>& b) {
        const double dx = a[0] - b[0], dy = a[1] - b[1];
        return dx * dx + dy * dy;
    };
    std::array<double, 2> centroid{0.0, 0.0};
    for (const auto& p : pts) {
        centroid[0] += p[0] / n;
        centroid[1] += p[1] / n;
    }
    std::vector<int> hubs;
    std::vector<char> taken(n, 0);
    int first = 0;
    for (int i = 1; i < n; ++i)
        if (sq_dist(pts[i], centroid) > sq_dist(pts[first], centroid)) first = i;
    hubs.push_back(first);
    taken[first] = 1;
    while (static_cast<int>(hubs.size()) < count) {
        int best = -1;
        double best_gap = -1.0;
        for (int i = 0; i < n; ++i) {
            if (taken[i]) continue;
            double gap = std::numeric_limits<double>::infinity();
            for (int h : hubs) gap = std::min(gap, sq_dist(pts[i], pts[h]));
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        hubs.push_back(best);
        taken[best] = 1;
    }
    return hubs;
}

} // namespace detail

inline Instance generate(const GenSpec& spec) {
    validate_gen_spec(spec);
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Instance inst;
    Network& net = inst.network;
    for (int i = 0; i < spec.n_stops; ++i) net.nodes.push_back("s" + std::to_string(i));
    for (int i = 0; i < spec.n_stops; ++i)
        net.coords.push_back({spec.box_miles * unit(rng), spec.box_miles * unit(rng)});

    // income bands sweep west to east, sized by the requested mix
    const double low_edge = spec.box_miles * spec.income_mix[0];
    const double medium_edge = low_edge + spec.box_miles * spec.income_mix[1];
    for (int i = 0; i < spec.n_stops; ++i) {
        const double x = net.coords[i][0];
        net.stop_income.push_back(x < low_edge ? IncomeClass::low
                                 : x < medium_edge ? IncomeClass::medium
                                                   : IncomeClass::high);
    }

    Matrix dist(spec.n_stops), time(spec.n_stops);
    for (int i = 0; i < spec.n_stops; ++i)
        for (int j = 0; j < spec.n_stops; ++j) {
            if (i == j) continue;
            const double dx = net.coords[i][0] - net.coords[j][0];
            const double dy = net.coords[i][1] - net.coords[j][1];
            const double d = std::sqrt(dx * dx + dy * dy);
            dist(i, j) = d;
            time(i, j) = spec.speed_min_per_mile * d;
        }
    net.dist = std::move(dist);
    net.time = std::move(time);
    net.hubs = detail::farthest_point_hubs(net.coords, spec.n_hubs);

    std::array<std::vector<int>, 3> zone_stops;
    for (int i = 0; i < spec.n_stops; ++i)
        zone_stops[static_cast<int>(net.stop_income[i])].push_back(i);

    const std::array<int, 3> class_counts = detail::quota_split(spec.income_mix, spec.n_trips);
    std::uniform_int_distribution<int> stop_pick(0, spec.n_stops - 1);
    std::uniform_int_distribution<int> rider_pick(spec.riders_min, spec.riders_max);
    // riders with an outside option usually beat door-to-door transit times
    std::uniform_real_distribution<double> car_factor(0.5, 1.2);
    const std::array<IncomeClass, 3> classes{IncomeClass::low, IncomeClass::medium,
                                             IncomeClass::high};
    int trip_no = 0;
    for (int c = 0; c < 3; ++c) {
        const int n_choice =
            static_cast<int>(std::llround(spec.choice_fractions[c] * class_counts[c]));
        for (int k = 0; k < class_counts[c]; ++k) {
            Trip t;
            t.id = "t" + std::to_string(trip_no++);
            t.income_class = classes[c];
            t.origin = stop_pick(rng);
            const std::vector<int>& zone = zone_stops[c];
            const bool zoned =
                !zone.empty() && !(zone.size() == 1 && zone[0] == t.origin);
            if (zoned) {
                std::uniform_int_distribution<int> zone_pick(
                    0, static_cast<int>(zone.size()) - 1);
                do t.destination = zone[zone_pick(rng)];
                while (t.destination == t.origin);
            } else {
                do t.destination = stop_pick(rng);
                while (t.destination == t.origin);
            }
            t.riders = rider_pick(rng);
            if (k < n_choice) {
                t.has_choice = true;
                t.alpha = spec.alphas[c];
                t.t_cur = net.time(t.origin, t.destination) * car_factor(rng);
            }
            inst.trips.push_back(std::move(t));
        }
    }

    if (spec.long_low_income_choice) {
        const double long_miles = 0.5 * spec.box_miles;
        for (Trip& t : inst.trips) {
            if (t.income_class != IncomeClass::low || t.has_choice) continue;
            if (net.dist(t.origin, t.destination) < long_miles) continue;
            t.has_choice = true;
            t.alpha = spec.long_low_income_alpha;
            t.t_cur = net.time(t.origin, t.destination);
        }
    }

    return inst;
}

} // namespace odmts
