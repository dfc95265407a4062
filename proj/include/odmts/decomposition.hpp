#pragma once

#include <algorithm>
#include <chrono>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "odmts/master.hpp"

namespace odmts {

struct SolveConfig {
    double eps = 1e-6;
    double time_limit_seconds = 7200.0;
    long max_iterations = 0;  // 0 means uncapped
    int threads = 1;
    std::string backend = "builtin";
    int exhaustive_hub_limit = 5;
    bool pareto = true;
    bool strengthen = true;
    bool lifting = true;
    double eta = 0.5;
    bool only_violated = false;
    bool direct_preprocess = true;
};

enum class SolveStatus { optimal, time_limit, iteration_limit };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::time_limit: return "time_limit";
        case SolveStatus::iteration_limit: return "iteration_limit";
    }
    return "?";
}

struct IterationRecord {
    int iteration = 0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    bool incumbent_updated = false;
    std::map<std::string, int> cuts_added;  // by kind name
    double wall_time_seconds = 0.0;
};

struct TripEvaluation {
    RouteSolution route;
    bool rides = false;  // choice trips: the induced choice; others always ride
};

struct DesignEvaluation {
    double objective = 0.0;
    std::vector<TripEvaluation> trips;
};

// The true bilevel objective of a design, assembled from follower optima:
// leg costs, plus distance terms for the bound riders, plus the net
// cost-minus-fare term for each adopting choice rider.
inline double upper_bound(const Instance& inst, const Design& design,
                          const std::vector<RouteSolution>& routes,
                          const std::vector<bool>& rides) {
    const ArcWeights w(inst);
    const int H = inst.num_hubs();
    double total = 0.0;
    for (int h = 0; h < H; ++h)
        for (int l = 0; l < H; ++l)
            if (h != l && design.open(h, l)) total += w.beta(h, l);
    const double phi = w.fare_revenue();
    for (std::size_t r = 0; r < inst.trips.size(); ++r) {
        const Trip& trip = inst.trips[r];
        if (!trip.has_choice) total += trip.riders * routes[r].d_value;
        else if (rides[r]) total += trip.riders * (routes[r].d_value - phi);
    }
    return total;
}

namespace detail {

// per-trip follower solves, striped across threads, results written by index
// so the outcome is identical for any thread count
template <typename Fn>
inline void for_each_trip(std::size_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t r = 0; r < n; ++r) fn(r);
        return;
    }
    const int used = static_cast<int>(std::min<std::size_t>(threads, n));
    std::vector<std::thread> crew;
    crew.reserve(used);
    for (int slot = 0; slot < used; ++slot)
        crew.emplace_back([&, slot] {
            for (std::size_t r = slot; r < n; r += used) fn(r);
        });
    for (auto& t : crew) t.join();
}

} // namespace detail

inline DesignEvaluation evaluate_design(const Instance& inst, const Design& design,
                                        int threads = 1) {
    DesignEvaluation eval;
    const std::size_t n = inst.trips.size();
    eval.trips.resize(n);
    detail::for_each_trip(n, threads, [&](std::size_t r) {
        const Trip& trip = inst.trips[r];
        TripEvaluation& te = eval.trips[r];
        te.route = solve_follower(inst, trip, design);
        te.rides = !trip.has_choice || evaluate_choice(trip, te.route.f_value);
    });
    std::vector<RouteSolution> routes(n);
    std::vector<bool> rides(n);
    for (std::size_t r = 0; r < n; ++r) {
        routes[r] = eval.trips[r].route;
        rides[r] = eval.trips[r].rides;
    }
    eval.objective = upper_bound(inst, design, routes, rides);
    return eval;
}

struct SolveRun {
    SolveStatus status = SolveStatus::optimal;
    Design incumbent{0};
    double incumbent_objective = std::numeric_limits<double>::infinity();
    double lower_bound = -std::numeric_limits<double>::infinity();
    std::vector<IterationRecord> iterations;
    DesignEvaluation incumbent_eval;
};

// Alternate master solves with follower probes, cutting away optimistic
// guesses, until the incumbent's true value meets the relaxation bound.
inline SolveRun solve(const Instance& inst, const SolveConfig& cfg = {}) {
    validate_backend(cfg.backend);
    if (cfg.backend == "builtin" && inst.num_hubs() > cfg.exhaustive_hub_limit)
        throw ValidationError(
            "exhaustive master walk supports at most "
            + std::to_string(cfg.exhaustive_hub_limit)
            + " hubs; raise the limit or switch to the bnb backend");
    const int threads = std::max(1, cfg.threads);
    const auto started = std::chrono::steady_clock::now();
    const auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    };

    MasterModel model = build_master(inst, cfg.direct_preprocess);
    const std::size_t n = inst.trips.size();
    SolveRun run;
    int iter = 0;
    for (;;) {
        ++iter;
        const MasterSolution ms = solve_master(model, cfg.backend);
        if (!ms.feasible)
            throw ValidationError("master relaxation ran out of designs; cut pool inconsistent");
        run.lower_bound = std::max(run.lower_bound, ms.objective);

        std::vector<RouteSolution> routes(n);
        std::vector<DualSolution> duals(n);
        std::vector<char> rides(n, 0);
        detail::for_each_trip(n, threads, [&](std::size_t r) {
            const Trip& trip = inst.trips[r];
            routes[r] = solve_follower(inst, trip, ms.design);
            rides[r] = !trip.has_choice || evaluate_choice(trip, routes[r].f_value) ? 1 : 0;
            if (!model.trips[r].fixed) duals[r] = extract_duals(inst, trip, ms.design);
        });

        std::map<std::string, int> added;
        for (std::size_t r = 0; r < n; ++r) {
            if (model.trips[r].fixed) continue;
            const Trip& trip = inst.trips[r];
            Cut oc = cfg.pareto
                ? pareto_cut(inst, static_cast<int>(r), ms.design, routes[r].d_value,
                             duals[r], cfg.eta)
                : benders_cut(inst, static_cast<int>(r), duals[r]);
            const bool wanted =
                !cfg.only_violated || !cut_satisfied(oc, ms.design, ms.d[r], ms.delta[r]);
            if (wanted) {
                const char* name = cut_kind_name(oc.kind);
                if (model.pool.add(std::move(oc))) ++added[name];
            }
            if (trip.has_choice) {
                const bool guessed = ms.delta[r] > 0.5;
                for (Cut& c : consistency_cuts(inst, static_cast<int>(r), ms.design,
                                               routes[r], guessed, cfg.strengthen,
                                               cfg.lifting)) {
                    const char* name = cut_kind_name(c.kind);
                    if (model.pool.add(std::move(c))) ++added[name];
                }
            }
        }

        std::vector<bool> rides_b(n);
        for (std::size_t r = 0; r < n; ++r) rides_b[r] = rides[r] != 0;
        const double ub_hat = upper_bound(inst, ms.design, routes, rides_b);
        const bool improved = ub_hat < run.incumbent_objective;
        if (improved) {
            run.incumbent = ms.design;
            run.incumbent_objective = ub_hat;
            run.incumbent_eval.objective = ub_hat;
            run.incumbent_eval.trips.resize(n);
            for (std::size_t r = 0; r < n; ++r)
                run.incumbent_eval.trips[r] = {routes[r], rides_b[r]};
        }

        IterationRecord rec;
        rec.iteration = iter;
        rec.lower_bound = run.lower_bound;
        rec.upper_bound = run.incumbent_objective;
        rec.incumbent_updated = improved;
        rec.cuts_added = std::move(added);
        rec.wall_time_seconds = elapsed();
        run.iterations.push_back(std::move(rec));

        if (run.incumbent_objective - run.lower_bound <= cfg.eps) {
            run.status = SolveStatus::optimal;
            break;
        }
        if (cfg.time_limit_seconds > 0.0 && elapsed() >= cfg.time_limit_seconds) {
            run.status = SolveStatus::time_limit;
            break;
        }
        if (cfg.max_iterations > 0 && iter >= cfg.max_iterations) {
            run.status = SolveStatus::iteration_limit;
            break;
        }
    }
    return run;
}

} // namespace odmts
