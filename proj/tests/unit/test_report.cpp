#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "odmts/report.hpp"
#include "support/random_instances.hpp"
#include "support/test_instances.hpp"

using namespace odmts;

TEST_CASE("a single adopter fills exactly one duration cell") {
    auto inst = testsup::make_tiny4({.choice = true});
    const SolveRun run = solve(inst);
    const Report rep = build_report(inst, run);

    const DurationStats& cell = rep.duration_table[1][0];  // medium, adopting
    CHECK(cell.trips == 1);
    CHECK(cell.riders == 1.0);
    CHECK(cell.odmts_min == 12.0);
    CHECK(cell.direct_min == 12.0);
    CHECK(std::isnan(cell.baseline_min));
    for (int cls = 0; cls < 3; ++cls)
        for (int grp = 0; grp < 3; ++grp) {
            if (cls == 1 && grp == 0) continue;
            CHECK(rep.duration_table[cls][grp].trips == 0);
            CHECK(std::isnan(rep.duration_table[cls][grp].odmts_min));
        }

    CHECK(rep.cost_table.adoption_pct_medium == 100.0);
    CHECK(std::isnan(rep.cost_table.adoption_pct_high));
    CHECK(rep.cost_table.odmts_riders == 1.0);
    CHECK(rep.cost_table.revenue == 1.0);
    CHECK(rep.cost_table.inv_cost == 0.0);
    CHECK(rep.cost_table.trv_cost == 9.0);
    CHECK(rep.cost_table.net_cost_per_rider == 8.0);

    CHECK(rep.direct_table[1].served_trips == 1);
    CHECK(rep.direct_table[1].direct_trips == 1);
    CHECK(rep.direct_table[1].direct_pct == 100.0);
    CHECK_FALSE(rep.has_baseline);
}

TEST_CASE("a rejecting rider leaves the served tables empty") {
    auto inst = testsup::make_tiny4({.choice = true, .alpha = 1.0, .t_cur = 3.0});
    const SolveRun run = solve(inst);
    const Report rep = build_report(inst, run);

    CHECK(rep.duration_table[1][0].trips == 0);
    const DurationStats& cell = rep.duration_table[1][2];  // medium, not adopting
    CHECK(cell.trips == 1);
    CHECK(cell.odmts_min == 12.0);
    CHECK(cell.direct_min == 12.0);

    CHECK(rep.cost_table.adoption_pct_medium == 0.0);
    CHECK(rep.cost_table.odmts_riders == 0.0);
    CHECK(rep.cost_table.revenue == 0.0);
    CHECK(rep.cost_table.trv_cost == 0.0);
    CHECK(std::isnan(rep.cost_table.net_cost_per_rider));
    CHECK(rep.direct_table[1].served_trips == 0);
    CHECK(std::isnan(rep.direct_table[1].direct_pct));
}

TEST_CASE("the optional baseline column prices trips on a reference design") {
    auto inst = testsup::make_tiny4({.choice = true});
    Design closed(2), full(2);
    full.set(0, 1, true);
    full.set(1, 0, true);
    const Report rep = build_report(inst, closed, full);
    CHECK(rep.has_baseline);
    CHECK(rep.duration_table[1][0].odmts_min == 12.0);
    CHECK(rep.duration_table[1][0].baseline_min == 14.0);
}

TEST_CASE("bound riders who go direct collapse travel cost to the direct terms") {
    auto inst = testsup::make_tiny4_far_hubs();
    const SolveRun run = solve(inst);
    const Report rep = build_report(inst, run);

    const DurationStats& cell = rep.duration_table[1][1];  // medium, existing
    CHECK(cell.trips == 1);
    CHECK(cell.odmts_min == 12.0);
    CHECK(cell.direct_min == 12.0);
    // direct shuttle only: (1-theta) g d + theta t = 0.5*6 + 0.5*12
    CHECK(rep.cost_table.trv_cost == 9.0);
    CHECK(rep.cost_table.inv_cost == 0.0);
    CHECK(rep.cost_table.revenue == 1.0);
    CHECK(rep.cost_table.net_cost_per_rider == 8.0);
    CHECK(rep.direct_table[1].direct_pct == 100.0);
}

TEST_CASE("table fields recompute from the incumbent design") {
    testsup::RandomSpec spec;
    spec.seed = 61;
    spec.n_nodes = 12;
    spec.n_hubs = 3;
    spec.n_trips = 14;
    spec.choice_prob = 0.5;
    const auto inst = testsup::make_random_instance(spec);
    const SolveRun run = solve(inst);
    const Report rep = build_report(inst, run);

    const DesignEvaluation eval = evaluate_design(inst, run.incumbent);
    const ArcWeights w(inst);
    double inv = 0.0;
    for (int h = 0; h < inst.num_hubs(); ++h)
        for (int l = 0; l < inst.num_hubs(); ++l)
            if (h != l && run.incumbent.open(h, l)) inv += w.beta(h, l);
    double trv = 0.0, riders = 0.0;
    int total_trips = 0;
    for (std::size_t r = 0; r < inst.trips.size(); ++r)
        if (eval.trips[r].rides) {
            trv += inst.trips[r].riders * eval.trips[r].route.d_value;
            riders += inst.trips[r].riders;
        }
    for (int cls = 0; cls < 3; ++cls)
        for (int grp = 0; grp < 3; ++grp) total_trips += rep.duration_table[cls][grp].trips;

    CHECK(total_trips == static_cast<int>(inst.trips.size()));
    CHECK_THAT(rep.cost_table.inv_cost, Catch::Matchers::WithinAbs(inv, 1e-9));
    CHECK_THAT(rep.cost_table.trv_cost, Catch::Matchers::WithinAbs(trv, 1e-9));
    CHECK(rep.cost_table.odmts_riders == riders);
    CHECK_THAT(rep.cost_table.revenue,
               Catch::Matchers::WithinAbs(w.fare_revenue() * riders, 1e-9));
    if (riders > 0.0)
        CHECK_THAT(rep.cost_table.net_cost_per_rider,
                   Catch::Matchers::WithinAbs(
                       (inv + trv - rep.cost_table.revenue) / riders, 1e-6));

    // rebuilding from scratch is bit-identical: the tables are pure functions
    const Report again = build_report(inst, run.incumbent);
    for (int cls = 0; cls < 3; ++cls)
        for (int grp = 0; grp < 3; ++grp) {
            const DurationStats& a = rep.duration_table[cls][grp];
            const DurationStats& b = again.duration_table[cls][grp];
            CHECK(a.trips == b.trips);
            if (a.trips > 0) {
                CHECK(a.odmts_min == b.odmts_min);
                CHECK(a.direct_min == b.direct_min);
            }
        }
}

TEST_CASE("annual scaling multiplies out the service calendar") {
    CHECK(annualized_savings(10.0, 12.0) == 2600.0);
    CHECK(annualized_savings(10.0, 6.0) == 5200.0);

    SolveRun before, after;
    before.incumbent_objective = 20.0;
    after.incumbent_objective = 12.0;
    CHECK(annualized_savings(before, after, 12.0) == 2080.0);
}
