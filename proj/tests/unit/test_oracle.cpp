#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <set>
#include <vector>

#include "odmts/decomposition.hpp"
#include "odmts/oracle.hpp"
#include "support/random_instances.hpp"
#include "support/test_instances.hpp"

using namespace odmts;

TEST_CASE("four-stop table prices both balanced designs by hand-checkable values") {
    auto inst = testsup::make_tiny4();
    const OracleResult res = enumerate_bilevel(inst);

    // two hubs give four arc subsets, of which only the empty set and the
    // two-way pair keep every hub balanced
    REQUIRE(res.per_design_table.size() == 2);
    CHECK(res.per_design_table[0].design.count_open() == 0);
    CHECK(res.per_design_table[0].objective == 9.0);
    CHECK(res.per_design_table[1].design.count_open() == 2);
    CHECK(res.per_design_table[1].objective == 13.0);
    CHECK(res.best_objective == 9.0);
    CHECK(res.best_design.count_open() == 0);
    CHECK(res.per_design_table[0].d[0] == 9.0);
    CHECK(res.per_design_table[1].d[0] == 8.0);
    CHECK(res.per_design_table[1].f[0] == 14.0);
    CHECK(res.per_design_table[0].rides[0]);

    auto choice = testsup::make_tiny4({.choice = true});
    const OracleResult res2 = enumerate_bilevel(choice);
    CHECK(res2.per_design_table[0].objective == 8.0);
    CHECK(res2.per_design_table[1].objective == 12.0);
    CHECK(res2.best_objective == 8.0);
}

TEST_CASE("extreme leg prices pull the best design to the expected corner") {
    auto pricey = testsup::make_tiny4({.bus_cost = 1e9});
    CHECK(enumerate_bilevel(pricey).best_design.count_open() == 0);

    auto free_legs = testsup::make_tiny4({.bus_cost = 0.0});
    const OracleResult res = enumerate_bilevel(free_legs);
    CHECK(res.best_design.count_open() == 2);
    CHECK(res.best_objective == 8.0);
}

TEST_CASE("enumeration refuses hub counts past its limit") {
    testsup::RandomSpec spec;
    spec.seed = 41;
    spec.n_nodes = 8;
    spec.n_hubs = 5;
    auto inst = testsup::make_random_instance(spec);
    CHECK_THROWS_AS(enumerate_bilevel(inst), ValidationError);

    spec.n_hubs = 3;
    auto small = testsup::make_random_instance(spec);
    CHECK_THROWS_AS(enumerate_bilevel(small, 2), ValidationError);
    CHECK_NOTHROW(enumerate_bilevel(small, 3));
}

TEST_CASE("table rows agree with the solver's own design pricing") {
    for (std::uint64_t seed : {51u, 52u, 53u}) {
        for (int hubs : {2, 3}) {
            testsup::RandomSpec spec;
            spec.seed = seed;
            spec.n_nodes = 7;
            spec.n_hubs = hubs;
            spec.n_trips = 5;
            spec.choice_prob = 0.6;
            const auto inst = testsup::make_random_instance(spec);
            CAPTURE(seed, hubs);

            const OracleResult res = enumerate_bilevel(inst);
            const auto masks = balanced_design_masks(hubs);
            REQUIRE(res.per_design_table.size() == masks.size());

            std::set<std::uint64_t> seen;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < res.per_design_table.size(); ++i) {
                const OracleRow& row = res.per_design_table[i];
                CHECK(degree_balanced(row.design));
                CHECK(row.design == design_from_mask(hubs, masks[i]));
                CHECK(seen.insert(masks[i]).second);

                const DesignEvaluation eval = evaluate_design(inst, row.design);
                CHECK(row.objective == eval.objective);
                for (std::size_t r = 0; r < inst.trips.size(); ++r) {
                    CHECK(row.rides[r] == eval.trips[r].rides);
                    CHECK(row.d[r] == eval.trips[r].route.d_value);
                    CHECK(row.f[r] == eval.trips[r].route.f_value);
                }
                best = std::min(best, row.objective);
            }
            CHECK(res.best_objective == best);

            // ties resolve to the earliest table row
            for (const OracleRow& row : res.per_design_table) {
                if (row.objective == best) {
                    CHECK(row.design == res.best_design);
                    break;
                }
            }

            SolveConfig cfg;
            cfg.eps = 1e-7;
            const SolveRun run = solve(inst, cfg);
            CHECK_THAT(run.incumbent_objective,
                       Catch::Matchers::WithinAbs(res.best_objective, 1e-6));
        }
    }
}
