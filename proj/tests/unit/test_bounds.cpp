#include <catch2/catch_amalgamated.hpp>

#include "odmts/bounds.hpp"
#include "support/random_instances.hpp"
#include "support/test_instances.hpp"

using namespace odmts;

namespace {

Design tiny4_design(bool ab, bool ba) {
    Design d(2);
    if (ab) d.set(0, 1, true);
    if (ba) d.set(1, 0, true);
    return d;
}

// 1-D line instance: O=0, C=0.5, A=1, B=6, D=7; hubs A, B, C
Instance make_line5() {
    Instance inst;
    inst.network.nodes = {"O", "D", "A", "B", "C"};
    inst.network.hubs = {2, 3, 4};
    const double x[5] = {0.0, 7.0, 1.0, 6.0, 0.5};
    Matrix dist(5), time(5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            dist(i, j) = std::abs(x[i] - x[j]);
            time(i, j) = 2.0 * dist(i, j);
        }
    inst.network.dist = std::move(dist);
    inst.network.time = std::move(time);
    inst.econ.theta = 0.5;
    inst.econ.shuttle_cost_per_mile = 1.0;
    inst.econ.bus_cost_per_mile = 1.0;
    inst.econ.buses_per_leg = 1;
    inst.econ.bus_wait = 0.0;
    inst.econ.fare = 2.0;
    Trip t;
    t.id = "r1";
    t.origin = 0;
    t.destination = 1;
    inst.trips.push_back(std::move(t));
    return inst;
}

} // namespace

TEST_CASE("cost envelope per trip") {
    auto inst = testsup::make_tiny4();
    auto b = compute_big_m(inst, inst.trips[0]);
    REQUIRE(b.big_m == Catch::Approx(9.0).margin(1e-12));
    REQUIRE(b.d_lower == Catch::Approx(8.0).margin(1e-12));
    REQUIRE(b.d_lower <= b.big_m);
}

TEST_CASE("duration ceiling and floor on tiny4 routes") {
    auto inst = testsup::make_tiny4();
    const Trip& trip = inst.trips[0];

    SECTION("direct route ceiling") {
        auto route = solve_follower(inst, trip, tiny4_design(false, false));
        REQUIRE(route.is_direct);
        auto ub = ub_after_growth(inst, trip, route);
        REQUIRE(ub.has_value());
        // t1=12, coeff=1, direct dist 6, min access 1+1=2: max(12, 12+4)
        REQUIRE(*ub == Catch::Approx(16.0).margin(1e-12));
        auto lb = lb_after_shrink(inst, trip, route);
        REQUIRE(lb.has_value());
        REQUIRE(*lb == Catch::Approx(12.0).margin(1e-12));  // direct riders keep their time
    }
    SECTION("hub route ceiling and floor") {
        auto route = solve_follower(inst, trip, tiny4_design(true, false));
        REQUIRE_FALSE(route.is_direct);
        auto ub = ub_after_growth(inst, trip, route);
        // t1=14, access 1+1 equals the min access: no slack
        REQUIRE(*ub == Catch::Approx(14.0).margin(1e-12));
        auto lb = lb_after_shrink(inst, trip, route);
        // worst access 6+6=12 beats direct 6: 14 + (2-12)
        REQUIRE(*lb == Catch::Approx(4.0).margin(1e-12));
    }
    SECTION("pure time objective has no bound machinery") {
        auto pure = testsup::make_tiny4(testsup::Tiny4Options{.theta = 0.0});
        // theta=0: validation still fine, bounds opt out
        auto route = solve_follower(pure, pure.trips[0], tiny4_design(false, false));
        REQUIRE_FALSE(ub_after_growth(pure, pure.trips[0], route).has_value());
        REQUIRE_FALSE(lb_after_shrink(pure, pure.trips[0], route).has_value());
    }
    SECTION("hub endpoints opt out") {
        Trip t;
        t.id = "hub_end";
        t.origin = 2;  // hub A
        t.destination = 1;
        auto route = solve_follower(inst, t, tiny4_design(false, false));
        REQUIRE_FALSE(ub_after_growth(inst, t, route).has_value());
        REQUIRE_FALSE(lb_after_shrink(inst, t, route).has_value());
    }
}

TEST_CASE("always-direct detection") {
    SECTION("tiny4 hubs pay off, nothing flagged") {
        auto inst = testsup::make_tiny4();
        REQUIRE(detect_direct_trips(inst).empty());
    }
    SECTION("far hubs flag the trip") {
        auto inst = testsup::make_tiny4_far_hubs();
        REQUIRE(detect_direct_trips(inst) == std::vector<int>{0});
        // and the flag is sound: direct under every one of the four designs
        for (std::uint64_t mask = 0; mask < 4; ++mask) {
            auto r = solve_follower(inst, inst.trips[0], design_from_mask(2, mask));
            REQUIRE(r.is_direct);
        }
    }
    SECTION("a hub sitting on the origin keeps options open") {
        auto inst = testsup::make_tiny4();
        inst.trips[0].origin = 2;  // A: min access 0 + 1 < direct 6
        REQUIRE(detect_direct_trips(inst).empty());
    }
}

TEST_CASE("duration bounds hold across every comparable design pair") {
    for (std::uint64_t seed = 101; seed <= 106; ++seed) {
        testsup::RandomSpec spec;
        spec.seed = seed;
        spec.n_nodes = 7;
        spec.n_hubs = 3;
        spec.n_trips = 4;
        spec.theta = seed % 2 ? 0.4 : 0.05;
        spec.bus_wait = seed % 3 == 0 ? 0.0 : 2.0;
        auto inst = testsup::make_random_instance(spec);
        const int H = inst.num_hubs();
        const std::uint64_t all = std::uint64_t{1} << leg_count(H);

        for (const Trip& trip : inst.trips) {
            if (inst.hub_index_of(trip.origin) >= 0 || inst.hub_index_of(trip.destination) >= 0)
                continue;
            std::vector<double> minutes(all);
            std::vector<RouteSolution> routes(all);
            for (std::uint64_t mask = 0; mask < all; ++mask) {
                routes[mask] = solve_follower(inst, trip, design_from_mask(H, mask));
                minutes[mask] = routes[mask].f_value;
            }
            for (std::uint64_t m1 = 0; m1 < all; ++m1) {
                auto ub = ub_after_growth(inst, trip, routes[m1]);
                auto lb = lb_after_shrink(inst, trip, routes[m1]);
                REQUIRE(ub.has_value());
                REQUIRE(lb.has_value());
                REQUIRE(*lb <= minutes[m1] + 1e-9);
                REQUIRE(*ub >= minutes[m1] - 1e-9);
                for (std::uint64_t m2 = 0; m2 < all; ++m2) {
                    if ((m1 & m2) == m1)  // m1 subset of m2: growth
                        REQUIRE(minutes[m2] <= *ub + 1e-9);
                    if ((m2 & m1) == m2)  // m2 subset of m1: shrink
                        REQUIRE(minutes[m2] >= *lb - 1e-9);
                }
            }
        }
    }
}

TEST_CASE("always-direct flags are sound on random instances") {
    for (std::uint64_t seed = 121; seed <= 126; ++seed) {
        testsup::RandomSpec spec;
        spec.seed = seed;
        spec.n_nodes = 6;
        spec.n_hubs = 2;
        spec.n_trips = 6;
        spec.bus_wait = 3.0;
        auto inst = testsup::make_random_instance(spec);
        const int H = inst.num_hubs();
        for (int r : detect_direct_trips(inst))
            for (std::uint64_t mask = 0; mask < (1u << leg_count(H)); ++mask) {
                auto route = solve_follower(inst, inst.trips[r], design_from_mask(H, mask));
                INFO("seed " << seed << " trip " << r << " mask " << mask);
                REQUIRE(route.is_direct);
            }
    }
}

TEST_CASE("removing unused legs leaves the route alone") {
    for (std::uint64_t seed = 141; seed <= 144; ++seed) {
        testsup::RandomSpec spec;
        spec.seed = seed;
        spec.n_nodes = 8;
        spec.n_hubs = 3;
        spec.n_trips = 4;
        auto inst = testsup::make_random_instance(spec);
        const int H = inst.num_hubs();
        for (std::uint64_t mask = 0; mask < (1u << leg_count(H)); ++mask) {
            Design d = design_from_mask(H, mask);
            for (const Trip& trip : inst.trips) {
                auto route = solve_follower(inst, trip, d);
                std::uint64_t used = 0;
                for (auto [h, l] : route.bus_legs)
                    used |= std::uint64_t{1} << leg_position(H, h, l);
                for (int k = 0; k < leg_count(H); ++k) {
                    const std::uint64_t bit = std::uint64_t{1} << k;
                    if (!(mask & bit) || (used & bit)) continue;
                    auto trimmed = solve_follower(inst, trip, design_from_mask(H, mask & ~bit));
                    REQUIRE(trimmed.d_value == Catch::Approx(route.d_value).margin(1e-9));
                    REQUIRE(trimmed.f_value == Catch::Approx(route.f_value).margin(1e-9));
                }
            }
        }
    }
}

TEST_CASE("lifting sets on the line instance") {
    auto inst = make_line5();
    const Trip& trip = inst.trips[0];
    Design d(3);  // hubs A=0, B=1, C=2
    d.set(0, 1, true);
    d.set(1, 0, true);

    auto route = solve_follower(inst, trip, d);
    REQUIRE_FALSE(route.is_direct);
    REQUIRE(route.bus_legs == std::vector<std::pair<int, int>>{{0, 1}});

    auto s = lifting_sets(inst, trip, d, route);
    REQUIRE(s.active_hubs == std::vector<int>{0, 1});
    REQUIRE(s.w_origin == std::vector<int>{2});  // C at 0.5 beats A at 1
    REQUIRE(s.w_dest.empty());                   // B at distance 1 already wins
    REQUIRE(s.route_arcs == route.bus_legs);

    // no design opens a leg out of C, so C never turns up active
    for (int h : s.w_origin)
        REQUIRE(std::find(s.active_hubs.begin(), s.active_hubs.end(), h) == s.active_hubs.end());
}

TEST_CASE("lifting set invariants on random instances") {
    for (std::uint64_t seed = 161; seed <= 165; ++seed) {
        testsup::RandomSpec spec;
        spec.seed = seed;
        spec.n_nodes = 8;
        spec.n_hubs = 4;
        spec.n_trips = 3;
        auto inst = testsup::make_random_instance(spec);
        const int H = inst.num_hubs();
        std::mt19937_64 rng(seed);
        for (int round = 0; round < 25; ++round) {
            Design d = design_from_mask(H, rng() & ((1u << leg_count(H)) - 1));
            for (const Trip& trip : inst.trips) {
                auto route = solve_follower(inst, trip, d);
                auto s = lifting_sets(inst, trip, d, route);
                for (int h : s.active_hubs) {
                    bool has_out = false;
                    for (int l = 0; l < H; ++l) has_out |= (l != h && d.open(h, l));
                    REQUIRE(has_out);
                }
                for (int h : s.w_origin) {
                    REQUIRE(std::find(s.active_hubs.begin(), s.active_hubs.end(), h)
                            == s.active_hubs.end());
                    for (int a : s.active_hubs)
                        REQUIRE(inst.network.dist(trip.origin, inst.hub_node(h))
                                < inst.network.dist(trip.origin, inst.hub_node(a)));
                }
                for (int h : s.w_dest) {
                    REQUIRE(std::find(s.active_hubs.begin(), s.active_hubs.end(), h)
                            == s.active_hubs.end());
                    for (int a : s.active_hubs)
                        REQUIRE(inst.network.dist(inst.hub_node(h), trip.destination)
                                < inst.network.dist(inst.hub_node(a), trip.destination));
                }
                for (auto [h, l] : s.route_arcs) REQUIRE(d.open(h, l));
            }
        }
    }
}
