#include <doctest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "canoma/comparative_advantage.hpp"

#include "test_support.hpp"

using namespace canoma;
using test_support::gains2;

TEST_CASE("the pairwise criterion is the strict cross-product test") {
    const ChannelGains g = gains2(4.0, 1.0, 1.0, 1.0);

    // User 1 is relatively stronger toward BS 1, user 2 toward BS 2.
    CHECK(pairwise_criterion(g, 0, 1, 0, 1));
    CHECK(pairwise_criterion(g, 1, 0, 1, 0));
    CHECK_FALSE(pairwise_criterion(g, 1, 0, 0, 1));
    CHECK_FALSE(pairwise_criterion(g, 0, 1, 1, 0));

    SUBCASE("identical rows hold no strict advantage either way") {
        const ChannelGains flat = gains2(2.0, 3.0, 2.0, 3.0);
        CHECK_FALSE(pairwise_criterion(flat, 0, 1, 0, 1));
        CHECK_FALSE(pairwise_criterion(flat, 1, 0, 0, 1));
    }
    SUBCASE("scaling a BS column leaves the comparison untouched") {
        ChannelGains scaled = g;
        scaled.g.col(0) *= 1024.0;  // a power of two: the products stay exact
        scaled.g.col(1) *= 0.25;
        CHECK(pairwise_criterion(scaled, 0, 1, 0, 1) == pairwise_criterion(g, 0, 1, 0, 1));
        CHECK(pairwise_criterion(scaled, 1, 0, 0, 1) == pairwise_criterion(g, 1, 0, 0, 1));
    }
    SUBCASE("zero gains are rejected, indices are checked") {
        const ChannelGains zero = gains2(0.0, 1.0, 1.0, 1.0);
        CHECK_THROWS_AS(pairwise_criterion(zero, 0, 1, 0, 1), std::domain_error);
        CHECK_THROWS_AS(pairwise_criterion(g, 0, 2, 0, 1), std::invalid_argument);
        CHECK_FALSE(pairwise_criterion(g, 0, 0, 0, 1));  // nobody dominates themselves
    }
}

TEST_CASE("users order by their BS-1-to-BS-2 gain ratio, descending") {
    ChannelGains g;
    g.g.resize(3, 2);

    SUBCASE("already sorted") {
        g.g << 4.0, 1.0, 2.0, 2.0, 1.0, 2.0;  // ratios 4, 1, 0.5
        CHECK(order_users_by_advantage(g) == std::vector<int>{0, 1, 2});
    }
    SUBCASE("reversed input") {
        g.g << 1.0, 2.0, 2.0, 2.0, 4.0, 1.0;  // ratios 0.5, 1, 4
        CHECK(order_users_by_advantage(g) == std::vector<int>{2, 1, 0});
    }
    SUBCASE("exact ties keep the original index order") {
        g.g << 2.0, 4.0, 3.0, 6.0, 8.0, 2.0;  // ratios 0.5, 0.5, 4
        CHECK(order_users_by_advantage(g) == std::vector<int>{2, 0, 1});
    }
    SUBCASE("the order agrees with the pairwise criterion on every adjacent pair") {
        std::mt19937_64 rng(21);
        for (int rep = 0; rep < 500; ++rep) {
            const ChannelGains random = test_support::random_gains(rng, 5);
            const std::vector<int> order = order_users_by_advantage(random);
            REQUIRE(order.size() == 5);
            std::vector<int> sorted = order;
            std::sort(sorted.begin(), sorted.end());
            CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4});
            for (std::size_t k = 0; k + 1 < order.size(); ++k) {
                // The later user must never strictly dominate the earlier
                // one at BS 1.
                CHECK_FALSE(pairwise_criterion(random, order[k + 1], order[k], 0, 1));
            }
        }
    }
}

TEST_CASE("the selected edges pin the favored user to its whole BS budget") {
    SUBCASE("user 1 favored by BS 1") {
        const EdgeSubspace sub = edge_subspace_two_user(gains2(4.0, 1.0, 1.0, 1.0));
        CHECK(sub.bs1_favors_user1);
        CHECK(sub.edges[0].coord == 0);
        CHECK(sub.edges[0].value == 1.0);  // f11 = 1
        CHECK(sub.edges[1].coord == 1);
        CHECK(sub.edges[1].value == 0.0);  // f12 = 0
    }
    SUBCASE("user 2 favored by BS 1") {
        const EdgeSubspace sub = edge_subspace_two_user(gains2(1.0, 1.0, 4.0, 1.0));
        CHECK_FALSE(sub.bs1_favors_user1);
        CHECK(sub.edges[0].coord == 0);
        CHECK(sub.edges[0].value == 0.0);  // f11 = 0
        CHECK(sub.edges[1].coord == 1);
        CHECK(sub.edges[1].value == 1.0);  // f12 = 1
    }
    SUBCASE("a perfectly balanced channel falls to the second branch") {
        const EdgeSubspace sub = edge_subspace_two_user(gains2(2.0, 2.0, 1.0, 1.0));
        CHECK_FALSE(sub.bs1_favors_user1);
    }
    SUBCASE("point_on_edge walks the free coordinate") {
        const auto [f11, f12] = point_on_edge(PinnedEdge{0, 1.0}, 0.25);
        CHECK(f11 == 1.0);
        CHECK(f12 == 0.25);
        const auto [g11, g12] = point_on_edge(PinnedEdge{1, 0.0}, 0.75);
        CHECK(g11 == 0.75);
        CHECK(g12 == 0.0);
    }
}

TEST_CASE("normalized advantage measures channel asymmetry on [0, 1]") {
    CHECK(normalized_advantage(gains2(1.0, 1.0, 1.0, 1.0)) == 0.0);
    CHECK(normalized_advantage(gains2(1.0, 0.0, 0.0, 1.0)) == 1.0);
    CHECK(normalized_advantage(gains2(3.0, 1.0, 1.0, 1.0)) == 0.5);
    CHECK(normalized_advantage(gains2(1.0, 3.0, 1.0, 1.0)) == 0.5);  // symmetric in the two products

    SUBCASE("invariant under global and per-column power-of-two scaling") {
        std::mt19937_64 rng(6);
        for (int rep = 0; rep < 200; ++rep) {
            const ChannelGains g = test_support::random_gains(rng, 2);
            ChannelGains scaled = g;
            scaled.g *= 4.0;
            CHECK(normalized_advantage(scaled) == normalized_advantage(g));
            ChannelGains cols = g;
            cols.g.col(0) *= 0.5;
            cols.g.col(1) *= 8.0;
            CHECK(normalized_advantage(cols) == normalized_advantage(g));
        }
    }
    SUBCASE("degenerate channels with both cross products zero are rejected") {
        CHECK_THROWS_AS(normalized_advantage(gains2(1.0, 0.0, 1.0, 0.0)), std::domain_error);
        CHECK_THROWS_AS(normalized_advantage(gains2(0.0, 0.0, 0.0, 0.0)), std::domain_error);
    }
    SUBCASE("random channels stay in bounds") {
        std::mt19937_64 rng(16);
        for (int rep = 0; rep < 500; ++rep) {
            const double a = normalized_advantage(test_support::random_gains(rng, 2));
            CHECK(a >= 0.0);
            CHECK(a <= 1.0);
        }
    }
}

TEST_CASE("split patterns let earlier users use BS 1 and later users BS 2") {
    SUBCASE("two users, split at the first") {
        const SupportPattern s = split_search_space({0, 1}, 1, 2);
        CHECK(s(0, 0));
        CHECK(s(0, 1));  // the split user may draw on both BSs
        CHECK_FALSE(s(1, 0));
        CHECK(s(1, 1));
    }
    SUBCASE("two users, split at the second") {
        const SupportPattern s = split_search_space({0, 1}, 2, 2);
        CHECK(s(0, 0));
        CHECK_FALSE(s(0, 1));
        CHECK(s(1, 0));
        CHECK(s(1, 1));
    }
    SUBCASE("the pattern follows the advantage order, not the index order") {
        const SupportPattern s = split_search_space({1, 0}, 1, 2);
        CHECK(s(1, 0));
        CHECK(s(1, 1));
        CHECK_FALSE(s(0, 0));
        CHECK(s(0, 1));
    }
    SUBCASE("three users, middle split") {
        const SupportPattern s = split_search_space({2, 0, 1}, 2, 3);
        // Rank 1 (user 2): BS 1 only. Rank 2 (user 0): both. Rank 3 (user 1): BS 2 only.
        CHECK(s(2, 0));
        CHECK_FALSE(s(2, 1));
        CHECK(s(0, 0));
        CHECK(s(0, 1));
        CHECK_FALSE(s(1, 0));
        CHECK(s(1, 1));
    }
    SUBCASE("the union over split positions is exactly the staircase family") {
        // For two users every entry appears in some split's support.
        SupportPattern any(2, 2);
        any.setConstant(false);
        for (int split = 1; split <= 2; ++split) any = any || split_search_space({0, 1}, split, 2);
        CHECK(any.all());
    }
    SUBCASE("invalid orders and split positions are rejected") {
        CHECK_THROWS_AS(split_search_space({0, 0}, 1, 2), std::invalid_argument);
        CHECK_THROWS_AS(split_search_space({0, 1}, 0, 2), std::invalid_argument);
        CHECK_THROWS_AS(split_search_space({0, 1}, 3, 2), std::invalid_argument);
        CHECK_THROWS_AS(split_search_space({0, 1}, 1, 3), std::invalid_argument);
    }
}
