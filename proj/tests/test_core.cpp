#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "swapregret/regret.hpp"
#include "swapregret/rng.hpp"
#include "swapregret/types.hpp"

using namespace swapregret;

namespace {

Transcript two_round_pointmass() {
    // x = (1,0) both rounds, f = (0,1) both rounds
    Transcript tr;
    tr.n_actions = 2;
    for (int t = 0; t < 2; ++t)
        tr.append(MixedAction::point_mass(2, 0), RewardVector({0.0, 1.0}));
    return tr;
}

} // namespace

TEST_CASE("mixed action validation and renormalization") {
    CHECK_THROWS_AS(MixedAction({0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(MixedAction({-0.2, 1.2}), std::invalid_argument);
    MixedAction a({0.5 + 2e-10, 0.5});
    double sum = 0.0;
    for (int i = 0; i < a.size(); ++i) sum += a[i];
    CHECK(sum == 1.0);
    CHECK(MixedAction::uniform(4)[2] == 0.25);
}

TEST_CASE("reward vector range checks") {
    CHECK_THROWS_AS(RewardVector({0.2, 1.5}), std::invalid_argument);
    CHECK_THROWS_AS(RewardVector({-0.5, 0.5}), std::invalid_argument);
    RewardVector v({-0.5, 0.5}, -1.0, 1.0);
    CHECK(v.lo() == -1.0);
    const RewardVector unit = v.remapped_to_unit();
    CHECK(unit[0] == 0.25);
    CHECK(unit[1] == 0.75);
}

TEST_CASE("base-M digits") {
    CHECK(base_m_digits(5, 3, 3) == std::vector<int>{0, 1, 2});
    CHECK(base_m_digits(0, 2, 4) == std::vector<int>{0, 0, 0, 0});
    CHECK(base_m_digits(7, 2, 3) == std::vector<int>{1, 1, 1});
    CHECK_THROWS_WITH(base_m_digits(8, 2, 3), "address overflow");
}

TEST_CASE("base-M digits enumerate as a counter") {
    // sigma(t) is the base-M increment of sigma(t-1)
    for (const auto& [m, d] : std::vector<std::pair<int, int>>{{2, 4}, {3, 3}, {5, 2}}) {
        auto prev = base_m_digits(0, m, d);
        const std::int64_t top = pow_saturated(m, d);
        for (std::int64_t v = 1; v < top; ++v) {
            auto inc = prev;
            int pos = d - 1;
            while (true) {
                if (++inc[static_cast<std::size_t>(pos)] < m) break;
                inc[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            const auto direct = base_m_digits(v, m, d);
            REQUIRE(direct == inc);
            prev = direct;
        }
    }
}

TEST_CASE("external regret hand examples") {
    CHECK(ext_regret(two_round_pointmass()) == 1.0);

    // Point mass on the per-round argmax earns sum_t max_j f^t[j], which
    // weakly beats every fixed action: regret is zero when one action
    // dominates all rounds and nonpositive otherwise.
    Transcript dominated;
    dominated.n_actions = 3;
    dominated.append(MixedAction::point_mass(3, 1), RewardVector({0.1, 0.9, 0.3}));
    dominated.append(MixedAction::point_mass(3, 1), RewardVector({0.2, 0.8, 0.1}));
    CHECK(ext_regret(dominated) == 0.0);

    Transcript alternating;
    alternating.n_actions = 2;
    alternating.append(MixedAction::point_mass(2, 0), RewardVector({0.9, 0.1}));
    alternating.append(MixedAction::point_mass(2, 1), RewardVector({0.1, 0.9}));
    CHECK(ext_regret(alternating) <= 0.0);
}

TEST_CASE("external regret agrees across summation orders") {
    Rng rng(7);
    const Transcript tr = oracles::random_transcript(4, 16, rng);
    const double lib = ext_regret(tr);
    CHECK(std::abs(lib - oracles::ext_regret_action_major(tr)) < 1e-12);
    CHECK(std::abs(lib - oracles::ext_regret_time_major(tr)) < 1e-12);
}

TEST_CASE("swap regret hand examples") {
    const SwapReport rep = swap_regret(two_round_pointmass());
    CHECK(rep.swap_regret == 1.0);
    CHECK(rep.best_swap == std::vector<int>{1, 1});
    CHECK(rep.per_action_gain[0] == 2.0);
    CHECK(rep.per_action_gain[1] == 0.0);

    // Rewards constant across actions: every swap is gainless.
    Transcript flat;
    flat.n_actions = 3;
    Rng rng(5);
    for (int t = 0; t < 6; ++t) {
        const double c = rng.uniform01();
        flat.append(oracles::random_mixed_action(3, rng), RewardVector::constant(3, c));
    }
    CHECK(swap_regret(flat).swap_regret == 0.0);
}

TEST_CASE("swap regret equals exhaustive enumeration") {
    Rng rng(11);
    const Transcript tr = oracles::random_transcript(3, 5, rng);
    const SwapReport rep = swap_regret(tr);
    CHECK(std::abs(rep.swap_regret - oracles::swap_regret_exhaustive(tr)) < 1e-12);
}

TEST_CASE("swap report internal consistency") {
    Rng rng(23);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 2 + static_cast<int>(rng.uniform_int(4));
        const auto t = 1 + static_cast<std::int64_t>(rng.uniform_int(10));
        const Transcript tr = oracles::random_transcript(n, t, rng);
        const SwapReport report = swap_regret(tr);
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            CHECK(report.per_action_gain[static_cast<std::size_t>(i)] >= 0.0);
            total += report.per_action_gain[static_cast<std::size_t>(i)];
        }
        CHECK(std::abs(report.swap_regret - total / static_cast<double>(t)) < 1e-9);
    }
}

TEST_CASE("transcript validation errors") {
    Transcript empty;
    empty.n_actions = 2;
    CHECK_THROWS_WITH(ext_regret(empty), "empty transcript");

    Transcript bad;
    bad.n_actions = 2;
    bad.plays.push_back(MixedAction::uniform(2));
    CHECK_THROWS_WITH(swap_regret(bad), "malformed transcript");

    Transcript wrong_n;
    wrong_n.n_actions = 3;
    wrong_n.append(MixedAction::uniform(2), RewardVector({0.5, 0.5}));
    CHECK_THROWS_WITH(ext_regret(wrong_n), "malformed transcript");
}

TEST_CASE("regret ordering and bounds on random transcripts") {
    Rng rng(101);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 2 + static_cast<int>(rng.uniform_int(4));
        const auto t = 1 + static_cast<std::int64_t>(rng.uniform_int(12));
        const Transcript tr = oracles::random_transcript(n, t, rng);
        const double ext = ext_regret(tr);
        const double swap = swap_regret(tr).swap_regret;
        CHECK(swap >= 0.0);
        CHECK(swap >= ext - 1e-12);
        CHECK(ext >= -1.0 - 1e-12); // hi - lo = 1
    }
}

TEST_CASE("swap regret is invariant under round permutation") {
    Rng rng(55);
    Transcript tr = oracles::random_transcript(4, 9, rng);
    const double base = swap_regret(tr).swap_regret;
    // rotate and shuffle rounds
    std::vector<std::size_t> order(static_cast<std::size_t>(tr.rounds()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.uniform_int(i)]);
    Transcript shuffled;
    shuffled.n_actions = tr.n_actions;
    for (std::size_t i : order) shuffled.append(tr.plays[i], tr.rewards[i]);
    CHECK(std::abs(swap_regret(shuffled).swap_regret - base) < 1e-12);
    CHECK(std::abs(ext_regret(shuffled) - ext_regret(tr)) < 1e-12);
}

TEST_CASE("regrets are invariant to a constant reward shift") {
    Rng rng(77);
    for (int rep = 0; rep < 10; ++rep) {
        Transcript tr;
        tr.n_actions = 3;
        const auto rounds = 3 + static_cast<std::int64_t>(rng.uniform_int(6));
        for (std::int64_t t = 0; t < rounds; ++t) {
            std::vector<double> f(3);
            for (double& v : f) v = 0.5 * rng.uniform01(); // leave room for the shift
            tr.append(oracles::random_mixed_action(3, rng), RewardVector(std::move(f)));
        }
        const double c = 0.4;
        Transcript shifted;
        shifted.n_actions = 3;
        for (std::int64_t t = 0; t < rounds; ++t) {
            std::vector<double> f(3);
            for (int j = 0; j < 3; ++j) f[static_cast<std::size_t>(j)] = tr.rewards[static_cast<std::size_t>(t)][j] + c;
            shifted.append(tr.plays[static_cast<std::size_t>(t)], RewardVector(std::move(f)));
        }
        CHECK(std::abs(swap_regret(shifted).swap_regret - swap_regret(tr).swap_regret) < 1e-9);
        CHECK(std::abs(ext_regret(shifted) - ext_regret(tr)) < 1e-9);
    }
}

TEST_CASE("brute-force equivalence across small sizes") {
    Rng rng(999);
    for (int n = 2; n <= 5; ++n) {
        for (int rep = 0; rep < 6; ++rep) {
            const auto t = 1 + static_cast<std::int64_t>(rng.uniform_int(8));
            const Transcript tr = oracles::random_transcript(n, t, rng);
            CHECK(std::abs(swap_regret(tr).swap_regret - oracles::swap_regret_exhaustive(tr)) < 1e-12);
        }
    }
}

TEST_CASE("bandit transcripts use point-mass plays") {
    Transcript tr;
    tr.n_actions = 3;
    tr.append_bandit(2, RewardVector({0.1, 0.2, 0.9}));
    tr.append_bandit(0, RewardVector({0.4, 0.2, 0.1}));
    REQUIRE(tr.bandit_actions.has_value());
    CHECK(tr.plays[0][2] == 1.0);
    CHECK(ext_regret(tr) == Catch::Approx((1.0 - 1.3) / 2.0).margin(1e-15));
}
