#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>

#include "oracles.hpp"
#include "swapregret/adversaries.hpp"
#include "swapregret/regret.hpp"
#include "swapregret/treeswap.hpp"

using namespace swapregret;

namespace {

struct Run {
    Transcript transcript;
    BoundRecorder recorder;
    TreeSwapParams params;
};

Run run_treeswap(TreeSwapParams params, Adversary& adversary, double inner_eta = 0.0) {
    Run run;
    run.params = params;
    const int n = params.n_actions;
    const int m = params.branching;
    TreeSwap tree(params, [n, m, inner_eta]() { return std::make_unique<Mwu>(n, m, inner_eta); },
                  &run.recorder);
    run.transcript.n_actions = n;
    std::optional<RewardVector> pending;
    for (std::int64_t t = 1; t <= params.horizon; ++t) {
        const MixedAction x = tree.round(pending);
        const RewardVector f = adversary.reward(t, x);
        run.transcript.append(x, f);
        pending = f;
    }
    return run;
}

} // namespace

TEST_CASE("depth-1 TreeSwap collapses to the inner learner") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int n = 5;
        const std::int64_t horizon = 12;
        Rng rng(derive_seed(42, "collapse", seed));
        std::vector<RewardVector> stream;
        for (std::int64_t t = 0; t < horizon; ++t) stream.push_back(oracles::random_reward(n, rng));

        TreeSwapParams params{n, horizon, static_cast<int>(horizon), 1};
        TreeSwap tree(params, [&]() { return std::make_unique<Mwu>(n, horizon); });
        Mwu reference(n, horizon);

        std::optional<RewardVector> pending;
        for (std::int64_t t = 0; t < horizon; ++t) {
            const MixedAction got = tree.round(pending);
            const MixedAction want = reference.act();
            for (int i = 0; i < n; ++i) REQUIRE(std::abs(got[i] - want[i]) < 1e-12);
            reference.update(stream[static_cast<std::size_t>(t)]);
            pending = stream[static_cast<std::size_t>(t)];
        }
    }
}

TEST_CASE("hand trace of the M=2, d=2, T=4 cadence") {
    IidUniformAdversary adversary(3, 7);
    Run run = run_treeswap(TreeSwapParams{3, 4, 2, 2}, adversary);

    CHECK(run.recorder.created_at_level(1) == 1);
    CHECK(run.recorder.created_at_level(2) == 2); // replaced at round 3
    CHECK(run.recorder.updates_at_level(1) == 1);
    CHECK(run.recorder.updates_at_level(2) == 2);
    CHECK(run.recorder.actions_at_level(1) == 2);
    CHECK(run.recorder.actions_at_level(2) == 4);

    // level-1 instance updates once, with the average of f^1 and f^2
    for (const auto& inst : run.recorder.instances()) {
        if (inst.level != 1) continue;
        REQUIRE(inst.fed_averages.size() == 1);
        for (int i = 0; i < 3; ++i) {
            const double expect = 0.5 * (run.transcript.rewards[0][i] + run.transcript.rewards[1][i]);
            CHECK(inst.fed_averages[0][i] == Catch::Approx(expect).margin(1e-15));
        }
    }
}

TEST_CASE("constant rewards make every swap gainless") {
    ConstantAdversary adversary(RewardVector::constant(4, 0.7));
    Run run = run_treeswap(TreeSwapParams{4, 9, 3, 2}, adversary);
    CHECK(swap_regret(run.transcript).swap_regret == 0.0);
}

TEST_CASE("instance accounting matches the closed-form prefix counts") {
    struct Case {
        int m, d;
        std::int64_t horizon;
    };
    for (const Case c : {Case{2, 3, 8}, Case{3, 2, 9}, Case{3, 3, 20}}) {
        IidUniformAdversary adversary(4, 11);
        Run run = run_treeswap(TreeSwapParams{4, c.horizon, c.m, c.d}, adversary);
        for (int h = 1; h <= c.d; ++h) {
            const std::int64_t parent_block = pow_saturated(c.m, c.d - h + 1);
            const std::int64_t child_block = pow_saturated(c.m, c.d - h);
            const std::int64_t created = (c.horizon + parent_block - 1) / parent_block;
            const std::int64_t acts = (c.horizon + child_block - 1) / child_block;
            CHECK(run.recorder.created_at_level(h) == created);
            CHECK(run.recorder.actions_at_level(h) == acts);
            CHECK(run.recorder.updates_at_level(h) == acts - created);
        }
    }
}

TEST_CASE("per-run swap regret bound holds") {
    SECTION("constant rewards") {
        ConstantAdversary adversary(RewardVector::constant(4, 0.3));
        Run run = run_treeswap(TreeSwapParams{4, 16, 4, 2}, adversary);
        const BoundCheck check = verify_treeswap_bound(run.params, run.recorder, run.transcript);
        CHECK(check.lhs == 0.0);
        CHECK(check.lhs <= check.rhs + 1e-9);
    }
    SECTION("i.i.d. uniform rewards") {
        IidUniformAdversary adversary(8, 5);
        Run run = run_treeswap(TreeSwapParams{8, 64, 4, 3}, adversary);
        const BoundCheck check = verify_treeswap_bound(run.params, run.recorder, run.transcript);
        CHECK(check.lhs <= check.rhs + 1e-9);
    }
    SECTION("oblivious tree adversary") {
        ObliviousTreeAdversary adversary(32, 64, 19);
        Run run = run_treeswap(TreeSwapParams{32, 64, 4, 3}, adversary);
        const BoundCheck check = verify_treeswap_bound(run.params, run.recorder, run.transcript);
        CHECK(check.lhs <= check.rhs + 1e-9);
    }
}

TEST_CASE("verify requires instrumentation") {
    BoundRecorder empty;
    Transcript tr;
    tr.n_actions = 2;
    tr.append(MixedAction::uniform(2), RewardVector({0.5, 0.5}));
    CHECK_THROWS_WITH(verify_treeswap_bound(TreeSwapParams{2, 1, 2, 1}, empty, tr),
                      "instrumentation disabled");
}

TEST_CASE("TreeSwap horizon handling") {
    TreeSwapParams params{3, 4, 2, 2};
    TreeSwap tree(params, []() { return std::make_unique<Mwu>(3, 2); });
    std::optional<RewardVector> pending;
    for (int t = 1; t <= 4; ++t) {
        (void)tree.round(pending);
        pending = RewardVector::constant(3, 0.5);
    }
    CHECK_THROWS_WITH(tree.round(pending), "horizon exhausted");

    // missing reward after round 1
    TreeSwap tree2(params, []() { return std::make_unique<Mwu>(3, 2); });
    (void)tree2.round(std::nullopt);
    CHECK_THROWS_AS(tree2.round(std::nullopt), std::invalid_argument);

    // T beyond M^d grows the depth
    TreeSwap grown(TreeSwapParams{3, 100, 4, 2}, []() { return std::make_unique<Mwu>(3, 4); });
    CHECK(grown.depth_raised());
    CHECK(grown.params().depth == 4); // 4^3 = 64 < 100 <= 4^4
}

TEST_CASE("TreeSwap outputs remain on the simplex over long runs") {
    IidUniformAdversary adversary(6, 23);
    TreeSwapParams params{6, 2048, 4, 6};
    TreeSwap tree(params, []() { return std::make_unique<Mwu>(6, 4); });
    std::optional<RewardVector> pending;
    for (std::int64_t t = 1; t <= params.horizon; ++t) {
        const MixedAction x = tree.round(pending); // constructor validates the simplex
        double sum = 0.0;
        for (int i = 0; i < 6; ++i) sum += x[i];
        REQUIRE(std::abs(sum - 1.0) < 1e-12);
        pending = adversary.reward(t, x);
    }
}

TEST_CASE("parameter helper") {
    const TreeSwapParams p = choose_treeswap_params(64, 0.5);
    CHECK(p.branching == 17); // ceil(ln 64 / 0.25)
    CHECK(p.depth == 2);
    CHECK(p.horizon == 17 * 17);
    CHECK(choose_treeswap_params(2, 0.9).branching == 2); // floor of 2 enforced
    CHECK_THROWS_AS(choose_treeswap_params(4, 1.5), std::invalid_argument);
}
