// Pilot run for the lower-bound regression threshold: measures the mean swap
// regret of MWU and TreeSwap against the oblivious tree schedule and freezes
// half of each mean, together with the generating configuration, into the
// JSON consumed by the acceptance suite.

#include <iostream>
#include <memory>
#include <optional>

#include <json.hpp>

#include "swapregret/adversaries.hpp"
#include "swapregret/io.hpp"
#include "swapregret/learners.hpp"
#include "swapregret/regret.hpp"
#include "swapregret/treeswap.hpp"

using namespace swapregret;

int main(int argc, char** argv) {
    const std::string out = argc > 1 ? argv[1] : "tests/data/lowerbound_threshold.json";
    const int n = 126;
    const std::int64_t horizon = 1024;
    const int seeds = 50;
    const std::uint64_t pilot_master = 1101;

    double mwu_total = 0.0, tree_total = 0.0;
    for (int seed = 0; seed < seeds; ++seed) {
        ObliviousTreeAdversary adversary(n, horizon,
                                         derive_seed(pilot_master, "lb-pilot", static_cast<std::uint64_t>(seed)));
        {
            Mwu learner(n, horizon);
            Transcript tr;
            tr.n_actions = n;
            for (std::int64_t t = 1; t <= horizon; ++t) {
                MixedAction x = learner.act();
                RewardVector f = adversary.reward_at(t);
                learner.update(f);
                tr.append(std::move(x), std::move(f));
            }
            mwu_total += swap_regret(tr).swap_regret;
        }
        {
            TreeSwap tree(TreeSwapParams{n, horizon, 4, 3}, [&]() { return std::make_unique<Mwu>(n, 4); });
            Transcript tr;
            tr.n_actions = n;
            std::optional<RewardVector> pending;
            for (std::int64_t t = 1; t <= horizon; ++t) {
                MixedAction x = tree.round(pending);
                RewardVector f = adversary.reward_at(t);
                pending = f;
                tr.append(std::move(x), std::move(f));
            }
            tree_total += swap_regret(tr).swap_regret;
        }
    }

    const double mwu_mean = mwu_total / seeds;
    const double tree_mean = tree_total / seeds;
    const nlohmann::json j{
        {"config",
         {{"adversary", "oblivious_tree"},
          {"n_actions", n},
          {"horizon", horizon},
          {"seeds", seeds},
          {"pilot_master_seed", pilot_master},
          {"learners",
           {{{"kind", "mwu"}, {"horizon", horizon}},
            {{"kind", "treeswap"}, {"branching", 4}, {"depth", 3},
             {"note", "depth raised to ceil(log_M T) = 5 at this horizon"}}}}}},
        {"n_actions", n},
        {"horizon", horizon},
        {"pilot_mean_mwu", mwu_mean},
        {"pilot_mean_treeswap", tree_mean},
        {"threshold_mwu", mwu_mean / 2.0},
        {"threshold_treeswap", tree_mean / 2.0}};
    write_json(out, j);
    std::cout << j.dump(2) << "\n";
    return 0;
}
