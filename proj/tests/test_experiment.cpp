#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "swapregret/experiment.hpp"
#include "swapregret/io.hpp"
#include "swapregret/regret.hpp"

using namespace swapregret;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("swapregret_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("constant adversary with MWU has zero swap regret") {
    ExperimentConfig cfg;
    cfg.mode = Mode::full_info;
    cfg.n_actions = 4;
    cfg.horizon = 32;
    cfg.learner.kind = "mwu";
    cfg.adversary.kind = "constant";
    cfg.adversary.value = 0.6;
    const SeedResult result = run_seed(cfg, 1);
    CHECK(result.summary.swap_regret == 0.0);
    CHECK(result.summary.ext_regret == 0.0);
}

TEST_CASE("reruns are byte-identical") {
    ExperimentConfig cfg;
    cfg.mode = Mode::full_info;
    cfg.n_actions = 6;
    cfg.horizon = 64;
    cfg.learner.kind = "treeswap";
    cfg.learner.branching = 4;
    cfg.learner.depth = 3;
    cfg.adversary.kind = "iid_uniform";
    cfg.seeds = {42};

    const fs::path dir_a = fresh_dir("det_a");
    const fs::path dir_b = fresh_dir("det_b");
    cfg.out_dir = dir_a.string();
    (void)run_experiment(cfg);
    cfg.out_dir = dir_b.string();
    (void)run_experiment(cfg);

    CHECK(slurp(dir_a / "seed42_transcript.csv") == slurp(dir_b / "seed42_transcript.csv"));
    CHECK(slurp(dir_a / "seed42_trajectory.csv") == slurp(dir_b / "seed42_trajectory.csv"));

    // summaries agree on everything except wall time
    nlohmann::json sa = read_json((dir_a / "seed42_summary.json").string());
    nlohmann::json sb = read_json((dir_b / "seed42_summary.json").string());
    sa.erase("wall_time_sec");
    sb.erase("wall_time_sec");
    CHECK(sa == sb);
}

TEST_CASE("emitted transcripts re-verify against the summary") {
    ExperimentConfig cfg;
    cfg.mode = Mode::full_info;
    cfg.n_actions = 5;
    cfg.horizon = 48;
    cfg.learner.kind = "treeswap";
    cfg.learner.branching = 4;
    cfg.adversary.kind = "iid_uniform";
    cfg.seeds = {7};
    const fs::path dir = fresh_dir("reverify");
    cfg.out_dir = dir.string();
    (void)run_experiment(cfg);

    const Transcript tr = read_transcript_csv_file((dir / "seed7_transcript.csv").string());
    const nlohmann::json summary = read_json((dir / "seed7_summary.json").string());
    CHECK(std::abs(ext_regret(tr) - summary.at("ext_regret").get<double>()) < 1e-9);
    CHECK(std::abs(swap_regret(tr).swap_regret - summary.at("swap_regret").get<double>()) < 1e-9);
}

TEST_CASE("bandit mode pads the horizon to a multiple of N") {
    ExperimentConfig cfg;
    cfg.mode = Mode::bandit;
    cfg.n_actions = 4;
    cfg.horizon = 30; // pads to 32
    cfg.learner.kind = "bandit_treeswap";
    cfg.learner.branching = 2;
    cfg.learner.depth = 3;
    cfg.adversary.kind = "iid_uniform";
    const SeedResult result = run_seed(cfg, 5);
    CHECK(result.summary.horizon == 32);
    CHECK(result.summary.padded_rounds == 2);
    CHECK(result.transcript.rounds() == 32);
    REQUIRE(result.transcript.bandit_actions.has_value());
    // padded rounds carry zero rewards
    for (int i = 0; i < 4; ++i) CHECK(result.transcript.rewards[31][i] == 0.0);
}

TEST_CASE("bandit mode rejects adaptive adversaries") {
    ExperimentConfig cfg;
    cfg.mode = Mode::bandit;
    cfg.n_actions = 4;
    cfg.horizon = 16;
    cfg.learner.kind = "bandit_treeswap";
    cfg.adversary.kind = "best_response_last";
    CHECK_THROWS_AS(run_seed(cfg, 1), std::invalid_argument);
}

TEST_CASE("self-play mode emits an equilibrium report") {
    ExperimentConfig cfg;
    cfg.mode = Mode::selfplay_comm;
    cfg.game.players = 2;
    cfg.game.actions = 3;
    cfg.eps = 0.4;
    cfg.cap_horizon = 64;
    cfg.seeds = {11};
    const fs::path dir = fresh_dir("selfplay");
    cfg.out_dir = dir.string();
    (void)run_experiment(cfg);

    const nlohmann::json eq = read_json((dir / "seed11_equilibrium.json").string());
    CHECK(eq.contains("support"));
    CHECK(eq.at("ce_gap").size() == 2);
    CHECK(eq.at("ledger").at("comm_bits").get<std::int64_t>() > 0);
    CHECK(fs::exists(dir / "seed11_transcript_p0.csv"));
    CHECK(fs::exists(dir / "seed11_transcript_p1.csv"));
}

TEST_CASE("lowerbound mode requires a lower-bound adversary") {
    ExperimentConfig cfg;
    cfg.mode = Mode::lowerbound;
    cfg.n_actions = 8;
    cfg.horizon = 16;
    cfg.adversary.kind = "constant";
    CHECK_THROWS_AS(run_seed(cfg, 1), std::invalid_argument);
}

TEST_CASE("staircase rewards are remapped onto the unit range") {
    ExperimentConfig cfg;
    cfg.mode = Mode::lowerbound;
    cfg.horizon = 32;
    cfg.n_actions = AdaptiveStaircaseAdversary::n_actions_for_horizon(32);
    cfg.learner.kind = "mwu";
    cfg.adversary.kind = "adaptive_staircase";
    const SeedResult result = run_seed(cfg, 9);
    CHECK(result.summary.rewards_remapped);
    for (const RewardVector& f : result.transcript.rewards) {
        for (int i = 0; i < f.size(); ++i) {
            CHECK(f[i] >= 0.0);
            CHECK(f[i] <= 1.0);
        }
    }
}

TEST_CASE("config json parsing") {
    const nlohmann::json j{{"mode", "bandit"},
                           {"n_actions", 8},
                           {"horizon", 128},
                           {"learner", {{"kind", "bandit_treeswap"}, {"branching", 4}, {"depth", 2}}},
                           {"adversary", {{"kind", "bernoulli"}, {"means", {0.9, 0.7, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3}}}},
                           {"seeds", {1, 2, 3}}};
    const ExperimentConfig cfg = config_from_json(j);
    CHECK(cfg.mode == Mode::bandit);
    CHECK(cfg.seeds.size() == 3);
    CHECK(cfg.adversary.means.size() == 8);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"mode", "nope"}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"horizon", -3}}), std::invalid_argument);
}

TEST_CASE("multi-seed runs aggregate and parallelize") {
    ExperimentConfig cfg;
    cfg.mode = Mode::full_info;
    cfg.n_actions = 4;
    cfg.horizon = 32;
    cfg.learner.kind = "mwu";
    cfg.adversary.kind = "iid_uniform";
    cfg.seeds = {1, 2, 3, 4};
    cfg.write_trajectory = false;

    const ExperimentReport sequential = run_experiment(cfg);
    cfg.threads = 4;
    const ExperimentReport parallel = run_experiment(cfg);
    REQUIRE(sequential.per_seed.size() == 4);
    CHECK(sequential.mean_swap_regret == parallel.mean_swap_regret);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(sequential.per_seed[i].swap_regret == parallel.per_seed[i].swap_regret);
}

TEST_CASE("bench produces a nonzero report") {
    const BenchReport report = run_bench(16, 64, 4, 1, 5);
    CHECK(report.base_sec > 0.0);
    CHECK(report.double_t_sec > 0.0);
    CHECK(report.ratio_t > 0.0);

    // degenerate single-round horizon still completes
    const BenchReport tiny = run_bench(4, 1, 2, 1, 0);
    CHECK(tiny.base_sec > 0.0);
}

TEST_CASE("bandit transcript CSV round trip") {
    Transcript tr;
    tr.n_actions = 3;
    tr.append_bandit(1, RewardVector({0.25, 0.75, 0.125}));
    tr.append_bandit(2, RewardVector({0.5, 0.0, 1.0}));
    std::stringstream buffer;
    write_transcript_csv(buffer, tr);
    const Transcript back = read_transcript_csv(buffer);
    REQUIRE(back.bandit_actions.has_value());
    CHECK(*back.bandit_actions == std::vector<int>{1, 2});
    for (std::int64_t t = 0; t < 2; ++t)
        for (int i = 0; i < 3; ++i) REQUIRE(back.rewards[static_cast<std::size_t>(t)][i] == tr.rewards[static_cast<std::size_t>(t)][i]);
    CHECK(back.plays[0][1] == 1.0);
}
