// Command-line experiment runner: compose (learner, adversary or game,
// horizon, seeds), execute, and emit regret trajectories, equilibrium
// reports, resource ledgers, and benchmark timings.
//
// Exit codes: 0 success, 2 validation error, 3 runtime error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "swapregret/experiment.hpp"
#include "swapregret/io.hpp"

using namespace swapregret;

namespace {

struct CliOverrides {
    std::optional<std::string> mode, learner_kind, adversary_kind, game_file, out_dir;
    std::optional<int> n_actions, branching, depth, players, actions, threads;
    std::optional<std::int64_t> horizon, cap_horizon;
    std::optional<double> eta, value, eps, delta, constant_c;
    std::vector<double> means;
    std::vector<std::uint64_t> seeds;
    std::optional<std::uint64_t> seed;
    bool l1_scaled = false;
    bool gamma_total_horizon = false;
    bool no_transcript = false;
    bool no_trajectory = false;
};

ExperimentConfig build_config(const std::string& config_path, const CliOverrides& ov) {
    nlohmann::json j = nlohmann::json::object();
    if (!config_path.empty()) j = read_json(config_path);
    ExperimentConfig cfg = config_from_json(j);
    if (ov.mode) cfg.mode = mode_from_string(*ov.mode);
    if (ov.n_actions) cfg.n_actions = *ov.n_actions;
    if (ov.horizon) cfg.horizon = *ov.horizon;
    if (ov.learner_kind) cfg.learner.kind = *ov.learner_kind;
    if (ov.branching) cfg.learner.branching = *ov.branching;
    if (ov.depth) cfg.learner.depth = *ov.depth;
    if (ov.eta) cfg.learner.eta = *ov.eta;
    if (ov.adversary_kind) cfg.adversary.kind = *ov.adversary_kind;
    if (ov.value) cfg.adversary.value = *ov.value;
    if (!ov.means.empty()) cfg.adversary.means = ov.means;
    if (ov.l1_scaled) cfg.adversary.l1_scaled = true;
    if (ov.game_file) cfg.game.file = *ov.game_file;
    if (ov.players) cfg.game.players = *ov.players;
    if (ov.actions) cfg.game.actions = *ov.actions;
    if (ov.eps) cfg.eps = *ov.eps;
    if (ov.delta) cfg.delta = *ov.delta;
    if (ov.constant_c) cfg.constant_c = *ov.constant_c;
    if (ov.cap_horizon) cfg.cap_horizon = *ov.cap_horizon;
    if (ov.gamma_total_horizon) cfg.gamma_uses_total_horizon = true;
    if (!ov.seeds.empty()) cfg.seeds = ov.seeds;
    if (ov.seed) cfg.seeds = {*ov.seed};
    if (ov.out_dir) cfg.out_dir = *ov.out_dir;
    if (ov.threads) cfg.threads = *ov.threads;
    if (ov.no_transcript) cfg.write_transcript = false;
    if (ov.no_trajectory) cfg.write_trajectory = false;
    return cfg;
}

void add_override_flags(CLI::App* cmd, CliOverrides& ov, std::string& config_path) {
    cmd->add_option("--config", config_path, "JSON config file (flags override it)");
    cmd->add_option("--mode", ov.mode, "full_info | bandit | selfplay_comm | selfplay_query | lowerbound");
    cmd->add_option("-n,--n-actions", ov.n_actions, "action count N");
    cmd->add_option("-T,--horizon", ov.horizon, "round count T");
    cmd->add_option("--learner", ov.learner_kind, "mwu | treeswap | bandit_treeswap");
    cmd->add_option("-M,--branching", ov.branching, "tree branching M");
    cmd->add_option("-d,--depth", ov.depth, "tree depth d");
    cmd->add_option("--eta", ov.eta, "inner learner step size (default sqrt(ln N / M))");
    cmd->add_option("--adversary", ov.adversary_kind,
                    "constant | iid_uniform | bernoulli | best_response_last | oblivious_tree | adaptive_staircase");
    cmd->add_option("--value", ov.value, "constant adversary level");
    cmd->add_option("--means", ov.means, "bernoulli adversary means");
    cmd->add_flag("--l1-scaled", ov.l1_scaled, "scale oblivious tree rewards to unit l1 norm");
    cmd->add_option("--game-file", ov.game_file, "game JSON for self-play modes");
    cmd->add_option("--players", ov.players, "random game: player count");
    cmd->add_option("--actions", ov.actions, "random game: actions per player");
    cmd->add_option("--eps", ov.eps, "target equilibrium accuracy");
    cmd->add_option("--delta", ov.delta, "failure probability");
    cmd->add_option("--constant-c", ov.constant_c, "protocol constant C");
    cmd->add_option("--cap-horizon", ov.cap_horizon, "cap on the protocol horizon T = M^d");
    cmd->add_flag("--gamma-total-horizon", ov.gamma_total_horizon,
                  "bandit exploration bias scales with T instead of M");
    cmd->add_option("--seed", ov.seed, "single master seed");
    cmd->add_option("--seeds", ov.seeds, "list of master seeds");
    cmd->add_option("--out-dir", ov.out_dir, "output directory for per-seed files");
    cmd->add_option("--threads", ov.threads, "seed worker pool size");
    cmd->add_flag("--no-transcript", ov.no_transcript, "skip transcript CSVs");
    cmd->add_flag("--no-trajectory", ov.no_trajectory, "skip trajectory CSVs");
}

int cmd_run(const std::string& config_path, const CliOverrides& ov) {
    const ExperimentConfig cfg = build_config(config_path, ov);
    const ExperimentReport report = run_experiment(cfg);
    std::cout << report_to_json(report).dump(2) << "\n";
    return 0;
}

int cmd_bench(int n, std::int64_t horizon, int branching, int trials, std::uint64_t seed,
              const std::string& out) {
    const BenchReport report = run_bench(n, horizon, branching, trials, seed);
    const nlohmann::json j{{"n_actions", n},
                           {"horizon", horizon},
                           {"branching", branching},
                           {"trials", trials},
                           {"base_sec", report.base_sec},
                           {"double_horizon_sec", report.double_t_sec},
                           {"double_actions_sec", report.double_n_sec},
                           {"ratio_horizon", report.ratio_t},
                           {"ratio_actions", report.ratio_n}};
    std::cout << j.dump(2) << "\n";
    if (!out.empty()) write_json(out, j);
    return 0;
}

int cmd_verify(const std::string& game_path, const std::string& eq_path) {
    const NormalFormGame game = load_game(game_path);
    const nlohmann::json ej = read_json(eq_path);
    const CorrelatedDistribution mu = equilibrium_from_json(ej, game.players(), game.actions());
    const auto ce = ce_gap(game, mu);
    const auto cce = cce_gap(game, mu);
    for (int j = 0; j < game.players(); ++j)
        std::cout << "player " << j << ": ce_gap " << format_double(ce[static_cast<std::size_t>(j)])
                  << "  cce_gap " << format_double(cce[static_cast<std::size_t>(j)]) << "\n";
    const double worst = *std::max_element(ce.begin(), ce.end());
    std::cout << "max_ce_gap " << format_double(worst) << "\n";
    return 0;
}

int cmd_dump_adversary(const std::string& kind, int n, std::int64_t horizon, std::uint64_t seed,
                       bool l1_scaled, const std::string& out_path) {
    ExperimentConfig cfg;
    cfg.n_actions = n;
    cfg.horizon = horizon;
    cfg.adversary.kind = kind;
    cfg.adversary.l1_scaled = l1_scaled;
    if (kind == "adaptive_staircase" || kind == "best_response_last")
        throw std::invalid_argument("dump-adversary requires an oblivious schedule");
    std::unique_ptr<Adversary> adversary = make_adversary(cfg, seed);

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open " + out_path);
        out = &file;
    }
    const MixedAction probe = MixedAction::uniform(n);
    *out << "t,action,reward\n";
    for (std::int64_t t = 1; t <= horizon; ++t) {
        const RewardVector u = adversary->reward(t, probe);
        for (int a = 0; a < n; ++a)
            if (u[a] != 0.0) *out << t << ',' << a << ',' << format_double(u[a]) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"swap-regret learners, reductions, and equilibrium protocols"};
    app.require_subcommand(1);

    std::string config_path;
    CliOverrides ov;
    CLI::App* run = app.add_subcommand("run", "run an experiment over one or more seeds");
    add_override_flags(run, ov, config_path);

    int bench_n = 1024, bench_m = 8, bench_trials = 5;
    std::int64_t bench_t = 4096;
    std::uint64_t bench_seed = 0;
    std::string bench_out;
    CLI::App* bench = app.add_subcommand("bench", "time the tree learner loop at (T, 2T) and (N, 2N)");
    bench->add_option("-n,--n-actions", bench_n, "action count");
    bench->add_option("-T,--horizon", bench_t, "round count");
    bench->add_option("-M,--branching", bench_m, "tree branching");
    bench->add_option("--trials", bench_trials, "trials per point (median reported)");
    bench->add_option("--seed", bench_seed, "seed");
    bench->add_option("--out", bench_out, "also write the report JSON here");

    std::string verify_game, verify_eq;
    CLI::App* verify = app.add_subcommand("verify", "recompute equilibrium gaps for a stored distribution");
    verify->add_option("--game", verify_game, "game JSON")->required();
    verify->add_option("--equilibrium", verify_eq, "equilibrium JSON")->required();

    std::string dump_kind = "oblivious_tree", dump_out;
    int dump_n = 30;
    std::int64_t dump_t = 64;
    std::uint64_t dump_seed = 0;
    bool dump_l1 = false;
    CLI::App* dump = app.add_subcommand("dump-adversary", "write an oblivious schedule as CSV (nonzero entries)");
    dump->add_option("--kind", dump_kind, "constant | iid_uniform | bernoulli | oblivious_tree");
    dump->add_option("-n,--n-actions", dump_n, "action count");
    dump->add_option("-T,--horizon", dump_t, "round count");
    dump->add_option("--seed", dump_seed, "seed");
    dump->add_flag("--l1-scaled", dump_l1, "scale oblivious tree rewards to unit l1 norm");
    dump->add_option("--out", dump_out, "output file (stdout when absent)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, ov);
        if (bench->parsed()) return cmd_bench(bench_n, bench_t, bench_m, bench_trials, bench_seed, bench_out);
        if (verify->parsed()) return cmd_verify(verify_game, verify_eq);
        if (dump->parsed()) return cmd_dump_adversary(dump_kind, dump_n, dump_t, dump_seed, dump_l1, dump_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
