#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "swapregret/adversaries.hpp"
#include "swapregret/games.hpp"
#include "swapregret/io.hpp"
#include "swapregret/learners.hpp"
#include "swapregret/regret.hpp"
#include "swapregret/rng.hpp"
#include "swapregret/treeswap.hpp"
#include "swapregret/types.hpp"

namespace swapregret {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

enum class Mode { full_info, bandit, selfplay_comm, selfplay_query, lowerbound };

inline Mode mode_from_string(const std::string& s) {
    if (s == "full_info") return Mode::full_info;
    if (s == "bandit") return Mode::bandit;
    if (s == "selfplay_comm") return Mode::selfplay_comm;
    if (s == "selfplay_query") return Mode::selfplay_query;
    if (s == "lowerbound") return Mode::lowerbound;
    throw std::invalid_argument("unknown mode: " + s);
}

inline std::string mode_to_string(Mode m) {
    switch (m) {
        case Mode::full_info: return "full_info";
        case Mode::bandit: return "bandit";
        case Mode::selfplay_comm: return "selfplay_comm";
        case Mode::selfplay_query: return "selfplay_query";
        case Mode::lowerbound: return "lowerbound";
    }
    return "?";
}

struct LearnerSpec {
    std::string kind = "mwu"; // mwu | treeswap | bandit_treeswap
    int branching = 0;        // M; 0 means "derive"
    int depth = 0;            // d; 0 means "derive from horizon"
    double eta = 0.0;         // 0 means the learner's default
};

struct AdversarySpec {
    std::string kind = "iid_uniform"; // constant | iid_uniform | bernoulli |
                                      // best_response_last | oblivious_tree |
                                      // adaptive_staircase
    double value = 0.5;               // constant level
    bool l1_scaled = false;           // oblivious_tree variant
    std::vector<double> means;        // bernoulli
};

struct GameSpec {
    std::string file; // JSON game; empty means random
    int players = 2;
    int actions = 2;
};

struct ExperimentConfig {
    Mode mode = Mode::full_info;
    int n_actions = 2;
    std::int64_t horizon = 16;
    LearnerSpec learner;
    AdversarySpec adversary;
    GameSpec game;
    double eps = 0.3;
    double delta = 0.1;
    double constant_c = 4.0;
    std::optional<std::int64_t> cap_horizon;
    bool gamma_uses_total_horizon = false;
    std::vector<std::uint64_t> seeds{0};
    std::string out_dir;
    int threads = 1;
    bool write_transcript = true;
    bool write_trajectory = true;
};

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.mode = mode_from_string(j.value("mode", "full_info"));
    c.n_actions = j.value("n_actions", 2);
    c.horizon = j.value("horizon", std::int64_t{16});
    if (j.contains("learner")) {
        const auto& l = j.at("learner");
        c.learner.kind = l.value("kind", "mwu");
        c.learner.branching = l.value("branching", 0);
        c.learner.depth = l.value("depth", 0);
        c.learner.eta = l.value("eta", 0.0);
    }
    if (j.contains("adversary")) {
        const auto& a = j.at("adversary");
        c.adversary.kind = a.value("kind", "iid_uniform");
        c.adversary.value = a.value("value", 0.5);
        c.adversary.l1_scaled = a.value("l1_scaled", false);
        if (a.contains("means")) c.adversary.means = a.at("means").get<std::vector<double>>();
    }
    if (j.contains("game")) {
        const auto& g = j.at("game");
        c.game.file = g.value("file", "");
        c.game.players = g.value("players", 2);
        c.game.actions = g.value("actions", 2);
    }
    c.eps = j.value("eps", 0.3);
    c.delta = j.value("delta", 0.1);
    c.constant_c = j.value("constant_c", 4.0);
    if (j.contains("cap_horizon")) c.cap_horizon = j.at("cap_horizon").get<std::int64_t>();
    c.gamma_uses_total_horizon = j.value("gamma_uses_total_horizon", false);
    if (j.contains("seeds")) {
        c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    } else if (j.contains("seed")) {
        c.seeds = {j.at("seed").get<std::uint64_t>()};
    }
    c.out_dir = j.value("out_dir", "");
    c.threads = j.value("threads", 1);
    c.write_transcript = j.value("write_transcript", true);
    c.write_trajectory = j.value("write_trajectory", true);
    if (c.seeds.empty()) throw std::invalid_argument("config: need at least one seed");
    if (c.horizon < 1) throw std::invalid_argument("config: horizon must be positive");
    if (c.n_actions < 1) throw std::invalid_argument("config: n_actions must be positive");
    return c;
}

// ---------------------------------------------------------------------------
// Per-seed results
// ---------------------------------------------------------------------------

struct GainEntry {
    int action = 0;
    int target = 0;
    double gain = 0.0;
};

struct RunSummary {
    Mode mode = Mode::full_info;
    std::uint64_t seed = 0;
    int n_actions = 0;
    std::int64_t horizon = 0;
    std::int64_t padded_rounds = 0;
    double ext_regret = 0.0;
    double swap_regret = 0.0;
    std::vector<GainEntry> top_gains;
    ResourceLedger ledger;
    std::vector<double> player_swap_regret; // self-play modes
    std::vector<double> gaps;               // self-play modes: ce_gap per player
    bool rewards_remapped = false;          // [-1,1] schedules remapped onto [0,1]
    double wall_time_sec = 0.0;
    std::vector<std::string> warnings;
};

inline nlohmann::json summary_to_json(const RunSummary& s) {
    nlohmann::json j;
    j["mode"] = mode_to_string(s.mode);
    j["seed"] = s.seed;
    j["n_actions"] = s.n_actions;
    j["horizon"] = s.horizon;
    if (s.padded_rounds > 0) j["padded_rounds"] = s.padded_rounds;
    j["ext_regret"] = s.ext_regret;
    j["swap_regret"] = s.swap_regret;
    nlohmann::json gains = nlohmann::json::array();
    for (const auto& g : s.top_gains)
        gains.push_back({{"action", g.action}, {"target", g.target}, {"gain", g.gain}});
    j["per_action_gain_topk"] = gains;
    j["ledger"] = {{"queries", s.ledger.queries}, {"comm_bits", s.ledger.comm_bits}};
    if (!s.player_swap_regret.empty()) j["player_swap_regret"] = s.player_swap_regret;
    if (!s.gaps.empty()) j["ce_gap"] = s.gaps;
    if (s.rewards_remapped) j["rewards_remapped"] = true;
    j["wall_time_sec"] = s.wall_time_sec;
    if (!s.warnings.empty()) j["warnings"] = s.warnings;
    return j;
}

struct SeedResult {
    RunSummary summary;
    Transcript transcript;                       // primary transcript (player 0 in self-play)
    std::vector<Transcript> player_transcripts;  // self-play modes
    std::vector<std::array<double, 3>> trajectory; // (t, ext, swap) prefix samples
    CorrelatedDistribution distribution;         // self-play modes
};

// ---------------------------------------------------------------------------
// Construction helpers
// ---------------------------------------------------------------------------

inline std::unique_ptr<Adversary> make_adversary(const ExperimentConfig& cfg, std::uint64_t seed) {
    const auto& spec = cfg.adversary;
    const std::uint64_t sub = derive_seed(seed, "adversary");
    if (spec.kind == "constant")
        return std::make_unique<ConstantAdversary>(RewardVector::constant(cfg.n_actions, spec.value));
    if (spec.kind == "iid_uniform") return std::make_unique<IidUniformAdversary>(cfg.n_actions, sub);
    if (spec.kind == "bernoulli") {
        if (static_cast<int>(spec.means.size()) != cfg.n_actions)
            throw std::invalid_argument("config: bernoulli means must have n_actions entries");
        return std::make_unique<BernoulliAdversary>(spec.means, sub);
    }
    if (spec.kind == "best_response_last") return std::make_unique<BestResponseLastAdversary>(cfg.n_actions);
    if (spec.kind == "oblivious_tree")
        return std::make_unique<ObliviousTreeAdversary>(cfg.n_actions, cfg.horizon, sub, spec.l1_scaled);
    if (spec.kind == "adaptive_staircase")
        return std::make_unique<AdaptiveStaircaseAdversary>(cfg.n_actions, cfg.horizon, sub);
    throw std::invalid_argument("unknown adversary: " + spec.kind);
}

// Effective (M, d) for a tree learner over the configured horizon.
inline TreeSwapParams effective_tree_params(const ExperimentConfig& cfg) {
    TreeSwapParams p;
    p.n_actions = cfg.n_actions;
    p.horizon = cfg.horizon;
    p.branching = cfg.learner.branching;
    p.depth = cfg.learner.depth;
    if (p.branching <= 0) {
        const TreeSwapParams derived = choose_treeswap_params(cfg.n_actions, cfg.eps);
        p.branching = derived.branching;
        if (p.depth <= 0) p.depth = derived.depth;
    }
    if (p.depth <= 0) {
        p.depth = 1;
        while (pow_saturated(p.branching, p.depth) < cfg.horizon) ++p.depth;
    }
    return p;
}

// ---------------------------------------------------------------------------
// Mode drivers
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<GainEntry> top_gains(const SwapReport& report, int k) {
    std::vector<GainEntry> entries;
    for (int i = 0; i < static_cast<int>(report.per_action_gain.size()); ++i)
        entries.push_back({i, report.best_swap[static_cast<std::size_t>(i)],
                           report.per_action_gain[static_cast<std::size_t>(i)]});
    std::stable_sort(entries.begin(), entries.end(),
                     [](const GainEntry& a, const GainEntry& b) { return a.gain > b.gain; });
    entries.resize(static_cast<std::size_t>(std::min<int>(k, static_cast<int>(entries.size()))));
    return entries;
}

// Prefix regrets every ceil(T/256) rounds, exact from the streaming matrix.
inline std::vector<std::array<double, 3>> trajectory_of(const Transcript& tr) {
    std::vector<std::array<double, 3>> rows;
    RegretAccumulator acc(tr.n_actions);
    const std::int64_t stride = std::max<std::int64_t>(1, (tr.rounds() + 255) / 256);
    for (std::int64_t t = 0; t < tr.rounds(); ++t) {
        acc.add_round(tr.plays[static_cast<std::size_t>(t)], tr.rewards[static_cast<std::size_t>(t)]);
        if ((t + 1) % stride == 0 || t + 1 == tr.rounds())
            rows.push_back({static_cast<double>(t + 1), acc.ext_regret(), acc.swap_report().swap_regret});
    }
    return rows;
}

inline void fill_regrets(SeedResult& result, bool with_trajectory) {
    const Transcript& tr = result.transcript;
    RegretAccumulator acc(tr.n_actions);
    const std::int64_t stride = std::max<std::int64_t>(1, (tr.rounds() + 255) / 256);
    for (std::int64_t t = 0; t < tr.rounds(); ++t) {
        acc.add_round(tr.plays[static_cast<std::size_t>(t)], tr.rewards[static_cast<std::size_t>(t)]);
        if (with_trajectory && ((t + 1) % stride == 0 || t + 1 == tr.rounds()))
            result.trajectory.push_back(
                {static_cast<double>(t + 1), acc.ext_regret(), acc.swap_report().swap_regret});
    }
    const SwapReport report = acc.swap_report();
    result.summary.ext_regret = acc.ext_regret();
    result.summary.swap_regret = report.swap_regret;
    result.summary.top_gains = top_gains(report, 8);
}

inline SeedResult run_full_info(const ExperimentConfig& cfg, std::uint64_t seed) {
    SeedResult result;
    result.summary.mode = cfg.mode;
    result.summary.seed = seed;
    result.summary.n_actions = cfg.n_actions;
    result.summary.horizon = cfg.horizon;
    result.transcript.n_actions = cfg.n_actions;

    std::unique_ptr<Adversary> adversary = make_adversary(cfg, seed);
    const bool remap = cfg.adversary.kind == "adaptive_staircase";
    result.summary.rewards_remapped = remap;

    std::unique_ptr<Mwu> flat;
    std::unique_ptr<TreeSwap> tree;
    if (cfg.learner.kind == "mwu") {
        flat = std::make_unique<Mwu>(cfg.n_actions, cfg.horizon, cfg.learner.eta);
    } else if (cfg.learner.kind == "treeswap") {
        const TreeSwapParams p = effective_tree_params(cfg);
        const int n = cfg.n_actions;
        const int m = p.branching;
        const double eta = cfg.learner.eta;
        tree = std::make_unique<TreeSwap>(p, [n, m, eta]() { return std::make_unique<Mwu>(n, m, eta); });
        if (tree->depth_raised())
            result.summary.warnings.push_back("depth raised to cover the horizon");
        if (tree->short_horizon())
            result.summary.warnings.push_back("horizon below M^(d-1); weaker guarantee");
    } else {
        throw std::invalid_argument("full_info learner must be mwu or treeswap");
    }

    std::optional<RewardVector> pending;
    for (std::int64_t t = 1; t <= cfg.horizon; ++t) {
        MixedAction x = tree ? tree->round(pending) : flat->act();
        RewardVector raw = adversary->reward(t, x);
        RewardVector unit = remap ? raw.remapped_to_unit() : raw;
        if (!tree) flat->update(unit);
        pending = unit;
        result.transcript.append(std::move(x), std::move(unit));
    }
    fill_regrets(result, cfg.write_trajectory);
    return result;
}

inline SeedResult run_bandit(const ExperimentConfig& cfg, std::uint64_t seed) {
    if (cfg.learner.kind != "bandit_treeswap")
        throw std::invalid_argument("bandit learner must be bandit_treeswap");
    if (cfg.adversary.kind == "adaptive_staircase" || cfg.adversary.kind == "best_response_last")
        throw std::invalid_argument("bandit runs accept oblivious reward schedules only");

    SeedResult result;
    result.summary.mode = cfg.mode;
    result.summary.seed = seed;
    result.summary.n_actions = cfg.n_actions;
    result.transcript.n_actions = cfg.n_actions;

    // Pad the horizon to a multiple of N; padded rounds feed reward zero.
    const std::int64_t padded =
        (cfg.horizon + cfg.n_actions - 1) / cfg.n_actions * cfg.n_actions;
    result.summary.horizon = padded;
    result.summary.padded_rounds = padded - cfg.horizon;

    ExperimentConfig padded_cfg = cfg;
    padded_cfg.horizon = padded;
    std::unique_ptr<Adversary> adversary = make_adversary(padded_cfg, seed);

    BanditTreeSwapParams params;
    params.n_actions = cfg.n_actions;
    params.horizon = padded;
    params.branching = cfg.learner.branching > 0 ? cfg.learner.branching : 2;
    params.depth = cfg.learner.depth > 0 ? cfg.learner.depth : 1;
    params.gamma_uses_total_horizon = cfg.gamma_uses_total_horizon;
    Rng rng(derive_seed(seed, "bandit_learner"));
    BanditTreeSwap tree(params, &rng);

    std::optional<double> pending;
    const MixedAction probe = MixedAction::uniform(cfg.n_actions);
    for (std::int64_t t = 1; t <= padded; ++t) {
        const int action = tree.round(pending);
        const RewardVector u = t <= cfg.horizon ? adversary->reward(t, probe)
                                                : RewardVector::constant(cfg.n_actions, 0.0);
        pending = u[action];
        result.transcript.append_bandit(action, u);
    }
    tree.finish(pending);
    fill_regrets(result, cfg.write_trajectory);
    return result;
}

inline SeedResult run_selfplay(const ExperimentConfig& cfg, std::uint64_t seed) {
    SeedResult result;
    result.summary.mode = cfg.mode;
    result.summary.seed = seed;

    NormalFormGame game = cfg.game.file.empty()
                              ? [&] {
                                    Rng rng(derive_seed(seed, "game"));
                                    return NormalFormGame::random(cfg.game.players, cfg.game.actions, rng);
                                }()
                              : load_game(cfg.game.file);
    result.summary.n_actions = game.actions();

    CeOptions opt;
    opt.eps = cfg.eps;
    opt.delta = cfg.delta;
    opt.constant_c = cfg.constant_c;
    opt.cap_horizon = cfg.cap_horizon;

    SelfPlayResult sp;
    if (cfg.mode == Mode::selfplay_comm) {
        sp = comm_ce(game, opt, seed);
    } else {
        PayoffOracle oracle(game);
        sp = query_ce(oracle, opt, seed);
    }
    result.summary.horizon = sp.params.horizon;
    result.summary.ledger = sp.ledger;
    result.summary.gaps = ce_gap(game, sp.distribution);
    for (const Transcript& tr : sp.transcripts)
        result.summary.player_swap_regret.push_back(swap_regret(tr).swap_regret);
    result.summary.swap_regret =
        *std::max_element(result.summary.player_swap_regret.begin(), result.summary.player_swap_regret.end());
    result.summary.ext_regret = ext_regret(sp.transcripts[0]);
    result.summary.top_gains = top_gains(swap_regret(sp.transcripts[0]), 8);
    result.player_transcripts = sp.transcripts;
    result.transcript = sp.transcripts[0];
    result.distribution = sp.distribution;
    if (cfg.write_trajectory) result.trajectory = trajectory_of(result.transcript);
    if (sp.horizon_capped)
        result.summary.warnings.push_back("horizon capped; guarantee weakened to the effective depth");
    return result;
}

} // namespace detail

inline SeedResult run_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
    const auto started = std::chrono::steady_clock::now();
    if (cfg.mode == Mode::lowerbound && cfg.adversary.kind != "oblivious_tree" &&
        cfg.adversary.kind != "adaptive_staircase")
        throw std::invalid_argument("lowerbound mode requires a lower-bound adversary");
    SeedResult result;
    switch (cfg.mode) {
        case Mode::full_info:
        case Mode::lowerbound:
            result = detail::run_full_info(cfg, seed);
            break;
        case Mode::bandit:
            result = detail::run_bandit(cfg, seed);
            break;
        case Mode::selfplay_comm:
        case Mode::selfplay_query:
            result = detail::run_selfplay(cfg, seed);
            break;
    }
    result.summary.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

// ---------------------------------------------------------------------------
// Multi-seed driver with per-seed files and a single merged report
// ---------------------------------------------------------------------------

struct ExperimentReport {
    std::vector<RunSummary> per_seed;
    double mean_swap_regret = 0.0;
    double stddev_swap_regret = 0.0;
    double mean_ext_regret = 0.0;
};

inline nlohmann::json report_to_json(const ExperimentReport& r) {
    nlohmann::json per_seed = nlohmann::json::array();
    for (const auto& s : r.per_seed) per_seed.push_back(summary_to_json(s));
    return nlohmann::json{{"per_seed", per_seed},
                          {"mean_swap_regret", r.mean_swap_regret},
                          {"stddev_swap_regret", r.stddev_swap_regret},
                          {"mean_ext_regret", r.mean_ext_regret},
                          {"seeds", r.per_seed.size()}};
}

namespace detail {

inline void write_trajectory_csv(const std::string& path, const std::vector<std::array<double, 3>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "t,ext_regret,swap_regret\n";
    for (const auto& row : rows)
        out << static_cast<std::int64_t>(row[0]) << ',' << format_double(row[1]) << ','
            << format_double(row[2]) << "\n";
}

inline void write_seed_outputs(const ExperimentConfig& cfg, std::uint64_t seed, const SeedResult& result) {
    if (cfg.out_dir.empty()) return;
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const std::string stem = cfg.out_dir + "/seed" + std::to_string(seed);
    if (cfg.write_transcript) {
        if (result.player_transcripts.size() > 1) {
            for (std::size_t i = 0; i < result.player_transcripts.size(); ++i)
                write_transcript_csv(stem + "_transcript_p" + std::to_string(i) + ".csv",
                                     result.player_transcripts[i]);
        } else {
            write_transcript_csv(stem + "_transcript.csv", result.transcript);
        }
    }
    if (!result.trajectory.empty()) write_trajectory_csv(stem + "_trajectory.csv", result.trajectory);
    if (cfg.mode == Mode::selfplay_comm || cfg.mode == Mode::selfplay_query) {
        write_json(stem + "_equilibrium.json",
                   equilibrium_to_json(result.distribution, result.summary.gaps, result.summary.ledger));
    }
    write_json(stem + "_summary.json", summary_to_json(result.summary));
}

} // namespace detail

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    ExperimentReport report;
    report.per_seed.resize(cfg.seeds.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const int workers = std::max(1, std::min<int>(cfg.threads, static_cast<int>(cfg.seeds.size())));

    auto worker = [&] {
        while (true) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= cfg.seeds.size()) return;
            try {
                SeedResult result = run_seed(cfg, cfg.seeds[idx]);
                detail::write_seed_outputs(cfg, cfg.seeds[idx], result);
                report.per_seed[idx] = std::move(result.summary);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    double sum = 0.0, sum_sq = 0.0, ext_sum = 0.0;
    for (const auto& s : report.per_seed) {
        sum += s.swap_regret;
        sum_sq += s.swap_regret * s.swap_regret;
        ext_sum += s.ext_regret;
    }
    const double k = static_cast<double>(report.per_seed.size());
    report.mean_swap_regret = sum / k;
    report.mean_ext_regret = ext_sum / k;
    report.stddev_swap_regret = std::sqrt(std::max(0.0, sum_sq / k - report.mean_swap_regret * report.mean_swap_regret));

    if (!cfg.out_dir.empty()) write_json(cfg.out_dir + "/summary.json", report_to_json(report));
    return report;
}

// ---------------------------------------------------------------------------
// Benchmark: amortized-runtime contract
// ---------------------------------------------------------------------------

struct BenchReport {
    double base_sec = 0.0;     // (N, T)
    double double_t_sec = 0.0; // (N, 2T)
    double double_n_sec = 0.0; // (2N, T)
    double ratio_t = 0.0;
    double ratio_n = 0.0;
};

namespace detail {

// One timed TreeSwap run without regret accounting or file output.
inline double time_tree_loop(int n, std::int64_t horizon, int branching, std::uint64_t seed) {
    TreeSwapParams p;
    p.n_actions = n;
    p.horizon = horizon;
    p.branching = branching;
    p.depth = 1;
    while (pow_saturated(p.branching, p.depth) < horizon) ++p.depth;
    TreeSwap tree(p, [n, branching]() { return std::make_unique<Mwu>(n, branching); });
    IidUniformAdversary adversary(n, derive_seed(seed, "bench"));
    double sink = 0.0;
    const auto started = std::chrono::steady_clock::now();
    std::optional<RewardVector> pending;
    for (std::int64_t t = 1; t <= horizon; ++t) {
        const MixedAction x = tree.round(pending);
        sink += x[0];
        pending = adversary.reward(t, x);
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (sink < -1.0) throw std::logic_error("unreachable");
    return elapsed;
}

inline double median_of(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    return xs[xs.size() / 2];
}

} // namespace detail

// Wall-time ratios for doubled horizon and doubled action count; with O(N)
// amortized per-round cost both stay near 2.
inline BenchReport run_bench(int n, std::int64_t horizon, int branching, int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("bench: trials must be positive");
    std::vector<double> base, dt, dn;
    for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t s = derive_seed(seed, "bench-trial", static_cast<std::uint64_t>(trial));
        base.push_back(detail::time_tree_loop(n, horizon, branching, s));
        dt.push_back(detail::time_tree_loop(n, 2 * horizon, branching, s));
        dn.push_back(detail::time_tree_loop(2 * n, horizon, branching, s));
    }
    BenchReport report;
    report.base_sec = detail::median_of(base);
    report.double_t_sec = detail::median_of(dt);
    report.double_n_sec = detail::median_of(dn);
    report.ratio_t = report.double_t_sec / report.base_sec;
    report.ratio_n = report.double_n_sec / report.base_sec;
    return report;
}

} // namespace swapregret
