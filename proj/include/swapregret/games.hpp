#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "swapregret/learners.hpp"
#include "swapregret/regret.hpp"
#include "swapregret/rng.hpp"
#include "swapregret/treeswap.hpp"
#include "swapregret/types.hpp"

namespace swapregret {

// ---------------------------------------------------------------------------
// Game model
// ---------------------------------------------------------------------------

// m-player normal-form game with n actions per player and payoff entries in
// [0,1]. Payoff tensors are stored flat, player 0's action most significant.
class NormalFormGame {
public:
    NormalFormGame(int players, int actions, std::vector<std::vector<double>> payoffs)
        : m_(players), n_(actions), payoffs_(std::move(payoffs)) {
        if (players < 2) throw std::invalid_argument("NormalFormGame: need at least 2 players");
        if (actions < 1) throw std::invalid_argument("NormalFormGame: need at least 1 action");
        std::int64_t size = 1;
        for (int j = 0; j < players; ++j) {
            if (size > 10000000 / actions) throw std::invalid_argument("NormalFormGame: profile space too large");
            size *= actions;
        }
        profile_count_ = size;
        if (static_cast<int>(payoffs_.size()) != players)
            throw std::invalid_argument("NormalFormGame: payoff tensor count mismatch");
        for (const auto& tensor : payoffs_) {
            if (static_cast<std::int64_t>(tensor.size()) != size)
                throw std::invalid_argument("NormalFormGame: payoff tensor shape mismatch");
            for (double v : tensor)
                if (v < 0.0 || v > 1.0) throw std::invalid_argument("NormalFormGame: payoff out of [0,1]");
        }
    }

    int players() const { return m_; }
    int actions() const { return n_; }
    std::int64_t profile_count() const { return profile_count_; }

    std::int64_t profile_index(std::span<const int> profile) const {
        std::int64_t idx = 0;
        for (int j = 0; j < m_; ++j) {
            const int a = profile[static_cast<std::size_t>(j)];
            if (a < 0 || a >= n_) throw std::invalid_argument("NormalFormGame: action out of range");
            idx = idx * n_ + a;
        }
        return idx;
    }

    double payoff(int player, std::span<const int> profile) const {
        return payoffs_[static_cast<std::size_t>(player)][static_cast<std::size_t>(profile_index(profile))];
    }

    double payoff_by_index(int player, std::int64_t profile_idx) const {
        return payoffs_[static_cast<std::size_t>(player)][static_cast<std::size_t>(profile_idx)];
    }

    const std::vector<std::vector<double>>& payoffs() const { return payoffs_; }

    static NormalFormGame random(int players, int actions, Rng& rng) {
        std::int64_t size = 1;
        for (int j = 0; j < players; ++j) size *= actions;
        std::vector<std::vector<double>> tensors(static_cast<std::size_t>(players));
        for (auto& t : tensors) {
            t.resize(static_cast<std::size_t>(size));
            for (double& v : t) v = rng.uniform01();
        }
        return NormalFormGame(players, actions, std::move(tensors));
    }

private:
    int m_;
    int n_;
    std::int64_t profile_count_ = 0;
    std::vector<std::vector<double>> payoffs_;
};

// Sparse weighted set of action profiles; a candidate eps-CE/eps-CCE.
// Duplicates are merged and weights renormalized on construction.
class CorrelatedDistribution {
public:
    CorrelatedDistribution() = default;

    CorrelatedDistribution(std::vector<std::pair<std::vector<int>, double>> entries, int players, int actions) {
        std::map<std::vector<int>, double> merged;
        double total = 0.0;
        for (auto& [profile, w] : entries) {
            if (static_cast<int>(profile.size()) != players)
                throw std::invalid_argument("CorrelatedDistribution: profile length mismatch");
            for (int a : profile)
                if (a < 0 || a >= actions) throw std::invalid_argument("CorrelatedDistribution: action out of range");
            if (!(w > 0.0)) throw std::invalid_argument("CorrelatedDistribution: weights must be positive");
            merged[profile] += w;
            total += w;
        }
        if (merged.empty()) throw std::invalid_argument("CorrelatedDistribution: empty support");
        if (std::abs(total - 1.0) > kSimplexTol)
            throw std::invalid_argument("CorrelatedDistribution: weights sum to " + std::to_string(total));
        support_.assign(merged.begin(), merged.end());
        for (auto& [profile, w] : support_) w /= total;
    }

    const std::vector<std::pair<std::vector<int>, double>>& support() const { return support_; }
    std::int64_t sparsity() const { return static_cast<std::int64_t>(support_.size()); }

private:
    std::vector<std::pair<std::vector<int>, double>> support_;
};

// ---------------------------------------------------------------------------
// Equilibrium gaps
// ---------------------------------------------------------------------------

namespace detail {
// D[s][s'] = E_{profile ~ mu, profile_j = s}[ A_j(s' substituted) ]
inline std::vector<double> deviation_matrix(const NormalFormGame& game, const CorrelatedDistribution& mu,
                                            int player) {
    const int n = game.actions();
    std::vector<double> d(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    std::vector<int> scratch;
    for (const auto& [profile, w] : mu.support()) {
        const int s = profile[static_cast<std::size_t>(player)];
        scratch = profile;
        for (int sub = 0; sub < n; ++sub) {
            scratch[static_cast<std::size_t>(player)] = sub;
            d[static_cast<std::size_t>(s) * static_cast<std::size_t>(n) + static_cast<std::size_t>(sub)] +=
                w * game.payoff(player, scratch);
        }
    }
    return d;
}
} // namespace detail

// Per-player correlated-equilibrium gap: the gain of the best deviation map
// conditioned on the sampled action. mu is an eps-CE iff max over players
// is at most eps.
inline std::vector<double> ce_gap(const NormalFormGame& game, const CorrelatedDistribution& mu) {
    const int n = game.actions();
    std::vector<double> gaps(static_cast<std::size_t>(game.players()), 0.0);
    for (int j = 0; j < game.players(); ++j) {
        const auto d = detail::deviation_matrix(game, mu, j);
        double gap = 0.0;
        for (int s = 0; s < n; ++s) {
            const double* row = &d[static_cast<std::size_t>(s) * static_cast<std::size_t>(n)];
            double best = row[0];
            for (int sub = 1; sub < n; ++sub) best = std::max(best, row[sub]);
            gap += best - row[s];
        }
        gaps[static_cast<std::size_t>(j)] = gap;
    }
    return gaps;
}

// Coarse gap: best constant deviation. Componentwise at most ce_gap.
inline std::vector<double> cce_gap(const NormalFormGame& game, const CorrelatedDistribution& mu) {
    const int n = game.actions();
    std::vector<double> gaps(static_cast<std::size_t>(game.players()), 0.0);
    for (int j = 0; j < game.players(); ++j) {
        const auto d = detail::deviation_matrix(game, mu, j);
        double realized = 0.0;
        std::vector<double> by_target(static_cast<std::size_t>(n), 0.0);
        for (int s = 0; s < n; ++s) {
            const double* row = &d[static_cast<std::size_t>(s) * static_cast<std::size_t>(n)];
            realized += row[s];
            for (int sub = 0; sub < n; ++sub) by_target[static_cast<std::size_t>(sub)] += row[sub];
        }
        double best = by_target[0];
        for (int sub = 1; sub < n; ++sub) best = std::max(best, by_target[static_cast<std::size_t>(sub)]);
        gaps[static_cast<std::size_t>(j)] = std::max(0.0, best - realized);
    }
    return gaps;
}

// ---------------------------------------------------------------------------
// Resource accounting
// ---------------------------------------------------------------------------

struct ResourceLedger {
    std::int64_t queries = 0;
    std::int64_t comm_bits = 0;
};

class ResourceCapExceeded : public std::runtime_error {
public:
    ResourceCapExceeded(const std::string& what, ResourceLedger ledger)
        : std::runtime_error(what), partial_ledger(ledger) {}
    ResourceLedger partial_ledger;
};

// Entry oracle for the query model: every payoff read is counted.
class PayoffOracle {
public:
    explicit PayoffOracle(const NormalFormGame& game) : game_(&game) {}

    double query(int player, std::span<const int> profile) {
        ++ledger_.queries;
        return game_->payoff(player, profile);
    }

    const ResourceLedger& ledger() const { return ledger_; }
    int players() const { return game_->players(); }
    int actions() const { return game_->actions(); }

private:
    const NormalFormGame* game_;
    ResourceLedger ledger_;
};

inline int bits_for_action_index(int n_actions) {
    int bits = 0;
    while ((1 << bits) < n_actions) ++bits;
    return bits;
}

inline constexpr int kWeightBits = 16; // fixed-point weight quantization for bit accounting

// Bits to transmit one sparse mixture: nnz * (ceil(log2 N) + 16).
inline std::int64_t sparse_encoding_bits(const MixedAction& x) {
    std::int64_t nnz = 0;
    for (int i = 0; i < x.size(); ++i) nnz += (x[i] > 0.0) ? 1 : 0;
    return nnz * (bits_for_action_index(x.size()) + kWeightBits);
}

// ---------------------------------------------------------------------------
// Self-play protocols
// ---------------------------------------------------------------------------

struct CeOptions {
    double eps = 0.3;
    double delta = 0.1;
    double constant_c = 4.0;                  // the protocols' leading constant
    std::optional<std::int64_t> cap_horizon;  // cap on T = M^d
    std::optional<int> samples_override;      // pin L instead of deriving it
    std::optional<std::int64_t> max_comm_bits;
    std::optional<std::int64_t> max_queries;
};

struct ProtocolParams {
    std::int64_t horizon = 0; // T
    int branching = 0;        // M
    int depth = 0;            // d
    int samples = 0;          // L
};

struct SelfPlayResult {
    CorrelatedDistribution distribution;
    ResourceLedger ledger;
    ProtocolParams params;
    std::vector<Transcript> transcripts; // per player: (x_i^t, u_i^t)
    bool horizon_capped = false;
};

namespace detail {

inline ProtocolParams protocol_params(int n, double eps, std::optional<std::int64_t> cap) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("protocol: eps must be in (0,1)");
    ProtocolParams p;
    p.branching = static_cast<int>(
        std::max<std::int64_t>(2, static_cast<std::int64_t>(std::ceil(std::log(static_cast<double>(n)) / (eps * eps)))));
    p.depth = static_cast<int>(std::ceil(1.0 / eps));
    p.horizon = pow_saturated(p.branching, p.depth);
    if (cap && p.horizon > *cap) {
        p.horizon = *cap;
        // Keep M and re-fit the depth so M^(d-1) <= T <= M^d still holds;
        // the guarantee weakens to the larger effective 1/d.
        p.depth = 1;
        while (pow_saturated(p.branching, p.depth) < p.horizon) ++p.depth;
    }
    return p;
}

// Exact expected utilities u_i[a] = E_{a_j ~ x_j, j != i}[A_i(a, a_-i)],
// contracted over the sparse product of the other players' mixtures.
inline std::vector<RewardVector> exact_utilities(const NormalFormGame& game,
                                                 const std::vector<MixedAction>& mixtures) {
    const int m = game.players();
    const int n = game.actions();
    std::vector<std::vector<double>> u(static_cast<std::size_t>(m),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    std::vector<std::vector<int>> supports(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) supports[static_cast<std::size_t>(j)] = mixtures[static_cast<std::size_t>(j)].support();

    std::vector<int> profile(static_cast<std::size_t>(m), 0);
    for (int i = 0; i < m; ++i) {
        // enumerate the joint support of the others
        std::vector<int> others;
        for (int j = 0; j < m; ++j)
            if (j != i) others.push_back(j);
        std::vector<std::size_t> cursor(others.size(), 0);
        while (true) {
            double w = 1.0;
            for (std::size_t k = 0; k < others.size(); ++k) {
                const int j = others[k];
                const int a = supports[static_cast<std::size_t>(j)][cursor[k]];
                profile[static_cast<std::size_t>(j)] = a;
                w *= mixtures[static_cast<std::size_t>(j)][a];
            }
            for (int a = 0; a < n; ++a) {
                profile[static_cast<std::size_t>(i)] = a;
                u[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] += w * game.payoff(i, profile);
            }
            std::size_t k = 0;
            for (; k < others.size(); ++k) {
                if (++cursor[k] < supports[static_cast<std::size_t>(others[k])].size()) break;
                cursor[k] = 0;
            }
            if (k == others.size()) break;
        }
    }
    std::vector<RewardVector> out;
    out.reserve(static_cast<std::size_t>(m));
    for (auto& v : u) out.emplace_back(std::move(v));
    return out;
}

// Accumulate the round's product distribution into the running average.
inline void accumulate_product(std::map<std::vector<int>, double>& acc,
                               const std::vector<MixedAction>& mixtures, double round_weight) {
    const int m = static_cast<int>(mixtures.size());
    std::vector<std::vector<int>> supports(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) supports[static_cast<std::size_t>(j)] = mixtures[static_cast<std::size_t>(j)].support();
    std::vector<std::size_t> cursor(static_cast<std::size_t>(m), 0);
    std::vector<int> profile(static_cast<std::size_t>(m), 0);
    while (true) {
        double w = round_weight;
        for (int j = 0; j < m; ++j) {
            const int a = supports[static_cast<std::size_t>(j)][cursor[static_cast<std::size_t>(j)]];
            profile[static_cast<std::size_t>(j)] = a;
            w *= mixtures[static_cast<std::size_t>(j)][a];
        }
        acc[profile] += w;
        std::size_t k = 0;
        for (; k < static_cast<std::size_t>(m); ++k) {
            if (++cursor[k] < supports[static_cast<std::size_t>(k)].size()) break;
            cursor[k] = 0;
        }
        if (k == static_cast<std::size_t>(m)) break;
    }
}

inline CorrelatedDistribution finish_distribution(std::map<std::vector<int>, double>& acc, int players,
                                                  int actions) {
    std::vector<std::pair<std::vector<int>, double>> entries(acc.begin(), acc.end());
    return CorrelatedDistribution(std::move(entries), players, actions);
}

} // namespace detail

// Communication protocol: every player runs TreeSwap over sampled-MWU, the
// L-sparse mixtures are exchanged each round (counted in bits), and updates
// use exact expected utilities against the exchanged mixtures. Returns the
// average product distribution, which the exchanged transcripts certify as
// an approximate CE.
inline SelfPlayResult comm_ce(const NormalFormGame& game, const CeOptions& opt, std::uint64_t seed) {
    const int m = game.players();
    const int n = game.actions();
    ProtocolParams params = detail::protocol_params(n, opt.eps, opt.cap_horizon);
    params.samples = opt.samples_override.value_or(static_cast<int>(std::ceil(
        opt.constant_c * m *
        std::log(static_cast<double>(params.horizon) * n * m / opt.delta) / (opt.eps * opt.eps))));

    SelfPlayResult result;
    result.params = params;
    result.horizon_capped = opt.cap_horizon && pow_saturated(params.branching, params.depth) != params.horizon;

    TreeSwapParams tsp{n, params.horizon, params.branching, params.depth};
    std::vector<std::unique_ptr<Rng>> samp_rngs;
    std::vector<std::unique_ptr<TreeSwap>> players;
    for (int i = 0; i < m; ++i) {
        samp_rngs.push_back(std::make_unique<Rng>(derive_seed(seed, "commce.samp", static_cast<std::uint64_t>(i))));
        Rng* rng = samp_rngs.back().get();
        players.push_back(std::make_unique<TreeSwap>(
            tsp, [n, params, rng]() {
                return std::make_unique<MwuSamp>(n, params.branching, params.samples, rng);
            }));
    }

    result.transcripts.assign(static_cast<std::size_t>(m), Transcript{});
    for (auto& tr : result.transcripts) tr.n_actions = n;

    std::map<std::vector<int>, double> average;
    std::vector<std::optional<RewardVector>> pending(static_cast<std::size_t>(m));
    const double round_weight = 1.0 / static_cast<double>(params.horizon);

    for (std::int64_t t = 1; t <= params.horizon; ++t) {
        std::vector<MixedAction> mixtures;
        mixtures.reserve(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i)
            mixtures.push_back(players[static_cast<std::size_t>(i)]->round(pending[static_cast<std::size_t>(i)]));

        for (const MixedAction& x : mixtures) result.ledger.comm_bits += sparse_encoding_bits(x);
        if (opt.max_comm_bits && result.ledger.comm_bits > *opt.max_comm_bits)
            throw ResourceCapExceeded("comm_ce: communication cap exceeded", result.ledger);

        std::vector<RewardVector> utilities = detail::exact_utilities(game, mixtures);
        detail::accumulate_product(average, mixtures, round_weight);
        for (int i = 0; i < m; ++i) {
            result.transcripts[static_cast<std::size_t>(i)].append(mixtures[static_cast<std::size_t>(i)],
                                                                   utilities[static_cast<std::size_t>(i)]);
            pending[static_cast<std::size_t>(i)] = std::move(utilities[static_cast<std::size_t>(i)]);
        }
    }

    result.distribution = detail::finish_distribution(average, m, n);
    return result;
}

// Query protocol: TreeSwap over plain MWU; utilities are estimated each
// round from L sampled opponent profiles with N*L entry queries per player,
// for exactly T*m*N*L queries in total.
inline SelfPlayResult query_ce(PayoffOracle& oracle, const CeOptions& opt, std::uint64_t seed) {
    const int m = oracle.players();
    const int n = oracle.actions();
    ProtocolParams params = detail::protocol_params(n, opt.eps, opt.cap_horizon);
    params.samples = opt.samples_override.value_or(static_cast<int>(std::ceil(
        opt.constant_c *
        std::log(static_cast<double>(params.horizon) * n * m / opt.delta) / (opt.eps * opt.eps))));

    SelfPlayResult result;
    result.params = params;
    result.horizon_capped = opt.cap_horizon && pow_saturated(params.branching, params.depth) != params.horizon;

    TreeSwapParams tsp{n, params.horizon, params.branching, params.depth};
    std::vector<std::unique_ptr<TreeSwap>> players;
    for (int i = 0; i < m; ++i)
        players.push_back(std::make_unique<TreeSwap>(tsp, [n, params]() {
            return std::make_unique<Mwu>(n, params.branching);
        }));

    result.transcripts.assign(static_cast<std::size_t>(m), Transcript{});
    for (auto& tr : result.transcripts) tr.n_actions = n;

    std::map<std::vector<int>, double> average;
    std::vector<std::optional<RewardVector>> pending(static_cast<std::size_t>(m));
    const double round_weight = 1.0 / static_cast<double>(params.horizon);

    std::vector<std::vector<int>> samples(static_cast<std::size_t>(m),
                                          std::vector<int>(static_cast<std::size_t>(params.samples), 0));
    std::vector<int> profile(static_cast<std::size_t>(m), 0);

    for (std::int64_t t = 1; t <= params.horizon; ++t) {
        std::vector<MixedAction> mixtures;
        mixtures.reserve(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i)
            mixtures.push_back(players[static_cast<std::size_t>(i)]->round(pending[static_cast<std::size_t>(i)]));

        // One batch of L action samples per player per round, shared by all
        // other players' estimates.
        for (int i = 0; i < m; ++i) {
            Rng rng(derive_seed(seed, "queryce.samples", static_cast<std::uint64_t>(i),
                                static_cast<std::uint64_t>(t)));
            for (int l = 0; l < params.samples; ++l)
                samples[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] =
                    rng.sample_weights(mixtures[static_cast<std::size_t>(i)].probs());
        }

        detail::accumulate_product(average, mixtures, round_weight);

        for (int i = 0; i < m; ++i) {
            std::vector<double> estimate(static_cast<std::size_t>(n), 0.0);
            for (int l = 0; l < params.samples; ++l) {
                for (int j = 0; j < m; ++j)
                    if (j != i) profile[static_cast<std::size_t>(j)] = samples[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
                for (int a = 0; a < n; ++a) {
                    profile[static_cast<std::size_t>(i)] = a;
                    estimate[static_cast<std::size_t>(a)] += oracle.query(i, profile);
                }
            }
            for (double& v : estimate) v /= static_cast<double>(params.samples);
            RewardVector u(std::move(estimate));
            result.transcripts[static_cast<std::size_t>(i)].append(mixtures[static_cast<std::size_t>(i)], u);
            pending[static_cast<std::size_t>(i)] = std::move(u);
            if (opt.max_queries && oracle.ledger().queries > *opt.max_queries)
                throw ResourceCapExceeded("query_ce: query cap exceeded", oracle.ledger());
        }
    }

    result.ledger = oracle.ledger();
    result.distribution = detail::finish_distribution(average, m, n);
    return result;
}

// Minimal exact self-play loop (plain MWU inside TreeSwap, exact utilities,
// no sampling or accounting). The bridge between its transcripts and the
// averaged distribution is exact: for every player, the swap regret of
// (x_i^t, u_i^t) equals that player's ce_gap of the averaged product
// distribution.
inline SelfPlayResult self_play_exact(const NormalFormGame& game, std::int64_t horizon, int branching,
                                      int depth) {
    const int m = game.players();
    const int n = game.actions();
    SelfPlayResult result;
    result.params = ProtocolParams{horizon, branching, depth, 0};

    TreeSwapParams tsp{n, horizon, branching, depth};
    std::vector<std::unique_ptr<TreeSwap>> players;
    for (int i = 0; i < m; ++i)
        players.push_back(std::make_unique<TreeSwap>(tsp, [n, branching]() {
            return std::make_unique<Mwu>(n, branching);
        }));

    result.transcripts.assign(static_cast<std::size_t>(m), Transcript{});
    for (auto& tr : result.transcripts) tr.n_actions = n;

    std::map<std::vector<int>, double> average;
    std::vector<std::optional<RewardVector>> pending(static_cast<std::size_t>(m));
    const double round_weight = 1.0 / static_cast<double>(horizon);
    for (std::int64_t t = 1; t <= horizon; ++t) {
        std::vector<MixedAction> mixtures;
        mixtures.reserve(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i)
            mixtures.push_back(players[static_cast<std::size_t>(i)]->round(pending[static_cast<std::size_t>(i)]));
        std::vector<RewardVector> utilities = detail::exact_utilities(game, mixtures);
        detail::accumulate_product(average, mixtures, round_weight);
        for (int i = 0; i < m; ++i) {
            result.transcripts[static_cast<std::size_t>(i)].append(mixtures[static_cast<std::size_t>(i)],
                                                                   utilities[static_cast<std::size_t>(i)]);
            pending[static_cast<std::size_t>(i)] = std::move(utilities[static_cast<std::size_t>(i)]);
        }
    }
    result.distribution = detail::finish_distribution(average, m, n);
    return result;
}

} // namespace swapregret
