#pragma once

// Independent test oracles. Everything here recomputes quantities by brute
// force or by a different summation route than the library, and must stay
// decoupled from the implementation paths it checks.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "swapregret/games.hpp"
#include "swapregret/rng.hpp"
#include "swapregret/types.hpp"

namespace oracles {

using swapregret::MixedAction;
using swapregret::NormalFormGame;
using swapregret::RewardVector;
using swapregret::Rng;
using swapregret::Transcript;

// External regret by direct re-evaluation of its definition, action-major:
// for each candidate fixed action, accumulate its full-horizon total before
// moving to the next action.
inline double ext_regret_action_major(const Transcript& tr) {
    const int n = tr.n_actions;
    const auto rounds = tr.rounds();
    double best = -1e300;
    for (int j = 0; j < n; ++j) {
        double total = 0.0;
        for (std::int64_t t = 0; t < rounds; ++t) total += tr.rewards[static_cast<std::size_t>(t)][j];
        best = std::max(best, total);
    }
    double earned = 0.0;
    for (std::int64_t t = 0; t < rounds; ++t)
        earned += tr.plays[static_cast<std::size_t>(t)].expected_reward(tr.rewards[static_cast<std::size_t>(t)]);
    return (best - earned) / static_cast<double>(rounds);
}

// External regret, time-major: per-round contributions for all actions at
// once, maxed at the end.
inline double ext_regret_time_major(const Transcript& tr) {
    const int n = tr.n_actions;
    std::vector<double> totals(static_cast<std::size_t>(n), 0.0);
    double earned = 0.0;
    for (std::int64_t t = 0; t < tr.rounds(); ++t) {
        const auto& f = tr.rewards[static_cast<std::size_t>(t)];
        for (int j = 0; j < n; ++j) totals[static_cast<std::size_t>(j)] += f[j];
        earned += tr.plays[static_cast<std::size_t>(t)].expected_reward(f);
    }
    double best = totals[0];
    for (int j = 1; j < n; ++j) best = std::max(best, totals[static_cast<std::size_t>(j)]);
    return (best - earned) / static_cast<double>(tr.rounds());
}

// Swap regret by exhaustive enumeration over all N^N swap functions.
// Feasible for N <= 6.
inline double swap_regret_exhaustive(const Transcript& tr) {
    const int n = tr.n_actions;
    const auto rounds = tr.rounds();
    std::vector<int> pi(static_cast<std::size_t>(n), 0);
    double best = -1e300;
    while (true) {
        double value = 0.0;
        for (std::int64_t t = 0; t < rounds; ++t) {
            const auto& x = tr.plays[static_cast<std::size_t>(t)];
            const auto& f = tr.rewards[static_cast<std::size_t>(t)];
            for (int i = 0; i < n; ++i)
                value += x[i] * (f[pi[static_cast<std::size_t>(i)]] - f[i]);
        }
        best = std::max(best, value);
        int k = 0;
        while (k < n && ++pi[static_cast<std::size_t>(k)] == n) {
            pi[static_cast<std::size_t>(k)] = 0;
            ++k;
        }
        if (k == n) break;
    }
    return best / static_cast<double>(rounds);
}

// eps-CE gap of one player by enumerating all n^n deviation maps.
inline double ce_gap_exhaustive(const NormalFormGame& game, const swapregret::CorrelatedDistribution& mu,
                                int player) {
    const int n = game.actions();
    std::vector<int> pi(static_cast<std::size_t>(n), 0);
    std::vector<int> scratch;
    double best = -1e300;
    while (true) {
        double gain = 0.0;
        for (const auto& [profile, w] : mu.support()) {
            scratch = profile;
            const double base = game.payoff(player, scratch);
            scratch[static_cast<std::size_t>(player)] = pi[static_cast<std::size_t>(profile[static_cast<std::size_t>(player)])];
            gain += w * (game.payoff(player, scratch) - base);
        }
        best = std::max(best, gain);
        int k = 0;
        while (k < n && ++pi[static_cast<std::size_t>(k)] == n) {
            pi[static_cast<std::size_t>(k)] = 0;
            ++k;
        }
        if (k == n) break;
    }
    return best;
}

inline MixedAction random_mixed_action(int n, Rng& rng) {
    std::vector<double> w(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (double& v : w) {
        v = rng.uniform01() + 1e-6;
        sum += v;
    }
    for (double& v : w) v /= sum;
    return MixedAction(std::move(w));
}

inline RewardVector random_reward(int n, Rng& rng) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = rng.uniform01();
    return RewardVector(std::move(v));
}

// Random transcript with fresh play and reward each round.
inline Transcript random_transcript(int n, std::int64_t rounds, Rng& rng) {
    Transcript tr;
    tr.n_actions = n;
    for (std::int64_t t = 0; t < rounds; ++t) tr.append(random_mixed_action(n, rng), random_reward(n, rng));
    return tr;
}

// Random transcript with one fixed mixture for all rounds but the last,
// which plays the point mass on its own round's worst action. The best
// fixed action then weakly beats the learner on every draw (max column sum
// >= mixed part + final min), so 0 <= ext_regret <= swap_regret holds
// per-transcript with generic slack in both inequalities.
inline Transcript random_hedged_transcript(int n, std::int64_t rounds, Rng& rng) {
    Transcript tr;
    tr.n_actions = n;
    const MixedAction x = random_mixed_action(n, rng);
    for (std::int64_t t = 0; t + 1 < rounds; ++t) tr.append(x, random_reward(n, rng));
    const RewardVector last = random_reward(n, rng);
    int argmin = 0;
    for (int j = 1; j < n; ++j)
        if (last[j] < last[argmin]) argmin = j;
    tr.append(MixedAction::point_mass(n, argmin), last);
    return tr;
}

} // namespace oracles
