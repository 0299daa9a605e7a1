#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "swapregret/types.hpp"

namespace swapregret {

// Streaming accumulator behind both regret oracles and the prefix-regret
// trajectories. Keeps the dense N x N swap matrix
//     G[i][j] = sum_t x^t[i] * f^t[j]
// and evaluates both regrets from it with index-ascending reductions. Since
// rounding is monotone and row maxima dominate every fixed column entrywise,
// the orderings 0 <= swap_regret and ext_regret <= swap_regret hold exactly
// in floating point, not just up to rounding. A round costs
// O(N * |supp(x^t)|), which matters for sparse sampled plays.
class RegretAccumulator {
public:
    explicit RegretAccumulator(int n_actions)
        : n_(n_actions),
          g_(static_cast<std::size_t>(n_actions) * static_cast<std::size_t>(n_actions), 0.0) {
        if (n_actions < 1) throw std::invalid_argument("RegretAccumulator: need at least one action");
    }

    void add_round(const MixedAction& x, const RewardVector& f) {
        if (x.size() != n_ || f.size() != n_) throw std::invalid_argument("malformed transcript");
        for (int i = 0; i < n_; ++i) {
            const double xi = x[i];
            if (xi == 0.0) continue;
            double* row = &g_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_)];
            for (int j = 0; j < n_; ++j) row[j] += xi * f[j];
        }
        ++rounds_;
    }

    std::int64_t rounds() const { return rounds_; }

    // (1/T) (max_j sum_i G[i][j] - sum_i G[i][i]): the column sum at j is the
    // total reward of the constant deviation to j, the trace is the reward
    // the learner earned.
    double ext_regret() const {
        require_nonempty();
        double best = -1e300;
        for (int j = 0; j < n_; ++j) {
            double col = 0.0;
            for (int i = 0; i < n_; ++i)
                col += g_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)];
            best = std::max(best, col);
        }
        return (best - trace()) / static_cast<double>(rounds_);
    }

    SwapReport swap_report() const {
        require_nonempty();
        SwapReport report;
        report.best_swap.resize(static_cast<std::size_t>(n_));
        report.per_action_gain.resize(static_cast<std::size_t>(n_));
        double row_max_total = 0.0;
        for (int i = 0; i < n_; ++i) {
            const double* row = &g_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_)];
            double best = row[0];
            for (int j = 1; j < n_; ++j) best = std::max(best, row[j]);
            // The identity target wins ties (a gainless action keeps itself);
            // otherwise the lowest maximizing index.
            int target = i;
            if (row[i] != best) {
                for (int j = 0; j < n_; ++j) {
                    if (row[j] == best) { target = j; break; }
                }
            }
            report.best_swap[static_cast<std::size_t>(i)] = target;
            report.per_action_gain[static_cast<std::size_t>(i)] = best - row[i];
            row_max_total += best;
        }
        report.swap_regret = (row_max_total - trace()) / static_cast<double>(rounds_);
        return report;
    }

private:
    void require_nonempty() const {
        if (rounds_ == 0) throw std::invalid_argument("empty transcript");
    }

    double trace() const {
        double t = 0.0;
        for (int i = 0; i < n_; ++i)
            t += g_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i)];
        return t;
    }

    int n_;
    std::vector<double> g_;
    std::int64_t rounds_ = 0;
};

namespace detail {
inline RegretAccumulator accumulate(const Transcript& t) {
    t.validate();
    RegretAccumulator acc(t.n_actions);
    for (std::int64_t s = 0; s < t.rounds(); ++s)
        acc.add_round(t.plays[static_cast<std::size_t>(s)], t.rewards[static_cast<std::size_t>(s)]);
    return acc;
}
} // namespace detail

// External regret: best fixed action in hindsight versus realized reward,
// averaged over the horizon.
inline double ext_regret(const Transcript& t) {
    return detail::accumulate(t).ext_regret();
}

// Swap regret: per played action, the best post-hoc replacement, weighted by
// how much mass the learner put on it. Always >= max(ext_regret, 0).
inline SwapReport swap_regret(const Transcript& t) {
    return detail::accumulate(t).swap_report();
}

} // namespace swapregret
