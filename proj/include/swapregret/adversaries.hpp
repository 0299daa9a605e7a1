#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "swapregret/rng.hpp"
#include "swapregret/types.hpp"

namespace swapregret {

// Full-information reward process. Oblivious processes ignore the play.
class Adversary {
public:
    virtual ~Adversary() = default;
    virtual RewardVector reward(std::int64_t t, const MixedAction& play) = 0;
    virtual bool oblivious() const { return true; }
};

// ---------------------------------------------------------------------------
// Baselines
// ---------------------------------------------------------------------------

class ConstantAdversary : public Adversary {
public:
    explicit ConstantAdversary(RewardVector v) : v_(std::move(v)) {}
    RewardVector reward(std::int64_t, const MixedAction&) override { return v_; }

private:
    RewardVector v_;
};

class IidUniformAdversary : public Adversary {
public:
    IidUniformAdversary(int n_actions, std::uint64_t seed) : n_(n_actions), rng_(seed) {}
    RewardVector reward(std::int64_t, const MixedAction&) override {
        std::vector<double> v(static_cast<std::size_t>(n_));
        for (double& x : v) x = rng_.uniform01();
        return RewardVector(std::move(v));
    }

private:
    int n_;
    Rng rng_;
};

// Independent Bernoulli rewards with fixed per-action means.
class BernoulliAdversary : public Adversary {
public:
    BernoulliAdversary(std::vector<double> means, std::uint64_t seed)
        : means_(std::move(means)), rng_(seed) {
        for (double m : means_)
            if (m < 0.0 || m > 1.0) throw std::invalid_argument("BernoulliAdversary: mean out of [0,1]");
    }
    RewardVector reward(std::int64_t, const MixedAction&) override {
        std::vector<double> v(means_.size());
        for (std::size_t i = 0; i < means_.size(); ++i) v[i] = rng_.bernoulli(means_[i]) ? 1.0 : 0.0;
        return RewardVector(std::move(v));
    }

private:
    std::vector<double> means_;
    Rng rng_;
};

// Rewards 1 on the learner's least-played action of the previous round
// (lowest index on ties), uniform at the first round.
class BestResponseLastAdversary : public Adversary {
public:
    explicit BestResponseLastAdversary(int n_actions) : n_(n_actions) {}
    bool oblivious() const override { return false; }
    RewardVector reward(std::int64_t, const MixedAction& play) override {
        int argmin = 0;
        for (int i = 1; i < n_; ++i)
            if (play[i] < play[argmin]) argmin = i;
        std::vector<double> v(static_cast<std::size_t>(n_), 0.0);
        v[static_cast<std::size_t>(argmin)] = 1.0;
        return RewardVector(std::move(v));
    }

private:
    int n_;
};

// ---------------------------------------------------------------------------
// Oblivious binary-tree adversary
// ---------------------------------------------------------------------------

// Reward schedule built over a complete binary tree of depth D with
// 2^D leaves, traversed leaf by leaf in DFS order, one batch of B rounds per
// leaf. Nodes are numbered in BFS order and node i owns actions (2i, 2i+1);
// on the current root-to-leaf path the node at depth p pays p/(2D) to one of
// its two actions and the leaf pays 1, so every active round satisfies
// ||u||_1 = (D+3)/4. The whole schedule is a pure function of
// (n_actions, horizon, seed).
class ObliviousTreeAdversary : public Adversary {
public:
    ObliviousTreeAdversary(int n_actions, std::int64_t horizon, std::uint64_t seed, bool l1_scaled = false)
        : n_(n_actions), horizon_(horizon), l1_scaled_(l1_scaled) {
        if (horizon < 1) throw std::invalid_argument("ObliviousTreeAdversary: horizon must be positive");
        const std::int64_t cap = std::min<std::int64_t>(horizon, (static_cast<std::int64_t>(n_actions) + 2) / 4);
        if (cap < 1) throw std::invalid_argument("ObliviousTreeAdversary: need at least 2 actions");
        depth_ = std::bit_width(static_cast<std::uint64_t>(cap)) - 1;
        if (depth_ < 1)
            throw std::invalid_argument("ObliviousTreeAdversary: need at least 6 actions and 2 rounds");
        leaves_ = std::int64_t(1) << depth_;
        batch_len_ = horizon / leaves_;
        active_horizon_ = batch_len_ * leaves_;
        if (4 * leaves_ - 2 > n_actions) throw std::logic_error("ObliviousTreeAdversary: action budget");

        Rng rng(seed);
        node_bits_.resize(static_cast<std::size_t>(leaves_ - 1)); // internal nodes, BFS order
        for (std::size_t i = 0; i < node_bits_.size(); ++i) node_bits_[i] = rng.bernoulli();
        leaf_bits_.resize(static_cast<std::size_t>(leaves_ * batch_len_));
        for (std::size_t i = 0; i < leaf_bits_.size(); ++i) leaf_bits_[i] = rng.bernoulli();
    }

    // Fixed-bit construction, for golden schedules in tests.
    ObliviousTreeAdversary(int n_actions, std::int64_t horizon, std::vector<bool> node_bits,
                           std::vector<bool> leaf_bits, bool l1_scaled = false)
        : ObliviousTreeAdversary(n_actions, horizon, std::uint64_t{0}, l1_scaled) {
        if (node_bits.size() != node_bits_.size() || leaf_bits.size() != leaf_bits_.size())
            throw std::invalid_argument("ObliviousTreeAdversary: bit vector size mismatch");
        node_bits_ = std::move(node_bits);
        leaf_bits_ = std::move(leaf_bits);
    }

    int depth() const { return depth_; }
    std::int64_t batch_len() const { return batch_len_; }
    std::int64_t active_horizon() const { return active_horizon_; }
    bool l1_scaled() const { return l1_scaled_; }

    // BFS node ids along the root-to-leaf path of a 1-based batch.
    std::vector<std::int64_t> path_nodes(std::int64_t batch) const {
        const std::int64_t leaf = batch - 1; // left-to-right leaf index
        std::vector<std::int64_t> nodes(static_cast<std::size_t>(depth_ + 1));
        std::int64_t node = 0;
        nodes[0] = 0;
        for (int p = 0; p < depth_; ++p) {
            const bool right = ((leaf >> (depth_ - 1 - p)) & 1) != 0;
            node = 2 * node + (right ? 2 : 1);
            nodes[static_cast<std::size_t>(p + 1)] = node;
        }
        return nodes;
    }

    static int primary_action(std::int64_t node) { return static_cast<int>(2 * node); }
    static int alternate_action(std::int64_t node) { return static_cast<int>(2 * node + 1); }

    RewardVector reward_at(std::int64_t t) const {
        if (t < 1 || t > horizon_) throw std::invalid_argument("ObliviousTreeAdversary: round out of range");
        std::vector<double> u(static_cast<std::size_t>(n_), 0.0);
        if (t > active_horizon_) return RewardVector(std::move(u));
        const std::int64_t batch = (t - 1) / batch_len_ + 1;
        const std::int64_t leaf = batch - 1;
        const std::int64_t offset = (t - 1) % batch_len_;
        const double scale = l1_scaled_ ? 4.0 / (static_cast<double>(depth_) + 3.0) : 1.0;
        const auto nodes = path_nodes(batch);
        for (int p = 0; p < depth_; ++p) {
            const std::int64_t node = nodes[static_cast<std::size_t>(p)];
            const bool right_descendant = ((leaf >> (depth_ - 1 - p)) & 1) != 0;
            const bool flip = right_descendant && node_bits_[static_cast<std::size_t>(node)];
            const int action = flip ? alternate_action(node) : primary_action(node);
            u[static_cast<std::size_t>(action)] =
                scale * static_cast<double>(p) / (2.0 * static_cast<double>(depth_));
        }
        const std::int64_t leaf_node = nodes[static_cast<std::size_t>(depth_)];
        const bool flip = leaf_bits_[static_cast<std::size_t>(leaf * batch_len_ + offset)];
        const int action = flip ? alternate_action(leaf_node) : primary_action(leaf_node);
        u[static_cast<std::size_t>(action)] = scale * 1.0;
        return RewardVector(std::move(u));
    }

    RewardVector reward(std::int64_t t, const MixedAction&) override { return reward_at(t); }

private:
    int n_;
    std::int64_t horizon_;
    bool l1_scaled_;
    int depth_ = 0;             // D
    std::int64_t leaves_ = 0;   // 2^D
    std::int64_t batch_len_ = 0;
    std::int64_t active_horizon_ = 0; // T' = B * 2^D
    std::vector<bool> node_bits_;
    std::vector<bool> leaf_bits_; // row-major [leaf][offset within batch]
};

// ---------------------------------------------------------------------------
// Adaptive staircase adversary
// ---------------------------------------------------------------------------

// Adaptive construction over N = 2(2^L - 1) paired actions with
// L = floor(log2(T/2)). Rewards follow a logarithmically decreasing
// staircase template shifted right by two positions per round, one member of
// the current pair takes a Delta/2 penalty chosen by a coin, and any action
// whose windowed play mass ever reaches zeta = 1/(32L) is frozen at -1 for
// the rest of the run. Rounds whose own pair is already frozen emit the zero
// vector; every round after N/2 pays -1 everywhere. Emits rewards in [-1,1].
class AdaptiveStaircaseAdversary : public Adversary {
public:
    AdaptiveStaircaseAdversary(std::int64_t horizon, std::uint64_t seed)
        : AdaptiveStaircaseAdversary(n_actions_for_horizon(horizon), horizon, seed) {}

    AdaptiveStaircaseAdversary(int n_actions, std::int64_t horizon, std::uint64_t seed)
        : horizon_(horizon) {
        if (horizon < 4) throw std::invalid_argument("AdaptiveStaircaseAdversary: horizon must be at least 4");
        levels_ = std::bit_width(static_cast<std::uint64_t>(horizon / 2)) - 1; // L
        n_ = 2 * ((1 << levels_) - 1);
        if (n_actions != n_)
            throw std::invalid_argument("adaptive adversary requires N = 2(2^L-1)");
        delta_ = 1.0 / static_cast<double>(levels_);
        zeta_ = 1.0 / (32.0 * static_cast<double>(levels_));
        sigma_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(levels_), 0.0);
        sigma_max_.assign(static_cast<std::size_t>(n_), 0.0);
        Rng rng(seed);
        coin_.resize(static_cast<std::size_t>(n_ / 2));
        for (std::size_t i = 0; i < coin_.size(); ++i) coin_[i] = rng.bernoulli();
    }

    bool oblivious() const override { return false; }
    int n_actions() const { return n_; }
    int levels() const { return levels_; }
    double delta() const { return delta_; }
    double zeta() const { return zeta_; }
    std::int64_t round_index() const { return t_; }

    // Staircase template: F(i) = floor(log2(1 + i/2)) * Delta.
    double f_base(std::int64_t i) const {
        const std::int64_t q = 1 + i / 2;
        return static_cast<double>(std::bit_width(static_cast<std::uint64_t>(q)) - 1) * delta_;
    }

    // u_base^t, 1-based action index a.
    double u_base(std::int64_t t, std::int64_t a) const {
        if (a < 2 * t - 1) return -1.0;
        return 1.0 - f_base(a - (2 * t - 1));
    }

    bool round_was_active(std::int64_t t) const {
        return t - 1 < static_cast<std::int64_t>(active_trace_.size()) &&
               active_trace_[static_cast<std::size_t>(t - 1)];
    }
    bool coin(std::int64_t t) const { return coin_[static_cast<std::size_t>(t - 1)]; }
    bool is_stale(int action_zero_based) const {
        return sigma_max_[static_cast<std::size_t>(action_zero_based)] >= zeta_;
    }

    RewardVector step(const MixedAction& play) {
        if (play.size() != n_) throw std::invalid_argument("AdaptiveStaircaseAdversary: dimension mismatch");
        if (t_ >= horizon_) throw std::runtime_error("horizon exhausted");
        ++t_;
        const std::int64_t t = t_;
        std::vector<double> u(static_cast<std::size_t>(n_), 0.0);

        if (t > n_ / 2) {
            active_trace_.push_back(false);
            std::fill(u.begin(), u.end(), -1.0);
            return RewardVector(std::move(u), -1.0, 1.0);
        }

        const int pair_lo = static_cast<int>(2 * t - 2); // 0-based index of action 2t-1
        const bool active = sigma_max_[static_cast<std::size_t>(pair_lo)] < zeta_;
        active_trace_.push_back(active);
        if (!active) return RewardVector(std::move(u), -1.0, 1.0);

        const bool coin = coin_[static_cast<std::size_t>(t - 1)];
        for (int a0 = 0; a0 < n_; ++a0) {
            const std::int64_t a = a0 + 1; // 1-based action index
            if (a < 2 * t - 1) {
                u[static_cast<std::size_t>(a0)] = -1.0;
            } else if (a <= 2 * t) {
                // coin=1 penalizes the odd member, coin=0 the even member
                const bool penalized = (static_cast<int>(a % 2) == (coin ? 1 : 0));
                u[static_cast<std::size_t>(a0)] = 1.0 - (penalized ? delta_ / 2.0 : 0.0);
            } else if (is_stale(a0)) {
                u[static_cast<std::size_t>(a0)] = -1.0;
            } else {
                u[static_cast<std::size_t>(a0)] = u_base(t, a);
            }
        }

        // Fold this active round's pair mass into the window sums.
        for (int a0 = 0; a0 < n_; ++a0) {
            const std::int64_t a = a0 + 1;
            if (a <= 2 * t) continue;
            const int k = window_index(a, t);
            const double mass = play[a0] + play[pair_of(a0)];
            double& cell = sigma_[static_cast<std::size_t>(a0) * static_cast<std::size_t>(levels_) +
                                  static_cast<std::size_t>(k)];
            cell += mass;
            sigma_max_[static_cast<std::size_t>(a0)] = std::max(sigma_max_[static_cast<std::size_t>(a0)], cell);
        }
        return RewardVector(std::move(u), -1.0, 1.0);
    }

    RewardVector reward(std::int64_t, const MixedAction& play) override { return step(play); }

    static int pair_of(int action_zero_based) { return action_zero_based ^ 1; }

    static int n_actions_for_horizon(std::int64_t horizon) {
        if (horizon < 4) throw std::invalid_argument("AdaptiveStaircaseAdversary: horizon must be at least 4");
        const int levels = std::bit_width(static_cast<std::uint64_t>(horizon / 2)) - 1;
        return 2 * ((1 << levels) - 1);
    }

private:
    // k = floor(log2((a - (2s-1)) / 2)) for a > 2s; always in [0, L).
    int window_index(std::int64_t a, std::int64_t s) const {
        const std::int64_t x = a - 2 * s + 1; // >= 2
        return std::bit_width(static_cast<std::uint64_t>(x)) - 2;
    }

    std::int64_t horizon_;
    int levels_ = 0; // L
    int n_ = 0;
    double delta_ = 0.0;
    double zeta_ = 0.0;
    std::vector<double> sigma_;     // [action][k] windowed pair mass over active rounds
    std::vector<double> sigma_max_; // max over k
    std::vector<bool> coin_;        // r^t per round
    std::vector<bool> active_trace_;
    std::int64_t t_ = 0;
};

} // namespace swapregret
