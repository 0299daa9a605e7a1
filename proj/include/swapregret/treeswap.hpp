#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "swapregret/learners.hpp"
#include "swapregret/regret.hpp"
#include "swapregret/rng.hpp"
#include "swapregret/types.hpp"

namespace swapregret {

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

struct TreeSwapParams {
    int n_actions = 0;
    std::int64_t horizon = 0; // T
    int branching = 2;        // M
    int depth = 1;            // d
};

// (M, d) for a target swap regret eps: M = ceil(ln N / eps^2), d = ceil(1/eps).
// Any T with M^(d-1) <= T <= M^d then realizes the target.
inline TreeSwapParams choose_treeswap_params(int n_actions, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("choose_treeswap_params: eps must be in (0,1)");
    const double raw = std::ceil(std::log(static_cast<double>(n_actions)) / (eps * eps));
    if (!(raw < 1e9)) throw std::invalid_argument("choose_treeswap_params: eps too small for this action count");
    TreeSwapParams p;
    p.n_actions = n_actions;
    p.branching = std::max(2, static_cast<int>(raw));
    p.depth = static_cast<int>(std::ceil(1.0 / eps));
    p.horizon = pow_saturated(p.branching, p.depth);
    return p;
}

// ---------------------------------------------------------------------------
// Instrumentation
// ---------------------------------------------------------------------------

// Optional recorder for bound verification and accounting tests.
class TreeSwapRecorder {
public:
    virtual ~TreeSwapRecorder() = default;
    virtual void instance_created(int level, std::int64_t round) = 0;
    virtual void instance_updated(int level, std::int64_t round, const RewardVector& avg_reward) = 0;
    virtual void action_emitted(int level, std::int64_t round, const MixedAction& action) = 0;
};

// Per-instance record sufficient to replay the block structure of a run.
struct InstanceRecord {
    int level = 0;
    std::int64_t created_round = 0;
    std::vector<MixedAction> actions;
    std::vector<RewardVector> fed_averages;
};

class BoundRecorder : public TreeSwapRecorder {
public:
    void instance_created(int level, std::int64_t round) override {
        if (static_cast<int>(live_.size()) < level) live_.resize(static_cast<std::size_t>(level), -1);
        InstanceRecord rec;
        rec.level = level;
        rec.created_round = round;
        instances_.push_back(std::move(rec));
        live_[static_cast<std::size_t>(level - 1)] = static_cast<int>(instances_.size()) - 1;
    }

    void instance_updated(int level, std::int64_t /*round*/, const RewardVector& avg) override {
        instances_[current(level)].fed_averages.push_back(avg);
    }

    void action_emitted(int level, std::int64_t /*round*/, const MixedAction& action) override {
        instances_[current(level)].actions.push_back(action);
    }

    const std::vector<InstanceRecord>& instances() const { return instances_; }

    std::int64_t created_at_level(int level) const {
        std::int64_t c = 0;
        for (const auto& r : instances_) c += (r.level == level) ? 1 : 0;
        return c;
    }
    std::int64_t updates_at_level(int level) const {
        std::int64_t c = 0;
        for (const auto& r : instances_)
            if (r.level == level) c += static_cast<std::int64_t>(r.fed_averages.size());
        return c;
    }
    std::int64_t actions_at_level(int level) const {
        std::int64_t c = 0;
        for (const auto& r : instances_)
            if (r.level == level) c += static_cast<std::int64_t>(r.actions.size());
        return c;
    }

private:
    std::size_t current(int level) const {
        if (level < 1 || level > static_cast<int>(live_.size()) || live_[static_cast<std::size_t>(level - 1)] < 0)
            throw std::logic_error("BoundRecorder: no live instance at level");
        return static_cast<std::size_t>(live_[static_cast<std::size_t>(level - 1)]);
    }

    std::vector<InstanceRecord> instances_;
    std::vector<int> live_;
};

// ---------------------------------------------------------------------------
// TreeSwap: swap-regret play from any external-regret learner factory
// ---------------------------------------------------------------------------

// Arranges lazy instances of the inner learner on an M-ary depth-d tree and
// plays the uniform mixture along the current root-to-leaf path. Only the d
// on-path instances exist at any time; each lives for one length-M^(d-h+1)
// block, is updated at most M times, and sees block averages of the rewards
// rather than per-round rewards. Amortized cost per round is O(N).
class TreeSwap {
public:
    TreeSwap(TreeSwapParams params, LearnerFactory factory, TreeSwapRecorder* recorder = nullptr)
        : params_(params), factory_(std::move(factory)), recorder_(recorder) {
        if (params_.n_actions < 1) throw std::invalid_argument("TreeSwap: need at least one action");
        if (params_.branching < 2) throw std::invalid_argument("TreeSwap: branching must be at least 2");
        if (params_.depth < 1) throw std::invalid_argument("TreeSwap: depth must be at least 1");
        if (params_.horizon < 1) throw std::invalid_argument("TreeSwap: horizon must be positive");
        // Arbitrary horizons are allowed: grow the depth when T > M^d, and
        // flag horizons below M^(d-1), where the regret guarantee weakens.
        while (params_.horizon > pow_saturated(params_.branching, params_.depth)) {
            ++params_.depth;
            depth_raised_ = true;
        }
        if (params_.horizon < pow_saturated(params_.branching, params_.depth - 1)) short_horizon_ = true;
        levels_.resize(static_cast<std::size_t>(params_.depth));
        cum_reward_.assign(static_cast<std::size_t>(params_.n_actions), 0.0);
        mix_sum_.assign(static_cast<std::size_t>(params_.n_actions), 0.0);
        block_len_.resize(static_cast<std::size_t>(params_.depth));
        for (int h = 1; h <= params_.depth; ++h)
            block_len_[static_cast<std::size_t>(h - 1)] = pow_saturated(params_.branching, params_.depth - h);
    }

    const TreeSwapParams& params() const { return params_; }
    bool depth_raised() const { return depth_raised_; }
    bool short_horizon() const { return short_horizon_; }
    std::int64_t round_index() const { return t_; }

    // Advance one round. `prev_reward` is the reward observed for the
    // previous round (absent only at t=1); returns the mixture to play.
    MixedAction round(const std::optional<RewardVector>& prev_reward) {
        if (t_ >= params_.horizon) throw std::runtime_error("horizon exhausted");
        ++t_;
        if (t_ == 1) {
            if (prev_reward) throw std::invalid_argument("TreeSwap: unexpected reward at round 1");
        } else {
            if (!prev_reward) throw std::invalid_argument("TreeSwap: missing reward");
            if (prev_reward->size() != params_.n_actions)
                throw std::invalid_argument("TreeSwap: reward dimension mismatch");
            if (prev_reward->lo() < -kSimplexTol || prev_reward->hi() > 1.0 + kSimplexTol)
                throw std::invalid_argument("reward out of range");
            last_reward_ = prev_reward->values();
            for (int i = 0; i < params_.n_actions; ++i)
                cum_reward_[static_cast<std::size_t>(i)] += (*prev_reward)[i];
        }

        const std::vector<int> sigma = base_m_digits(t_ - 1, params_.branching, params_.depth);
        // Levels h..d are at a block boundary iff sigma_{h+1:d} == 0.
        int boundary_from = params_.depth;
        while (boundary_from > 1 && sigma[static_cast<std::size_t>(boundary_from - 1)] == 0) --boundary_from;

        for (int h = params_.depth; h >= boundary_from; --h) {
            Level& lv = levels_[static_cast<std::size_t>(h - 1)];
            if (sigma[static_cast<std::size_t>(h - 1)] > 0) {
                // Same prefix: feed the average reward of the finished
                // sub-block, reconstructed from the running sum.
                feed_update(lv, h);
            } else {
                // Prefix changed (or first round): fresh instance. The old
                // instance's cur_action stays behind so refresh_action can
                // subtract it from the running mixture sum.
                lv.learner = factory_();
                lv.snapshot = cum_reward_;
                if (recorder_) recorder_->instance_created(h, t_);
            }
            refresh_action(lv, h);
        }

        // The incremental sum drifts by ~1 ulp per touched level; rebuild it
        // exactly every so often so long runs stay on the simplex.
        if ((t_ & 1023) == 0) rebuild_mix_sum();

        std::vector<double> out(mix_sum_);
        for (double& v : out) v /= static_cast<double>(params_.depth);
        return MixedAction(std::move(out));
    }

private:
    struct Level {
        std::unique_ptr<Learner> learner;
        MixedAction cur_action;
        bool has_action = false;
        std::vector<double> snapshot; // cumulative reward at last update/creation
    };

    void feed_update(Level& lv, int h) {
        const std::int64_t window = block_len_[static_cast<std::size_t>(h - 1)];
        RewardVector avg = [&] {
            if (window == 1) return RewardVector(last_reward_);
            std::vector<double> a(static_cast<std::size_t>(params_.n_actions));
            for (int i = 0; i < params_.n_actions; ++i)
                a[static_cast<std::size_t>(i)] =
                    (cum_reward_[static_cast<std::size_t>(i)] - lv.snapshot[static_cast<std::size_t>(i)]) /
                    static_cast<double>(window);
            return RewardVector(std::move(a));
        }();
        lv.learner->update(avg);
        lv.snapshot = cum_reward_;
        if (recorder_) recorder_->instance_updated(h, t_, avg);
    }

    void rebuild_mix_sum() {
        mix_sum_.assign(static_cast<std::size_t>(params_.n_actions), 0.0);
        for (const Level& lv : levels_) {
            if (!lv.has_action) continue;
            for (int i = 0; i < params_.n_actions; ++i)
                mix_sum_[static_cast<std::size_t>(i)] += lv.cur_action[i];
        }
    }

    void refresh_action(Level& lv, int h) {
        MixedAction next = lv.learner->act();
        if (lv.has_action) {
            for (int i = 0; i < params_.n_actions; ++i)
                mix_sum_[static_cast<std::size_t>(i)] += next[i] - lv.cur_action[i];
        } else {
            for (int i = 0; i < params_.n_actions; ++i)
                mix_sum_[static_cast<std::size_t>(i)] += next[i];
        }
        lv.cur_action = std::move(next);
        lv.has_action = true;
        if (recorder_) recorder_->action_emitted(h, t_, lv.cur_action);
    }

    TreeSwapParams params_;
    LearnerFactory factory_;
    TreeSwapRecorder* recorder_;
    bool depth_raised_ = false;
    bool short_horizon_ = false;
    std::vector<Level> levels_;
    std::vector<std::int64_t> block_len_; // M^(d-h) per level
    std::vector<double> cum_reward_;      // sum of observed rewards
    std::vector<double> last_reward_;
    std::vector<double> mix_sum_; // sum of live cur_actions, maintained incrementally
    std::int64_t t_ = 0;
};

// ---------------------------------------------------------------------------
// Per-run bound verification
// ---------------------------------------------------------------------------

struct BoundCheck {
    double lhs = 0.0; // swap regret of the produced transcript
    double rhs = 0.0; // max realized inner external regret + 3/d
    double max_instance_regret = 0.0;
};

// Checks the reduction's per-run inequality: the swap regret of the emitted
// sequence never exceeds the worst realized external regret among the inner
// instances (each measured over its own lifetime against the block rewards
// it played through) plus 3/d.
inline BoundCheck verify_treeswap_bound(const TreeSwapParams& params, const BoundRecorder& recorder,
                                        const Transcript& transcript) {
    if (recorder.instances().empty()) throw std::invalid_argument("instrumentation disabled");
    transcript.validate();
    const std::int64_t horizon = transcript.rounds();
    const int n = transcript.n_actions;

    // prefix[t][j] = sum of rewards of action j over rounds 1..t
    std::vector<std::vector<double>> prefix(static_cast<std::size_t>(horizon + 1),
                                            std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (std::int64_t t = 1; t <= horizon; ++t) {
        for (int j = 0; j < n; ++j)
            prefix[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] =
                prefix[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(j)] +
                transcript.rewards[static_cast<std::size_t>(t - 1)][j];
    }

    double worst = 0.0;
    for (const InstanceRecord& inst : recorder.instances()) {
        const std::int64_t sub_block = pow_saturated(params.branching, params.depth - inst.level);
        const std::int64_t lifetime_end =
            std::min<std::int64_t>(horizon, inst.created_round + sub_block * params.branching - 1);
        const std::int64_t len = lifetime_end - inst.created_round + 1;
        if (len <= 0) continue;
        double earned = 0.0;
        for (std::size_t k = 0; k < inst.actions.size(); ++k) {
            const std::int64_t from = inst.created_round + static_cast<std::int64_t>(k) * sub_block;
            const std::int64_t to = std::min<std::int64_t>(lifetime_end, from + sub_block - 1);
            for (std::int64_t s = from; s <= to; ++s)
                earned += inst.actions[k].expected_reward(transcript.rewards[static_cast<std::size_t>(s - 1)]);
        }
        double best = 0.0;
        for (int j = 0; j < n; ++j) {
            const double v = prefix[static_cast<std::size_t>(lifetime_end)][static_cast<std::size_t>(j)] -
                             prefix[static_cast<std::size_t>(inst.created_round - 1)][static_cast<std::size_t>(j)];
            best = std::max(best, v);
        }
        worst = std::max(worst, (best - earned) / static_cast<double>(len));
    }

    BoundCheck check;
    check.max_instance_regret = worst;
    check.lhs = swap_regret(transcript).swap_regret;
    check.rhs = worst + 3.0 / static_cast<double>(params.depth);
    return check;
}

// ---------------------------------------------------------------------------
// BanditTreeSwap: the bandit-feedback variant over Exp3Multi
// ---------------------------------------------------------------------------

struct BanditTreeSwapParams {
    int n_actions = 0;
    std::int64_t horizon = 0; // T, a multiple of n_actions
    int branching = 2;        // M
    int depth = 1;            // d
    // Exp3Multi's exploration bias; the level-h instance gets
    // gamma = 1/(K_h * M^(1/6)) by default, or 1/(K_h * T^(1/6)) when
    // gamma_uses_total_horizon is set.
    bool gamma_uses_total_horizon = false;
};

// Nominal per-round sample count for the level-h instance.
inline int bandit_samples_for_level(const BanditTreeSwapParams& p, int level) {
    const double raw = 2.0 * static_cast<double>(p.n_actions) *
                       static_cast<double>(pow_saturated(p.branching, p.depth - level)) /
                       static_cast<double>(p.depth);
    return std::max(1, static_cast<int>(std::llround(raw)));
}

struct BanditLevelEvent {
    int level = 0;
    std::int64_t round = 0;
};

// Tree of Exp3Multi instances addressed by blocks of N time steps. Each
// round: store the previously observed reward sample, advance any instance
// whose block just ended, then sample a level uniformly and an action from
// that level's current distribution.
class BanditTreeSwap {
public:
    BanditTreeSwap(BanditTreeSwapParams params, Rng* rng)
        : params_(params), rng_(rng) {
        if (params_.n_actions < 1) throw std::invalid_argument("BanditTreeSwap: need at least one action");
        if (params_.branching < 2) throw std::invalid_argument("BanditTreeSwap: branching must be at least 2");
        if (params_.depth < 1) throw std::invalid_argument("BanditTreeSwap: depth must be at least 1");
        if (rng == nullptr) throw std::invalid_argument("BanditTreeSwap: rng required");
        if (params_.horizon < 1 || params_.horizon % params_.n_actions != 0)
            throw std::invalid_argument("BanditTreeSwap: horizon must be a positive multiple of the action count");
        const std::int64_t blocks = params_.horizon / params_.n_actions;
        while (blocks > pow_saturated(params_.branching, params_.depth)) ++params_.depth;
        levels_.resize(static_cast<std::size_t>(params_.depth));
    }

    const BanditTreeSwapParams& params() const { return params_; }
    std::int64_t round_index() const { return t_; }
    const std::vector<BanditLevelEvent>& update_events() const { return update_events_; }

    const MixedAction& level_distribution(int level) const {
        const auto& lv = levels_.at(static_cast<std::size_t>(level - 1));
        if (!lv.instance) throw std::logic_error("BanditTreeSwap: level not yet instantiated");
        return lv.instance->distribution();
    }

    // Advance one round: returns the action to play. `prev_reward` is the
    // observed reward of the previously returned action (absent at t=1).
    int round(std::optional<double> prev_reward) {
        if (t_ >= params_.horizon) throw std::runtime_error("horizon exhausted");
        ++t_;
        if (t_ == 1) {
            if (prev_reward) throw std::invalid_argument("BanditTreeSwap: unexpected reward at round 1");
        } else {
            store_pending(prev_reward);
        }

        const std::int64_t block_step = (t_ - 1) / params_.n_actions;
        if (t_ == 1 || (t_ - 1) % params_.n_actions == 0) {
            const std::vector<int> sigma = base_m_digits(block_step, params_.branching, params_.depth);
            int boundary_from = params_.depth;
            while (boundary_from > 1 && sigma[static_cast<std::size_t>(boundary_from - 1)] == 0) --boundary_from;
            for (int h = params_.depth; h >= boundary_from; --h) {
                Level& lv = levels_[static_cast<std::size_t>(h - 1)];
                if (sigma[static_cast<std::size_t>(h - 1)] > 0) {
                    lv.instance->update();
                    update_events_.push_back({h, t_});
                } else {
                    lv.instance = make_instance(h);
                }
            }
        }

        pending_level_ = 1 + static_cast<int>(rng_->uniform_int(static_cast<std::uint64_t>(params_.depth)));
        pending_action_ =
            rng_->sample_weights(levels_[static_cast<std::size_t>(pending_level_ - 1)].instance->distribution().probs());
        has_pending_ = true;
        return pending_action_;
    }

    // Deliver the final round's observed reward after the horizon ends.
    void finish(std::optional<double> last_reward) {
        if (t_ != params_.horizon) throw std::runtime_error("BanditTreeSwap: run not complete");
        store_pending(last_reward);
    }

private:
    struct Level {
        std::unique_ptr<Exp3Multi> instance;
    };

    std::unique_ptr<Exp3Multi> make_instance(int level) {
        const int k = bandit_samples_for_level(params_, level);
        const double eta = 1.0 / std::sqrt(static_cast<double>(params_.branching));
        const double scale = params_.gamma_uses_total_horizon ? static_cast<double>(params_.horizon)
                                                              : static_cast<double>(params_.branching);
        const double gamma = 1.0 / (static_cast<double>(k) * std::pow(scale, 1.0 / 6.0));
        return std::make_unique<Exp3Multi>(params_.n_actions, params_.branching, eta, gamma, k);
    }

    void store_pending(std::optional<double> reward) {
        if (!has_pending_) throw std::invalid_argument("BanditTreeSwap: no pending action");
        if (!reward) throw std::invalid_argument("BanditTreeSwap: missing reward");
        if (*reward < -kSimplexTol || *reward > 1.0 + kSimplexTol)
            throw std::invalid_argument("reward out of range");
        levels_[static_cast<std::size_t>(pending_level_ - 1)].instance->store_sample(pending_action_, *reward);
        has_pending_ = false;
    }

    BanditTreeSwapParams params_;
    Rng* rng_;
    std::vector<Level> levels_;
    std::vector<BanditLevelEvent> update_events_;
    std::int64_t t_ = 0;
    int pending_level_ = 0;
    int pending_action_ = 0;
    bool has_pending_ = false;
};

} // namespace swapregret
