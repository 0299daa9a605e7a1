#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "swapregret/rng.hpp"
#include "swapregret/types.hpp"

namespace swapregret {

// Finite-horizon external-regret learner over N actions, full information.
// act() may be called any number of times between updates; update() accepts
// at most `horizon` calls.
class Learner {
public:
    virtual ~Learner() = default;
    virtual MixedAction act() = 0;
    virtual void update(const RewardVector& reward) = 0;
};

using LearnerFactory = std::function<std::unique_ptr<Learner>()>;

inline double mwu_default_eta(int n_actions, std::int64_t horizon) {
    return std::sqrt(std::log(static_cast<double>(n_actions)) / static_cast<double>(horizon));
}

// Multiplicative weights: play softmax(eta * cumulative reward).
class Mwu : public Learner {
public:
    Mwu(int n_actions, std::int64_t horizon, double eta = 0.0)
        : n_(n_actions),
          horizon_(horizon),
          eta_(eta > 0.0 ? eta : mwu_default_eta(n_actions, horizon)),
          cum_reward_(static_cast<std::size_t>(n_actions), 0.0) {
        if (n_actions < 1) throw std::invalid_argument("Mwu: need at least one action");
        if (horizon < 1) throw std::invalid_argument("Mwu: horizon must be positive");
    }

    MixedAction act() override {
        // Max-subtraction keeps exp() in range; scores reach eta * horizon.
        double mx = cum_reward_[0];
        for (double v : cum_reward_) mx = std::max(mx, v);
        std::vector<double> p(cum_reward_.size());
        double sum = 0.0;
        for (std::size_t i = 0; i < cum_reward_.size(); ++i) {
            p[i] = std::exp(eta_ * (cum_reward_[i] - mx));
            sum += p[i];
        }
        for (double& v : p) v /= sum;
        return MixedAction(std::move(p));
    }

    void update(const RewardVector& reward) override {
        if (reward.size() != n_) throw std::invalid_argument("Mwu: reward dimension mismatch");
        if (updates_ >= horizon_) throw std::runtime_error("horizon exhausted");
        if (reward.lo() < -kSimplexTol || reward.hi() > 1.0 + kSimplexTol)
            throw std::invalid_argument("reward out of range");
        for (int i = 0; i < n_; ++i) cum_reward_[static_cast<std::size_t>(i)] += reward[i];
        ++updates_;
    }

    double eta() const { return eta_; }
    std::int64_t updates() const { return updates_; }

private:
    int n_;
    std::int64_t horizon_;
    double eta_;
    std::vector<double> cum_reward_;
    std::int64_t updates_ = 0;
};

// MWU variant that plays the empirical distribution of `samples` i.i.d.
// draws from the underlying MWU action. The output is samples-sparse with
// entries that are multiples of 1/samples.
class MwuSamp : public Learner {
public:
    MwuSamp(int n_actions, std::int64_t horizon, int samples, Rng* rng, double eta = 0.0)
        : base_(n_actions, horizon, eta), samples_(samples), rng_(rng) {
        if (samples < 1) throw std::invalid_argument("MwuSamp: need at least one sample");
        if (rng == nullptr) throw std::invalid_argument("MwuSamp: rng required");
    }

    MixedAction act() override {
        const MixedAction base = base_.act();
        std::vector<double> counts(static_cast<std::size_t>(base.size()), 0.0);
        for (int s = 0; s < samples_; ++s)
            counts[static_cast<std::size_t>(rng_->sample_weights(base.probs()))] += 1.0;
        for (double& c : counts) c /= static_cast<double>(samples_);
        return MixedAction(std::move(counts));
    }

    void update(const RewardVector& reward) override { base_.update(reward); }

private:
    Mwu base_;
    int samples_;
    Rng* rng_;
};

// Multi-sample implicit-exploration exponential-weights bandit learner.
// Within a round, any number of samples (a, u) drawn from the current
// distribution are buffered; update() folds them into an importance-weighted
// loss estimate
//     Yhat_a = (1/K) * sum_k 1{a_k = a} (1 - u_k) / (p[a] + gamma)
// (K is the nominal per-round sample count fixed at construction, even when
// the realized count differs), then advances the distribution to
// softmax(-eta * Lhat).
class Exp3Multi {
public:
    Exp3Multi(int n_actions, std::int64_t horizon, double eta, double gamma, int nominal_samples)
        : n_(n_actions),
          horizon_(horizon),
          eta_(eta),
          gamma_(gamma),
          nominal_k_(nominal_samples),
          cum_loss_(static_cast<std::size_t>(n_actions), 0.0),
          dist_(MixedAction::uniform(n_actions)) {
        if (n_actions < 1) throw std::invalid_argument("Exp3Multi: need at least one action");
        if (horizon < 1) throw std::invalid_argument("Exp3Multi: horizon must be positive");
        if (!(eta > 0.0)) throw std::invalid_argument("Exp3Multi: eta must be positive");
        if (!(gamma > 0.0)) throw std::invalid_argument("Exp3Multi: gamma must be positive");
        if (nominal_samples < 1) throw std::invalid_argument("Exp3Multi: nominal sample count must be positive");
    }

    const MixedAction& distribution() const { return dist_; }
    double eta() const { return eta_; }
    double gamma() const { return gamma_; }
    int nominal_samples() const { return nominal_k_; }
    std::int64_t round_index() const { return round_; }

    void store_sample(int action, double reward) {
        if (action < 0 || action >= n_) throw std::invalid_argument("Exp3Multi: action out of range");
        if (reward < -kSimplexTol || reward > 1.0 + kSimplexTol)
            throw std::invalid_argument("reward out of range");
        buffer_.emplace_back(action, std::min(1.0, std::max(0.0, reward)));
    }

    // Ends the current round; an empty buffer is a legal zero-sample round.
    const MixedAction& update() {
        if (round_ >= horizon_) throw std::runtime_error("horizon exhausted");
        for (const auto& [a, u] : buffer_) {
            const double y = (1.0 - u) / (dist_[a] + gamma_); // nonnegative
            cum_loss_[static_cast<std::size_t>(a)] += y / static_cast<double>(nominal_k_);
        }
        buffer_.clear();
        ++round_;
        refresh_distribution();
        return dist_;
    }

private:
    void refresh_distribution() {
        double mn = cum_loss_[0];
        for (double v : cum_loss_) mn = std::min(mn, v);
        std::vector<double> p(cum_loss_.size());
        double sum = 0.0;
        for (std::size_t i = 0; i < cum_loss_.size(); ++i) {
            p[i] = std::exp(-eta_ * (cum_loss_[i] - mn));
            sum += p[i];
        }
        for (double& v : p) v /= sum;
        dist_ = MixedAction(std::move(p));
    }

    int n_;
    std::int64_t horizon_;
    double eta_;
    double gamma_;
    int nominal_k_;
    std::vector<double> cum_loss_;
    std::vector<std::pair<int, double>> buffer_;
    MixedAction dist_;
    std::int64_t round_ = 0;
};

} // namespace swapregret
