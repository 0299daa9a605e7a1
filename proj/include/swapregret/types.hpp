#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace swapregret {

inline constexpr double kSimplexTol = 1e-9;

// One round's reward over N actions, with a declared closed range.
// Default range is [0,1]; the adaptive lower-bound adversary uses [-1,1].
class RewardVector {
public:
    RewardVector() = default;

    RewardVector(std::vector<double> values, double lo = 0.0, double hi = 1.0)
        : values_(std::move(values)), lo_(lo), hi_(hi) {
        if (values_.empty()) throw std::invalid_argument("RewardVector: empty");
        if (!(lo_ < hi_)) throw std::invalid_argument("RewardVector: bad range");
        for (double& v : values_) {
            if (v < lo_ - kSimplexTol || v > hi_ + kSimplexTol)
                throw std::invalid_argument("reward out of range");
            if (v < lo_) v = lo_;
            if (v > hi_) v = hi_;
        }
    }

    static RewardVector constant(int n, double value, double lo = 0.0, double hi = 1.0) {
        return RewardVector(std::vector<double>(static_cast<std::size_t>(n), value), lo, hi);
    }

    int size() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& values() const { return values_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }

    // Affine remap onto [0,1]; regrets are invariant to this up to the scale
    // factor 1/(hi-lo), which callers account for in reports.
    RewardVector remapped_to_unit() const {
        std::vector<double> out(values_.size());
        const double span = hi_ - lo_;
        for (std::size_t i = 0; i < values_.size(); ++i) out[i] = (values_[i] - lo_) / span;
        return RewardVector(std::move(out), 0.0, 1.0);
    }

private:
    std::vector<double> values_;
    double lo_ = 0.0;
    double hi_ = 1.0;
};

// A probability distribution over N actions. Inputs whose mass is within
// 1e-9 of 1 are renormalized exactly; anything further off is rejected.
class MixedAction {
public:
    MixedAction() = default;

    explicit MixedAction(std::vector<double> probs) : probs_(std::move(probs)) {
        if (probs_.empty()) throw std::invalid_argument("MixedAction: empty");
        double sum = 0.0;
        for (double& p : probs_) {
            if (p < -kSimplexTol) throw std::invalid_argument("MixedAction: negative probability");
            if (p < 0.0) p = 0.0;
            sum += p;
        }
        if (std::abs(sum - 1.0) > kSimplexTol)
            throw std::invalid_argument("MixedAction: probabilities sum to " + std::to_string(sum));
        if (sum != 1.0) {
            for (double& p : probs_) p /= sum;
        }
    }

    static MixedAction uniform(int n) {
        return MixedAction(std::vector<double>(static_cast<std::size_t>(n),
                                               1.0 / static_cast<double>(n)));
    }

    static MixedAction point_mass(int n, int action) {
        if (action < 0 || action >= n) throw std::invalid_argument("point_mass: action out of range");
        std::vector<double> p(static_cast<std::size_t>(n), 0.0);
        p[static_cast<std::size_t>(action)] = 1.0;
        return MixedAction(std::move(p));
    }

    int size() const { return static_cast<int>(probs_.size()); }
    double operator[](int i) const { return probs_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& probs() const { return probs_; }

    std::vector<int> support() const {
        std::vector<int> s;
        for (int i = 0; i < size(); ++i)
            if (probs_[static_cast<std::size_t>(i)] > 0.0) s.push_back(i);
        return s;
    }

    double expected_reward(const RewardVector& f) const {
        double r = 0.0;
        for (int i = 0; i < size(); ++i) r += probs_[static_cast<std::size_t>(i)] * f[i];
        return r;
    }

private:
    std::vector<double> probs_;
};

// Paired play/reward history over T rounds; the input to both regret oracles.
// Bandit histories store the sampled action index alongside its point-mass
// play, so one oracle serves both feedback models.
struct Transcript {
    int n_actions = 0;
    std::vector<MixedAction> plays;
    std::vector<RewardVector> rewards;
    std::optional<std::vector<int>> bandit_actions;

    std::int64_t rounds() const { return static_cast<std::int64_t>(plays.size()); }

    void append(MixedAction x, RewardVector f) {
        plays.push_back(std::move(x));
        rewards.push_back(std::move(f));
    }

    void append_bandit(int action, RewardVector f) {
        if (!bandit_actions) bandit_actions.emplace();
        bandit_actions->push_back(action);
        plays.push_back(MixedAction::point_mass(n_actions, action));
        rewards.push_back(std::move(f));
    }

    void validate() const {
        if (plays.empty()) throw std::invalid_argument("empty transcript");
        if (plays.size() != rewards.size()) throw std::invalid_argument("malformed transcript");
        if (bandit_actions && bandit_actions->size() != plays.size())
            throw std::invalid_argument("malformed transcript");
        for (std::size_t t = 0; t < plays.size(); ++t) {
            if (plays[t].size() != n_actions || rewards[t].size() != n_actions)
                throw std::invalid_argument("malformed transcript");
        }
    }
};

// Result of the exact swap-regret oracle.
struct SwapReport {
    double swap_regret = 0.0;
    std::vector<int> best_swap;          // per-action argmax target
    std::vector<double> per_action_gain; // nonnegative: identity swap is always available
};

// Digits of `value` in base m, most significant first, fixed width d.
inline std::vector<int> base_m_digits(std::int64_t value, int m, int d) {
    if (value < 0) throw std::invalid_argument("base_m_digits: negative value");
    if (m < 2) throw std::invalid_argument("base_m_digits: base must be at least 2");
    if (d < 1) throw std::invalid_argument("base_m_digits: width must be at least 1");
    std::vector<int> digits(static_cast<std::size_t>(d), 0);
    std::int64_t rest = value;
    for (int h = d - 1; h >= 0; --h) {
        digits[static_cast<std::size_t>(h)] = static_cast<int>(rest % m);
        rest /= m;
    }
    if (rest != 0) throw std::invalid_argument("address overflow");
    return digits;
}

// m^d saturated at a large sentinel, for horizon checks where m^d can
// vastly exceed any feasible horizon.
inline std::int64_t pow_saturated(std::int64_t m, int d) {
    constexpr std::int64_t kCap = std::int64_t(4) << 60;
    std::int64_t r = 1;
    for (int i = 0; i < d; ++i) {
        if (r > kCap / m) return kCap;
        r *= m;
    }
    return r;
}

} // namespace swapregret
