#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "swapregret/games.hpp"
#include "swapregret/types.hpp"

namespace swapregret {

// Shortest-exact decimal for a double (round-trips bit-exactly).
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // prefer the shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char probe[40];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
        if (std::strtod(probe, nullptr) == v) return probe;
    }
    return buf;
}

// ---------------------------------------------------------------------------
// Transcript CSV
// ---------------------------------------------------------------------------
// Full-information rows:  t,prob_0..prob_{N-1},reward_0..reward_{N-1}
// Bandit rows:            t,action,reward_0..reward_{N-1}

inline void write_transcript_csv(std::ostream& out, const Transcript& tr) {
    tr.validate();
    const int n = tr.n_actions;
    const bool bandit = tr.bandit_actions.has_value();
    out << "t";
    if (bandit) {
        out << ",action";
    } else {
        for (int i = 0; i < n; ++i) out << ",prob_" << i;
    }
    for (int i = 0; i < n; ++i) out << ",reward_" << i;
    out << "\n";
    for (std::int64_t t = 0; t < tr.rounds(); ++t) {
        out << (t + 1);
        if (bandit) {
            out << ',' << (*tr.bandit_actions)[static_cast<std::size_t>(t)];
        } else {
            for (int i = 0; i < n; ++i) out << ',' << format_double(tr.plays[static_cast<std::size_t>(t)][i]);
        }
        for (int i = 0; i < n; ++i) out << ',' << format_double(tr.rewards[static_cast<std::size_t>(t)][i]);
        out << "\n";
    }
}

inline void write_transcript_csv(const std::string& path, const Transcript& tr) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_transcript_csv(out, tr);
}

inline Transcript read_transcript_csv(std::istream& in, double reward_lo = 0.0, double reward_hi = 1.0) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty transcript");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    if (header.size() < 2 || header[0] != "t") throw std::invalid_argument("malformed transcript");
    const bool bandit = header[1] == "action";
    int n = 0;
    for (const auto& h : header)
        if (h.rfind("reward_", 0) == 0) ++n;
    if (n == 0) throw std::invalid_argument("malformed transcript");
    const std::size_t expected_cols = 1 + (bandit ? 1 : static_cast<std::size_t>(n)) + static_cast<std::size_t>(n);
    if (header.size() != expected_cols) throw std::invalid_argument("malformed transcript");

    Transcript tr;
    tr.n_actions = n;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != expected_cols) throw std::invalid_argument("malformed transcript");
        std::size_t at = 1;
        std::vector<double> rewards(static_cast<std::size_t>(n));
        if (bandit) {
            const int action = std::stoi(cells[at++]);
            for (int i = 0; i < n; ++i) rewards[static_cast<std::size_t>(i)] = std::stod(cells[at++]);
            tr.append_bandit(action, RewardVector(std::move(rewards), reward_lo, reward_hi));
        } else {
            std::vector<double> probs(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) probs[static_cast<std::size_t>(i)] = std::stod(cells[at++]);
            for (int i = 0; i < n; ++i) rewards[static_cast<std::size_t>(i)] = std::stod(cells[at++]);
            tr.append(MixedAction(std::move(probs)), RewardVector(std::move(rewards), reward_lo, reward_hi));
        }
    }
    tr.validate();
    return tr;
}

inline Transcript read_transcript_csv_file(const std::string& path, double reward_lo = 0.0,
                                           double reward_hi = 1.0) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_transcript_csv(in, reward_lo, reward_hi);
}

// ---------------------------------------------------------------------------
// Game and equilibrium JSON
// ---------------------------------------------------------------------------
// Game:        {"players": m, "actions": n, "payoffs": [m][n^m] row-major}
// Equilibrium: {"support": [{"profile": [...], "weight": w}, ...],
//               "ce_gap": [...], "ledger": {"queries": q, "comm_bits": b}}

inline nlohmann::json game_to_json(const NormalFormGame& game) {
    nlohmann::json j;
    j["players"] = game.players();
    j["actions"] = game.actions();
    j["payoffs"] = game.payoffs();
    return j;
}

inline NormalFormGame game_from_json(const nlohmann::json& j) {
    return NormalFormGame(j.at("players").get<int>(), j.at("actions").get<int>(),
                          j.at("payoffs").get<std::vector<std::vector<double>>>());
}

inline NormalFormGame load_game(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return game_from_json(j);
}

inline nlohmann::json equilibrium_to_json(const CorrelatedDistribution& mu,
                                          const std::vector<double>& gaps, const ResourceLedger& ledger) {
    nlohmann::json support = nlohmann::json::array();
    for (const auto& [profile, weight] : mu.support())
        support.push_back({{"profile", profile}, {"weight", weight}});
    return nlohmann::json{{"support", support},
                          {"ce_gap", gaps},
                          {"ledger", {{"queries", ledger.queries}, {"comm_bits", ledger.comm_bits}}}};
}

inline CorrelatedDistribution equilibrium_from_json(const nlohmann::json& j, int players, int actions) {
    std::vector<std::pair<std::vector<int>, double>> entries;
    for (const auto& item : j.at("support"))
        entries.emplace_back(item.at("profile").get<std::vector<int>>(), item.at("weight").get<double>());
    return CorrelatedDistribution(std::move(entries), players, actions);
}

inline void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << j.dump(2) << "\n";
}

inline nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

} // namespace swapregret
