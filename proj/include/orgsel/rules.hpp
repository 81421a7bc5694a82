#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orgsel/errors.hpp"
#include "orgsel/model.hpp"
#include "orgsel/random.hpp"

namespace orgsel {

enum class RuleKind { individual, delegation, voting, averaging, ranking, portfolio_expert };

inline std::string_view to_string(RuleKind kind) {
    switch (kind) {
        case RuleKind::individual: return "individual";
        case RuleKind::delegation: return "delegation";
        case RuleKind::voting: return "voting";
        case RuleKind::averaging: return "averaging";
        case RuleKind::ranking: return "ranking";
        case RuleKind::portfolio_expert: return "portfolio-expert";
    }
    return "unknown";
}

inline RuleKind parse_rule_kind(std::string_view name) {
    for (RuleKind k : {RuleKind::individual, RuleKind::delegation, RuleKind::voting, RuleKind::averaging,
                       RuleKind::ranking, RuleKind::portfolio_expert})
        if (name == to_string(k)) return k;
    if (name == "portfolio_expert") return RuleKind::portfolio_expert;
    if (name == "borda") return RuleKind::ranking;
    throw ConfigurationError("unknown rule '" + std::string(name) + "'");
}

/// Which aggregation rule to apply, with its rule-specific parameters.
struct RuleSpec {
    RuleKind kind = RuleKind::individual;
    double delegation_error = 0.0;                  // delegation only
    std::optional<std::size_t> designated_agent{};  // portfolio-expert only

    static RuleSpec individual() { return {RuleKind::individual}; }
    static RuleSpec voting() { return {RuleKind::voting}; }
    static RuleSpec averaging() { return {RuleKind::averaging}; }
    static RuleSpec ranking() { return {RuleKind::ranking}; }
    static RuleSpec delegation(double r = 0.0) {
        RuleSpec spec{RuleKind::delegation, r};
        spec.validate();
        return spec;
    }
    static RuleSpec portfolio_expert(std::optional<std::size_t> agent = std::nullopt) {
        return {RuleKind::portfolio_expert, 0.0, agent};
    }

    void validate() const {
        if (kind == RuleKind::delegation && !(delegation_error >= 0.0 && delegation_error <= 1.0))
            throw ConfigurationError("delegation error must lie in [0, 1]");
        if (kind != RuleKind::delegation && delegation_error != 0.0)
            throw ConfigurationError("delegation error is only meaningful for the delegation rule");
        if (kind != RuleKind::portfolio_expert && designated_agent)
            throw ConfigurationError("a designated agent is only meaningful for the portfolio-expert rule");
    }

    bool is_collective() const noexcept {
        return kind == RuleKind::voting || kind == RuleKind::averaging || kind == RuleKind::ranking;
    }

    bool operator==(const RuleSpec&) const = default;
};

/// Selected projects (0-based indices, best aggregate score first) plus the
/// per-project aggregate the rule ranked them by.
struct Portfolio {
    std::vector<std::size_t> selected;
    std::vector<double> aggregate_scores;
};

namespace detail {

// Indices sorted by descending value, ties left in index order.
inline std::vector<std::size_t> descending_order(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    return order;
}

}  // namespace detail

/// Preference positions of one agent: 1 for the highest perceived quality.
/// Equal perceptions are put in uniformly random order.
inline std::vector<std::size_t> positions(std::span<const double> perceived, RandomStream& rng) {
    std::vector<std::size_t> order = detail::descending_order(perceived);
    for (std::size_t start = 0; start < order.size();) {
        std::size_t end = start + 1;
        while (end < order.size() && perceived[order[end]] == perceived[order[start]]) ++end;
        if (end - start > 1) shuffle(order.begin() + static_cast<std::ptrdiff_t>(start),
                                     order.begin() + static_cast<std::ptrdiff_t>(end), rng);
        start = end;
    }
    std::vector<std::size_t> pos(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k + 1;
    return pos;
}

/// Top-m selection by aggregate score. When the cut-off score is shared, the
/// free slots go to a uniformly random subset of the tied projects.
inline Portfolio select_top_m(std::vector<double> scores, std::size_t m, RandomStream& rng) {
    const std::size_t n = scores.size();
    if (m == 0 || m > n) throw ConfigurationError("budget m must satisfy 1 <= m <= n");
    const std::vector<std::size_t> order = detail::descending_order(scores);
    const double cutoff = scores[order[m - 1]];

    Portfolio result;
    result.selected.reserve(m);
    std::vector<std::size_t> tied;
    for (std::size_t i : order) {
        if (scores[i] > cutoff)
            result.selected.push_back(i);
        else if (scores[i] == cutoff)
            tied.push_back(i);
        else
            break;
    }
    const std::size_t free_slots = m - result.selected.size();
    if (tied.size() > free_slots) {
        // partial Fisher-Yates: the first free_slots entries become a uniform subset
        for (std::size_t k = 0; k < free_slots; ++k) {
            const std::size_t pick = k + rng.index(tied.size() - k);
            std::swap(tied[k], tied[pick]);
        }
    }
    result.selected.insert(result.selected.end(), tied.begin(),
                           tied.begin() + static_cast<std::ptrdiff_t>(free_slots));
    result.aggregate_scores = std::move(scores);
    return result;
}

/// Approval count: agents whose perception of the project is strictly positive.
inline std::vector<double> voting_scores(const PerceptionMatrix& perceptions) {
    std::vector<double> votes(perceptions.projects(), 0.0);
    for (std::size_t j = 0; j < perceptions.agents(); ++j) {
        const auto row = perceptions.row(j);
        for (std::size_t i = 0; i < row.size(); ++i)
            if (row[i] > 0.0) votes[i] += 1.0;
    }
    return votes;
}

inline std::vector<double> averaging_scores(const PerceptionMatrix& perceptions) {
    std::vector<double> sums(perceptions.projects(), 0.0);
    for (std::size_t j = 0; j < perceptions.agents(); ++j) {
        const auto row = perceptions.row(j);
        for (std::size_t i = 0; i < row.size(); ++i) sums[i] += row[i];
    }
    const double agents = static_cast<double>(perceptions.agents());
    for (double& s : sums) s /= agents;
    return sums;
}

/// Borda totals: each agent awards n - pos to every project.
inline std::vector<double> borda_scores(const PerceptionMatrix& perceptions, RandomStream& rng) {
    const std::size_t n = perceptions.projects();
    std::vector<double> totals(n, 0.0);
    for (std::size_t j = 0; j < perceptions.agents(); ++j) {
        const auto pos = positions(perceptions.row(j), rng);
        for (std::size_t i = 0; i < n; ++i) totals[i] += static_cast<double>(n - pos[i]);
    }
    return totals;
}

/// Scores of a collective rule (voting, averaging or ranking) from a full perception matrix.
inline std::vector<double> collective_scores(RuleKind kind, const PerceptionMatrix& perceptions, RandomStream& rng) {
    switch (kind) {
        case RuleKind::voting: return voting_scores(perceptions);
        case RuleKind::averaging: return averaging_scores(perceptions);
        case RuleKind::ranking: return borda_scores(perceptions, rng);
        default: break;
    }
    throw ConfigurationError("rule '" + std::string(to_string(kind)) + "' is not a collective rule");
}

/// Best-matched agent for a project type; equidistant agents are chosen uniformly.
inline std::size_t nearest_agent(double type, std::span<const double> expertise, RandomStream& rng) {
    double best = std::abs(type - expertise[0]);
    std::size_t count = 1;
    std::size_t choice = 0;
    for (std::size_t j = 1; j < expertise.size(); ++j) {
        const double d = std::abs(type - expertise[j]);
        if (d < best) {
            best = d;
            count = 1;
            choice = j;
        } else if (d == best) {
            ++count;
        }
    }
    if (count == 1) return choice;
    std::size_t k = rng.index(count);
    for (std::size_t j = 0; j < expertise.size(); ++j)
        if (std::abs(type - expertise[j]) == best && k-- == 0) return j;
    return choice;
}

/// Evaluating agent per project under delegation error r: the best-matched
/// agent with probability 1 - r(N-1)/N, otherwise one of the other N-1 agents
/// uniformly (each with probability r/N).
inline std::vector<std::size_t> delegation_assignment(std::span<const double> types,
                                                      std::span<const double> expertise, double r,
                                                      RandomStream& rng) {
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigurationError("delegation error must lie in [0, 1]");
    const std::size_t agents = expertise.size();
    const double miss = agents > 1 ? r * static_cast<double>(agents - 1) / static_cast<double>(agents) : 0.0;
    std::vector<std::size_t> assigned(types.size());
    for (std::size_t i = 0; i < types.size(); ++i) {
        std::size_t a = nearest_agent(types[i], expertise, rng);
        if (miss > 0.0 && rng.bernoulli(miss)) {
            const std::size_t other = rng.index(agents - 1);
            a = other < a ? other : other + 1;
        }
        assigned[i] = a;
    }
    return assigned;
}

/// Agent minimizing the summed mismatch over all projects (ties uniformly).
inline std::size_t portfolio_expert_agent(std::span<const double> types, std::span<const double> expertise,
                                          RandomStream& rng) {
    std::vector<double> mismatch(expertise.size(), 0.0);
    for (std::size_t j = 0; j < expertise.size(); ++j)
        for (double t : types) mismatch[j] += std::abs(t - expertise[j]);
    const double best = *std::min_element(mismatch.begin(), mismatch.end());
    std::vector<std::size_t> tied;
    for (std::size_t j = 0; j < mismatch.size(); ++j)
        if (mismatch[j] == best) tied.push_back(j);
    return tied.size() == 1 ? tied.front() : tied[rng.index(tied.size())];
}

inline Portfolio rule_individual(const ProjectSlate& slate, double mean_expertise, std::size_t m, RandomStream& rng) {
    std::vector<double> scores(slate.size());
    for (std::size_t i = 0; i < slate.size(); ++i)
        scores[i] = perceive_one(slate.quality(i), slate.type(i), mean_expertise, rng);
    return select_top_m(std::move(scores), m, rng);
}

inline Portfolio rule_delegation(const ProjectSlate& slate, const AgentPanel& panel, std::size_t m, double r,
                                 RandomStream& rng) {
    const auto assigned = delegation_assignment(slate.types(), panel.expertise(), r, rng);
    std::vector<double> scores(slate.size());
    for (std::size_t i = 0; i < slate.size(); ++i)
        scores[i] = perceive_one(slate.quality(i), slate.type(i), panel.expertise(assigned[i]), rng);
    return select_top_m(std::move(scores), m, rng);
}

inline Portfolio rule_voting(const ProjectSlate& slate, const AgentPanel& panel, std::size_t m, RandomStream& rng) {
    return select_top_m(voting_scores(perceive(slate, panel, rng)), m, rng);
}

inline Portfolio rule_averaging(const ProjectSlate& slate, const AgentPanel& panel, std::size_t m, RandomStream& rng) {
    return select_top_m(averaging_scores(perceive(slate, panel, rng)), m, rng);
}

inline Portfolio rule_ranking(const ProjectSlate& slate, const AgentPanel& panel, std::size_t m, RandomStream& rng) {
    const auto perceptions = perceive(slate, panel, rng);
    return select_top_m(borda_scores(perceptions, rng), m, rng);
}

/// One agent evaluates everything: the designated one, or else the agent with
/// the least total type mismatch.
inline Portfolio rule_portfolio_expert(const ProjectSlate& slate, const AgentPanel& panel, std::size_t m,
                                       std::optional<std::size_t> designated_agent, RandomStream& rng) {
    if (designated_agent && *designated_agent >= panel.size())
        throw ConfigurationError("designated agent index out of range");
    const std::size_t agent =
        designated_agent ? *designated_agent : portfolio_expert_agent(slate.types(), panel.expertise(), rng);
    return rule_individual(slate, panel.expertise(agent), m, rng);
}

/// Dispatch on the rule kind. The individual rule ignores the panel and uses
/// a single agent at mean_expertise.
inline Portfolio apply_rule(const RuleSpec& rule, const ProjectSlate& slate, const AgentPanel& panel,
                            double mean_expertise, std::size_t m, RandomStream& rng) {
    rule.validate();
    switch (rule.kind) {
        case RuleKind::individual: return rule_individual(slate, mean_expertise, m, rng);
        case RuleKind::delegation: return rule_delegation(slate, panel, m, rule.delegation_error, rng);
        case RuleKind::voting: return rule_voting(slate, panel, m, rng);
        case RuleKind::averaging: return rule_averaging(slate, panel, m, rng);
        case RuleKind::ranking: return rule_ranking(slate, panel, m, rng);
        case RuleKind::portfolio_expert:
            return rule_portfolio_expert(slate, panel, m, rule.designated_agent, rng);
    }
    throw ConfigurationError("unknown rule");
}

}  // namespace orgsel
