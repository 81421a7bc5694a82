#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "orgsel/errors.hpp"
#include "orgsel/model.hpp"
#include "orgsel/random.hpp"
#include "orgsel/rules.hpp"

// Batched evaluation: the slate is cut into groups of about c projects, each
// evaluated by its own group of agents only. The organization then either
// selects globally from the within-group scores (centralized) or lets every
// group pick its own quota (decentralized).

namespace orgsel {

enum class BatchAssignment { random, expertise_matched };
enum class BatchDecision { centralized, decentralized };

inline std::string_view to_string(BatchAssignment a) {
    return a == BatchAssignment::random ? "random" : "expertise";
}

inline std::string_view to_string(BatchDecision d) {
    return d == BatchDecision::centralized ? "centralized" : "decentralized";
}

struct BatchingSpec {
    std::size_t batch_size = 10;
    BatchAssignment assignment = BatchAssignment::random;
    BatchDecision decision = BatchDecision::centralized;

    void validate(std::size_t n) const {
        if (batch_size == 0 || batch_size > n) throw ConfigurationError("batch size c must satisfy 1 <= c <= n");
    }

    bool operator==(const BatchingSpec&) const = default;
};

/// "c/assignment/decision", e.g. "10/expertise/decentralized".
inline std::string to_string(const BatchingSpec& b) {
    return std::to_string(b.batch_size) + "/" + std::string(to_string(b.assignment)) + "/" +
           std::string(to_string(b.decision));
}

/// n/c rounded to the nearest integer (halves away from zero), at least 1.
inline std::size_t batch_count(std::size_t n, std::size_t c) {
    if (c == 0) throw ConfigurationError("batch size must be positive");
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(n) / static_cast<double>(c))));
}

/// Per-group selection quota under decentralization: m/c rounded.
inline std::size_t decentralized_quota(std::size_t m, std::size_t c) {
    if (c == 0) throw ConfigurationError("batch size must be positive");
    return static_cast<std::size_t>(std::lround(static_cast<double>(m) / static_cast<double>(c)));
}

/// Agents per batch group: one for single-evaluator rules, the full base
/// panel size for collective rules.
inline std::size_t batched_base_agents(const RuleSpec& rule, std::size_t agents) {
    return rule.is_collective() ? agents : 1;
}

/// Panel enlarged by the number of batches so every project keeps its number of evaluations.
inline AgentPanel scale_panel(std::size_t base_agents, std::size_t n, std::size_t c, double mean_expertise,
                              double breadth) {
    if (base_agents == 0) throw ConfigurationError("base panel size must be at least 1");
    BatchingSpec{c}.validate(n);
    return build_panel(base_agents * batch_count(n, c), mean_expertise, breadth);
}

/// Project groups and the panel indices of the agents evaluating each group.
struct BatchPlan {
    std::vector<std::vector<std::size_t>> projects;
    std::vector<std::vector<std::size_t>> agents;

    std::size_t groups() const noexcept { return projects.size(); }
};

namespace detail {

// Chunks an ordering of all projects into `groups` runs of c; the last group
// absorbs any remainder left by rounding n/c.
inline std::vector<std::vector<std::size_t>> chunk(const std::vector<std::size_t>& order, std::size_t c,
                                                   std::size_t groups) {
    std::vector<std::vector<std::size_t>> out(groups);
    for (std::size_t g = 0; g < groups; ++g) {
        const std::size_t begin = g * c;
        const std::size_t end = g + 1 == groups ? order.size() : std::min(order.size(), begin + c);
        if (begin < end) out[g].assign(order.begin() + static_cast<std::ptrdiff_t>(begin),
                                       order.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return out;
}

inline std::vector<std::vector<std::size_t>> consecutive_agents(const std::vector<std::size_t>& agent_order,
                                                                std::size_t base_agents, std::size_t groups) {
    if (agent_order.size() < base_agents * groups)
        throw ConfigurationError("panel too small for the number of batch groups");
    std::vector<std::vector<std::size_t>> out(groups);
    for (std::size_t g = 0; g < groups; ++g)
        out[g].assign(agent_order.begin() + static_cast<std::ptrdiff_t>(g * base_agents),
                      agent_order.begin() + static_cast<std::ptrdiff_t>((g + 1) * base_agents));
    return out;
}

}  // namespace detail

/// Uniformly random partition of the projects into groups of c; group g is
/// evaluated by panel agents g*base_agents .. (g+1)*base_agents - 1.
inline BatchPlan assign_random(std::size_t n, std::size_t c, std::size_t groups, std::size_t base_agents,
                               RandomStream& rng) {
    if (groups == 0 || c == 0) throw ConfigurationError("batching needs at least one group of positive size");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> agent_order(base_agents * groups);
    std::iota(agent_order.begin(), agent_order.end(), std::size_t{0});
    return {detail::chunk(order, c, groups), detail::consecutive_agents(agent_order, base_agents, groups)};
}

/// Ordinal matching: the k-th block of c projects in ascending type order goes
/// to the k-th block of base_agents agents in ascending expertise order.
inline BatchPlan assign_expertise_matched(const ProjectSlate& slate, const AgentPanel& panel, std::size_t c,
                                          std::size_t base_agents) {
    const std::size_t groups = batch_count(slate.size(), c);
    std::vector<std::size_t> order(slate.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return slate.type(a) < slate.type(b); });
    std::vector<std::size_t> agent_order(panel.size());
    std::iota(agent_order.begin(), agent_order.end(), std::size_t{0});
    std::stable_sort(agent_order.begin(), agent_order.end(),
                     [&](std::size_t a, std::size_t b) { return panel.expertise(a) < panel.expertise(b); });
    return {detail::chunk(order, c, groups), detail::consecutive_agents(agent_order, base_agents, groups)};
}

/// Within-group aggregate score of every project in the group.
inline std::vector<double> group_scores(const ProjectSlate& slate, const AgentPanel& panel, const RuleSpec& rule,
                                        const std::vector<std::size_t>& projects,
                                        const std::vector<std::size_t>& agents, RandomStream& rng) {
    std::vector<double> types(projects.size());
    for (std::size_t k = 0; k < projects.size(); ++k) types[k] = slate.type(projects[k]);
    std::vector<double> expertise(agents.size());
    for (std::size_t a = 0; a < agents.size(); ++a) expertise[a] = panel.expertise(agents[a]);

    std::vector<double> scores(projects.size());
    auto single_evaluator = [&](double e) {
        for (std::size_t k = 0; k < projects.size(); ++k)
            scores[k] = perceive_one(slate.quality(projects[k]), types[k], e, rng);
    };

    switch (rule.kind) {
        case RuleKind::individual:
            single_evaluator(expertise.front());
            return scores;
        case RuleKind::portfolio_expert:
            if (rule.designated_agent)
                throw ConfigurationError("a designated portfolio expert is not supported under batching");
            single_evaluator(expertise[portfolio_expert_agent(types, expertise, rng)]);
            return scores;
        case RuleKind::delegation: {
            const auto assigned = delegation_assignment(types, expertise, rule.delegation_error, rng);
            for (std::size_t k = 0; k < projects.size(); ++k)
                scores[k] = perceive_one(slate.quality(projects[k]), types[k], expertise[assigned[k]], rng);
            return scores;
        }
        default:
            break;
    }
    PerceptionMatrix perceptions(agents.size(), projects.size());
    for (std::size_t a = 0; a < agents.size(); ++a)
        for (std::size_t k = 0; k < projects.size(); ++k)
            perceptions(a, k) = perceive_one(slate.quality(projects[k]), types[k], expertise[a], rng);
    // Ranking positions run over the group's own projects: scores are c_g - pos.
    return collective_scores(rule.kind, perceptions, rng);
}

/// Selection from a batch plan. Centralized: global top m over within-group
/// scores. Decentralized: each group takes its top round(m/c); the portfolio
/// is the union, so its size is groups * quota.
inline Portfolio batched_select_with_plan(const ProjectSlate& slate, const AgentPanel& panel, const BatchPlan& plan,
                                          const BatchingSpec& batching, const RuleSpec& rule, std::size_t m,
                                          RandomStream& rng) {
    rule.validate();
    const std::size_t n = slate.size();
    if (m == 0 || m > n) throw ConfigurationError("budget m must satisfy 1 <= m <= n");

    std::size_t quota = 0;
    if (batching.decision == BatchDecision::decentralized) {
        quota = decentralized_quota(m, batching.batch_size);
        if (quota == 0) throw ConfigurationError("decentralized quota round(m/c) is zero");
        for (const auto& group : plan.projects)
            if (group.size() < quota) throw ConfigurationError("decentralized quota exceeds a batch size");
    }

    std::vector<double> scores(n, 0.0);
    Portfolio result;
    for (std::size_t g = 0; g < plan.groups(); ++g) {
        const auto& projects = plan.projects[g];
        auto local = group_scores(slate, panel, rule, projects, plan.agents[g], rng);
        for (std::size_t k = 0; k < projects.size(); ++k) scores[projects[k]] = local[k];
        if (batching.decision == BatchDecision::decentralized) {
            const Portfolio pick = select_top_m(std::move(local), quota, rng);
            for (std::size_t k : pick.selected) result.selected.push_back(projects[k]);
        }
    }
    if (batching.decision == BatchDecision::centralized) return select_top_m(std::move(scores), m, rng);
    result.aggregate_scores = std::move(scores);
    return result;
}

inline BatchPlan make_batch_plan(const ProjectSlate& slate, const AgentPanel& panel, const BatchingSpec& batching,
                                 std::size_t base_agents, RandomStream& rng) {
    batching.validate(slate.size());
    const std::size_t groups = batch_count(slate.size(), batching.batch_size);
    if (batching.assignment == BatchAssignment::random)
        return assign_random(slate.size(), batching.batch_size, groups, base_agents, rng);
    return assign_expertise_matched(slate, panel, batching.batch_size, base_agents);
}

/// Batched selection. The panel is expected to come from scale_panel; each
/// group gets panel.size() / groups agents.
inline Portfolio batched_select(const ProjectSlate& slate, const AgentPanel& panel, const BatchingSpec& batching,
                                const RuleSpec& rule, std::size_t m, RandomStream& rng) {
    batching.validate(slate.size());
    const std::size_t groups = batch_count(slate.size(), batching.batch_size);
    if (panel.size() < groups) throw ConfigurationError("panel has fewer agents than batch groups");
    const BatchPlan plan = make_batch_plan(slate, panel, batching, panel.size() / groups, rng);
    return batched_select_with_plan(slate, panel, plan, batching, rule, m, rng);
}

}  // namespace orgsel
