#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "orgsel/batching.hpp"
#include "orgsel/distributions.hpp"
#include "orgsel/errors.hpp"
#include "orgsel/model.hpp"
#include "orgsel/random.hpp"
#include "orgsel/rules.hpp"

namespace orgsel {

/// One simulated scenario. Defaults are the base case: 100 projects,
/// budget 10, three agents around expertise 5, types U(0,10), qualities U(-5,5).
struct ScenarioConfig {
    std::size_t n = 100;
    std::size_t m = 10;
    std::size_t agents = 3;
    double mean_expertise = 5.0;
    double breadth = 0.0;
    DistributionSpec type_dist = DistributionSpec::uniform(0.0, 10.0);
    DistributionSpec quality_dist = DistributionSpec::uniform(-5.0, 5.0);
    RuleSpec rule = RuleSpec::individual();
    std::optional<BatchingSpec> batching{};
    std::size_t replications = 20000;
    std::uint64_t master_seed = 1;

    void validate() const {
        if (n == 0) throw ConfigurationError("n must be at least 1");
        if (m == 0 || m > n) throw ConfigurationError("budget m must satisfy 1 <= m <= n");
        if (agents == 0) throw ConfigurationError("the panel needs at least one agent");
        if (!(breadth >= 0.0)) throw ConfigurationError("knowledge breadth must be non-negative");
        if (replications == 0) throw ConfigurationError("replications must be at least 1");
        type_dist.validate();
        quality_dist.validate();
        rule.validate();
        if (rule.designated_agent && *rule.designated_agent >= agents)
            throw ConfigurationError("designated agent index out of range");
        if (batching) {
            batching->validate(n);
            if (batching->decision == BatchDecision::decentralized &&
                decentralized_quota(m, batching->batch_size) == 0)
                throw ConfigurationError("decentralized quota round(m/c) is zero");
        }
    }
};

struct EnsembleStats {
    double mean_total_performance = 0.0;
    double std_error = 0.0;
    /// Entry k: fraction of replications that selected the project of true rank k+1.
    std::vector<double> rank_selection_frequency;
    double best_project_hit_rate = 0.0;
    /// Mean number of projects approved by every agent (unbatched voting only).
    std::optional<double> mean_full_vote_count;
    /// Differs from m only for decentralized batching with rounded quotas.
    double mean_portfolio_size = 0.0;
    std::size_t replications = 0;
};

struct ReplicationOutcome {
    double total_quality = 0.0;
    std::vector<std::size_t> selected_true_ranks;  // 0-based true-quality ranks
    std::optional<std::size_t> full_votes;
};

/// 0-based true-quality rank of every project: 0 for the best, ties by index.
inline std::vector<std::size_t> true_quality_ranks(std::span<const double> qualities) {
    std::vector<std::size_t> order(qualities.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return qualities[a] > qualities[b]; });
    std::vector<std::size_t> rank(qualities.size());
    for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = k;
    return rank;
}

/// Panel used for a scenario: the base panel, or the enlarged one under batching.
inline AgentPanel scenario_panel(const ScenarioConfig& config) {
    if (!config.batching) return build_panel(config.agents, config.mean_expertise, config.breadth);
    return scale_panel(batched_base_agents(config.rule, config.agents), config.n, config.batching->batch_size,
                       config.mean_expertise, config.breadth);
}

/// One replication on its own substream of (master_seed, index).
inline ReplicationOutcome run_replication(const ScenarioConfig& config, std::size_t index) {
    RandomStream rng = derive_stream(config.master_seed, index);
    const ProjectSlate slate = sample_slate(config.n, config.type_dist, config.quality_dist, rng);
    const AgentPanel panel = scenario_panel(config);
    const Portfolio portfolio =
        config.batching ? batched_select(slate, panel, *config.batching, config.rule, config.m, rng)
                        : apply_rule(config.rule, slate, panel, config.mean_expertise, config.m, rng);

    ReplicationOutcome outcome;
    outcome.total_quality = slate.total_quality(portfolio.selected);
    const auto ranks = true_quality_ranks(slate.qualities());
    outcome.selected_true_ranks.reserve(portfolio.selected.size());
    for (std::size_t i : portfolio.selected) outcome.selected_true_ranks.push_back(ranks[i]);
    if (config.rule.kind == RuleKind::voting && !config.batching) {
        const auto full = static_cast<double>(panel.size());
        outcome.full_votes = static_cast<std::size_t>(
            std::count(portfolio.aggregate_scores.begin(), portfolio.aggregate_scores.end(), full));
    }
    return outcome;
}

/// Monte Carlo estimate of expected portfolio performance.
///
/// Replication i always uses derive_stream(master_seed, i) and per-replication
/// results are reduced in index order, so the output is bit-identical for any
/// worker count.
inline EnsembleStats run_ensemble(const ScenarioConfig& config, unsigned workers = 1) {
    config.validate();
    const std::size_t reps = config.replications;
    const std::size_t n = config.n;

    std::vector<double> totals(reps, 0.0);
    std::vector<std::uint32_t> full_votes(reps, 0);
    std::vector<std::uint32_t> sizes(reps, 0);
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::size_t>(reps, 1024))));
    std::vector<std::vector<std::uint64_t>> rank_counts(workers, std::vector<std::uint64_t>(n, 0));

    struct Failure {
        std::size_t index = 0;
        std::string what;
    };
    std::vector<std::optional<Failure>> failures(workers);

    auto run_block = [&](unsigned w) {
        const std::size_t begin = reps * w / workers;
        const std::size_t end = reps * (w + 1) / workers;
        for (std::size_t i = begin; i < end; ++i) {
            try {
                const ReplicationOutcome out = run_replication(config, i);
                totals[i] = out.total_quality;
                sizes[i] = static_cast<std::uint32_t>(out.selected_true_ranks.size());
                if (out.full_votes) full_votes[i] = static_cast<std::uint32_t>(*out.full_votes);
                for (std::size_t r : out.selected_true_ranks) ++rank_counts[w][r];
            } catch (const std::exception& e) {
                failures[w] = Failure{i, e.what()};
                return;
            } catch (...) {
                failures[w] = Failure{i, "unknown exception"};
                return;
            }
        }
    };

    if (workers == 1) {
        run_block(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_block, w);
    }

    const Failure* first = nullptr;
    for (const auto& f : failures)
        if (f && (!first || f->index < first->index)) first = &*f;
    if (first) throw ReplicationError(first->index, first->what);

    EnsembleStats stats;
    stats.replications = reps;
    const double count = static_cast<double>(reps);
    double sum = 0.0;
    for (double t : totals) sum += t;
    stats.mean_total_performance = sum / count;
    if (reps > 1) {
        double squares = 0.0;
        for (double t : totals) squares += (t - stats.mean_total_performance) * (t - stats.mean_total_performance);
        stats.std_error = std::sqrt(squares / (count - 1.0) / count);
    }

    stats.rank_selection_frequency.assign(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        std::uint64_t c = 0;
        for (const auto& counts : rank_counts) c += counts[r];
        stats.rank_selection_frequency[r] = static_cast<double>(c) / count;
    }
    stats.best_project_hit_rate = stats.rank_selection_frequency.front();

    std::uint64_t size_total = 0;
    for (auto s : sizes) size_total += s;
    stats.mean_portfolio_size = static_cast<double>(size_total) / count;

    if (config.rule.kind == RuleKind::voting && !config.batching) {
        std::uint64_t votes = 0;
        for (auto v : full_votes) votes += v;
        stats.mean_full_vote_count = static_cast<double>(votes) / count;
    }
    return stats;
}

}  // namespace orgsel
