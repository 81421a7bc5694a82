#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "orgsel/analytics.hpp"
#include "orgsel/batching.hpp"
#include "orgsel/config.hpp"
#include "orgsel/ensemble.hpp"
#include "orgsel/errors.hpp"
#include "orgsel/rules.hpp"

namespace orgsel {

/// Column contract of every experiment's main CSV.
inline constexpr std::array<std::string_view, 13> kResultColumns{
    "experiment", "rule", "beta", "m", "n", "N", "r", "quality_dist", "type_dist",
    "replications", "seed", "mean_performance", "std_error"};

/// Column contract of the per-rank selection table (experiments with rank_table = true).
inline constexpr std::array<std::string_view, 9> kRankColumns{
    "experiment", "rule", "beta", "m", "n", "N", "r", "true_rank", "selection_probability"};

/// Column contract of a perception trace (table2).
inline constexpr std::array<std::string_view, 8> kTraceColumns{
    "project", "agent", "type", "quality", "expertise", "perceived", "position", "selected_by"};

/// Rule label used for analytic order-statistic maxima in result files.
inline constexpr std::string_view kTheoreticalMaxRule = "theoretical_max";

/// A rule as listed in an experiment, e.g. "delegation", "delegation:r=0.2",
/// "delegation:N=3" or "portfolio-expert:agent=2".
struct RuleEntry {
    RuleKind kind = RuleKind::individual;
    std::optional<double> delegation_error;
    std::optional<std::size_t> agents;
    std::optional<std::size_t> designated_agent;
};

inline RuleEntry parse_rule_entry(std::string_view token) {
    RuleEntry entry;
    std::vector<std::string> fields;
    std::string_view rest = token;
    while (true) {
        const auto colon = rest.find(':');
        fields.emplace_back(detail::trim(rest.substr(0, colon)));
        if (colon == std::string_view::npos) break;
        rest.remove_prefix(colon + 1);
    }
    entry.kind = parse_rule_kind(fields.front());
    for (std::size_t k = 1; k < fields.size(); ++k) {
        const auto eq = fields[k].find('=');
        if (eq == std::string::npos) throw ConfigurationError("rule option must be key=value: '" + fields[k] + "'");
        const std::string key(detail::trim(std::string_view(fields[k]).substr(0, eq)));
        const std::string_view value = detail::trim(std::string_view(fields[k]).substr(eq + 1));
        if (key == "r") {
            if (entry.kind != RuleKind::delegation) throw ConfigurationError("r applies to delegation only");
            entry.delegation_error = parse_scalar(value);
        } else if (key == "N") {
            entry.agents = parse_count_list(value).at(0);
        } else if (key == "agent") {
            if (entry.kind != RuleKind::portfolio_expert)
                throw ConfigurationError("agent applies to portfolio-expert only");
            entry.designated_agent = parse_count_list(value).at(0);
        } else {
            throw ConfigurationError("unknown rule option '" + key + "'");
        }
    }
    return entry;
}

enum class ExperimentKind { simulation, trace };

/// One cartesian sweep. Rows are produced sweep-major in the member order
/// quality_dists, type_dists, batchings, ns, ms, agent_counts, betas, then rules.
struct SweepPart {
    std::string label;
    std::vector<std::string> rules;
    std::vector<double> delegation_errors{0.0};
    std::vector<double> betas{0.0};
    std::vector<std::size_t> ms{10};
    std::vector<std::size_t> ns{100};
    std::vector<std::size_t> agent_counts{3};
    std::vector<DistributionSpec> quality_dists{DistributionSpec::uniform(-5.0, 5.0)};
    std::vector<DistributionSpec> type_dists{DistributionSpec::uniform(0.0, 10.0)};
    std::vector<std::optional<BatchingSpec>> batchings{std::nullopt};
    double mean_expertise = 5.0;
    bool theoretical_max = false;
    bool rank_table = false;
    bool skip_infeasible = false;
    std::size_t replications = 20000;
    std::uint64_t seed = 1;

    // trace experiments only: perceived[project][agent]
    std::vector<double> trace_types;
    std::vector<double> trace_qualities;
    std::vector<double> trace_expertise;
    std::vector<std::vector<double>> trace_perceptions;
};

struct ExperimentSpec {
    std::string name;
    std::string description;
    ExperimentKind kind = ExperimentKind::simulation;
    std::vector<SweepPart> parts;

    bool has_rank_table() const {
        for (const auto& p : parts)
            if (p.rank_table) return true;
        return false;
    }
};

namespace detail {

inline const std::map<std::string, std::pair<std::string_view, std::string_view>, std::less<>>& builtin_table() {
    static const std::map<std::string, std::pair<std::string_view, std::string_view>, std::less<>> table{
        {"fig2a", {"Portfolio performance vs knowledge breadth, m=10", R"(
rules = individual, delegation, voting, averaging, ranking
r = 0, 0.5, 1
beta = 0:5:0.25
m = 10
theoretical_max = true
)"}},
        {"fig2b", {"Portfolio performance vs knowledge breadth, m=30", R"(
rules = individual, delegation, voting, averaging, ranking
r = 0, 0.5, 1
beta = 0:5:0.25
m = 30
theoretical_max = true
)"}},
        {"fig3", {"Selection probability by true quality rank, Ranking vs Averaging", R"(
rules = ranking, averaging
beta = 0
m = 10
rank_table = true
)"}},
        {"fig4a", {"Averaging vs Ranking over the (m,n) grid, beta=0", R"(
rules = averaging, ranking
beta = 0
n = 2, 3, 4, 5, 6, 8, 10, 15, 20, 30, 50, 100
m = 1, 2, 3, 4, 5, 6, 8, 10, 15, 20, 30, 50, 100
infeasible = skip
)"}},
        {"fig4b", {"Averaging vs Ranking over the (m,n) grid, beta=5", R"(
rules = averaging, ranking
beta = 5
n = 2, 3, 4, 5, 6, 8, 10, 15, 20, 30, 50, 100
m = 1, 2, 3, 4, 5, 6, 8, 10, 15, 20, 30, 50, 100
infeasible = skip
)"}},
        {"fig5a", {"Shifted project types U(5,15)", R"(
rules = individual, delegation, voting, averaging, ranking
r = 0
beta = 0:5:0.25
m = 10
type_dist = uniform(5;15)
theoretical_max = true
)"}},
        {"fig5b", {"Shifted project types U(15,25), no overlap with expertise", R"(
rules = individual, delegation, voting, averaging, ranking
r = 0
beta = 0:5:0.25
m = 10
type_dist = uniform(15;25)
theoretical_max = true
)"}},
        {"fig6a", {"Crowds of 15 vs three error-free experts; crowd-size scan", R"(
rules = voting, averaging, ranking, delegation:N=3
r = 0
m = 10
[part beta-sweep]
N = 15
beta = 0:5:0.25
[part crowd-size]
N = 3:45:2
beta = 0, 10/3, 5
)"}},
        {"fig6b", {"Crowds of 45 vs three error-free experts", R"(
rules = voting, averaging, ranking, delegation:N=3
r = 0
m = 10
N = 45
beta = 0:5:0.25
)"}},
        {"fig8", {"Batched selection (c=10): random vs expertise assignment, centralized vs decentralized", R"(
rules = individual, delegation, voting, averaging, ranking
r = 0
beta = 0:5:0.25
m = 10
theoretical_max = true
[part random-centralized]
batching = 10/random/centralized
[part random-decentralized]
batching = 10/random/decentralized
[part expertise-centralized]
batching = 10/expertise/centralized
[part expertise-decentralized]
batching = 10/expertise/decentralized
)"}},
        {"fig10", {"Theoretical maxima: per-project E*_m vs m, and E* at m=1 vs n", R"(
rules =
theoretical_max = true
infeasible = skip
[part per-project]
n = 20, 50, 100
m = 1:100:1
[part single]
m = 1
n = 1:200:1
)"}},
        {"fig11", {"Theoretical maximum E* vs m for three uniform quality supports", R"(
rules =
theoretical_max = true
n = 100
m = 1:100:1
quality_dist = uniform(-6;4), uniform(-5;5), uniform(-4;6)
)"}},
        {"fig12", {"Budget and choice-set sensitivity at beta=0 and beta=5", R"(
rules = individual, delegation, ranking, averaging
r = 0
beta = 0, 5
theoretical_max = true
infeasible = skip
[part budget]
n = 20, 100
m = 1, 2, 3, 5, 10, 15, 20, 30, 50, 70, 100
[part choice-set]
m = 1
n = 1, 2, 3, 5, 10, 20, 30, 50, 70, 100, 150, 200
)"}},
        {"fig13", {"Truncated-normal and power-law project qualities", R"(
rules = individual, delegation, voting, averaging, ranking
r = 0, 0.5, 1
beta = 0:5:0.25
m = 10, 30
theoretical_max = true
[part truncnormal]
quality_dist = truncnormal(0;1;-5;5)
[part powerlaw]
quality_dist = powerlaw(-0.5;-5;5)
)"}},
        {"table2", {"Worked aggregation example: perceptions, positions, means and Borda sums", R"(
kind = trace
m = 1
types = 10, 5, 0
qualities = 3, 2, 1
expertise = 5, 5, 5
perceptions = 7.1, -11.7, 4.4 | 2.0, 2.0, 2.0 | 5.5, -4.1, -1.8
)"}},
    };
    return table;
}

inline std::vector<std::vector<double>> parse_matrix(std::string_view value) {
    std::vector<std::vector<double>> rows;
    while (true) {
        const auto bar = value.find('|');
        rows.push_back(parse_real_list(value.substr(0, bar)));
        if (bar == std::string_view::npos) break;
        value.remove_prefix(bar + 1);
    }
    return rows;
}

inline SweepPart build_part(const KeyValues& values, std::string label) {
    SweepPart part;
    part.label = std::move(label);
    for (const auto& [key, value] : values) {
        if (key == "description" || key == "kind") continue;
        if (key == "rules") part.rules = split_list(value);
        else if (key == "r") part.delegation_errors = parse_real_list(value);
        else if (key == "beta") part.betas = parse_real_list(value);
        else if (key == "m") part.ms = parse_count_list(value);
        else if (key == "n") part.ns = parse_count_list(value);
        else if (key == "N") part.agent_counts = parse_count_list(value);
        else if (key == "e_M") part.mean_expertise = parse_scalar(value);
        else if (key == "reps") part.replications = parse_count_list(value).at(0);
        else if (key == "seed") part.seed = std::stoull(std::string(value));
        else if (key == "theoretical_max") part.theoretical_max = parse_bool(value);
        else if (key == "rank_table") part.rank_table = parse_bool(value);
        else if (key == "infeasible") {
            if (value == "skip") part.skip_infeasible = true;
            else if (value == "error") part.skip_infeasible = false;
            else throw ConfigurationError("infeasible must be 'skip' or 'error'");
        } else if (key == "quality_dist" || key == "type_dist") {
            std::vector<DistributionSpec> dists;
            for (const auto& item : split_list(value)) dists.push_back(parse_distribution(item));
            (key == "quality_dist" ? part.quality_dists : part.type_dists) = std::move(dists);
        } else if (key == "batching") {
            part.batchings.clear();
            for (const auto& item : split_list(value)) part.batchings.push_back(parse_batching(item));
        } else if (key == "types") part.trace_types = parse_real_list(value);
        else if (key == "qualities") part.trace_qualities = parse_real_list(value);
        else if (key == "expertise") part.trace_expertise = parse_real_list(value);
        else if (key == "perceptions") part.trace_perceptions = parse_matrix(value);
        else throw ConfigurationError("unknown experiment key '" + key + "'");
    }
    for (const auto* list : {&part.ms, &part.ns, &part.agent_counts})
        if (list->empty()) throw ConfigurationError("sweep axes m, n and N need at least one value");
    if (part.betas.empty() || part.quality_dists.empty() || part.type_dists.empty() || part.batchings.empty())
        throw ConfigurationError("sweep axes need at least one value");
    for (double b : part.betas)
        if (!(b >= 0.0)) throw ConfigurationError("knowledge breadth must be non-negative");
    for (double r : part.delegation_errors)
        if (!(r >= 0.0 && r <= 1.0)) throw ConfigurationError("delegation error must lie in [0, 1]");
    for (const auto& token : part.rules) parse_rule_entry(token);
    if (part.replications == 0) throw ConfigurationError("reps must be at least 1");
    return part;
}

}  // namespace detail

struct ExperimentInfo {
    std::string name;
    std::string description;
};

inline std::vector<ExperimentInfo> list_experiments() {
    std::vector<ExperimentInfo> out;
    for (const auto& [name, entry] : detail::builtin_table())
        out.push_back({name, std::string(entry.first)});
    return out;
}

inline bool is_builtin_experiment(std::string_view name) {
    return detail::builtin_table().find(name) != detail::builtin_table().end();
}

/// Embedded key-value text of a builtin experiment.
inline std::string builtin_config_text(std::string_view name) {
    const auto it = detail::builtin_table().find(name);
    if (it == detail::builtin_table().end()) throw ConfigurationError("unknown experiment '" + std::string(name) + "'");
    return "description = " + std::string(it->second.first) + "\n" + std::string(it->second.second);
}

/// Builds a spec from a config document. Part sections inherit top-level keys.
inline ExperimentSpec make_experiment(std::string name, const ConfigDocument& doc) {
    ExperimentSpec spec;
    spec.name = std::move(name);
    if (auto it = doc.top.find("description"); it != doc.top.end()) spec.description = it->second;
    if (auto it = doc.top.find("kind"); it != doc.top.end()) {
        if (it->second == "trace") spec.kind = ExperimentKind::trace;
        else if (it->second != "simulation") throw ConfigurationError("kind must be 'simulation' or 'trace'");
    }
    if (doc.parts.empty()) {
        spec.parts.push_back(detail::build_part(doc.top, ""));
    } else {
        for (const auto& section : doc.parts) {
            KeyValues merged = doc.top;
            for (const auto& [k, v] : section.values) merged[k] = v;
            spec.parts.push_back(detail::build_part(merged, section.label));
        }
    }
    if (spec.kind == ExperimentKind::trace) {
        for (const auto& p : spec.parts) {
            if (p.trace_types.empty() || p.trace_types.size() != p.trace_qualities.size() ||
                p.trace_perceptions.size() != p.trace_types.size())
                throw ConfigurationError("trace needs matching types, qualities and perception rows");
            for (const auto& row : p.trace_perceptions)
                if (row.size() != p.trace_expertise.size())
                    throw ConfigurationError("each perception row needs one value per agent");
        }
    }
    return spec;
}

/// Options applied on top of the experiment's own settings.
struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replications;
};

/// Builtin by name, optionally overlaid by a config file; a config file alone
/// defines a new experiment.
inline ExperimentSpec load_experiment(std::string_view name, const std::optional<std::string>& config_path = {},
                                      const RunOverrides& overrides = {}) {
    ConfigDocument doc;
    if (is_builtin_experiment(name)) doc = parse_config(builtin_config_text(name), name);
    else if (!config_path) throw ConfigurationError("unknown experiment '" + std::string(name) + "'");
    if (config_path) doc.overlay(load_config_file(*config_path));
    ExperimentSpec spec = make_experiment(std::string(name), doc);
    for (auto& part : spec.parts) {
        if (overrides.seed) part.seed = *overrides.seed;
        if (overrides.replications) {
            if (*overrides.replications == 0) throw ConfigurationError("reps must be at least 1");
            part.replications = *overrides.replications;
        }
    }
    return spec;
}

struct ResultRow {
    std::string experiment;
    std::string rule;
    double beta = 0.0;
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t agents = 0;
    double delegation_error = 0.0;
    std::string quality_dist;
    std::string type_dist;
    std::size_t replications = 0;
    std::uint64_t seed = 0;
    double mean_performance = 0.0;
    double std_error = 0.0;
};

struct RankRow {
    std::string experiment;
    std::string rule;
    double beta = 0.0;
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t agents = 0;
    double delegation_error = 0.0;
    std::size_t true_rank = 0;  // 1-based
    double selection_probability = 0.0;
};

struct TraceRow {
    std::size_t project = 0;  // 1-based
    std::size_t agent = 0;    // 1-based; 0 marks the organization-level summary rows
    double type = 0.0;
    double quality = 0.0;
    double expertise = 0.0;
    double perceived = 0.0;   // agent rows: perception; summary rows: aggregate score
    std::size_t position = 0; // agent rows only
    std::string selected_by;  // summary rows: aggregate name
};

struct ExperimentResult {
    std::vector<ResultRow> rows;
    std::vector<RankRow> rank_rows;
    std::vector<TraceRow> trace_rows;
};

namespace detail {

inline std::string experiment_label(const ExperimentSpec& spec, const SweepPart& part) {
    return part.label.empty() ? spec.name : spec.name + ":" + part.label;
}

inline ExperimentResult run_trace(const ExperimentSpec& spec) {
    ExperimentResult result;
    for (const auto& part : spec.parts) {
        const std::size_t n = part.trace_types.size();
        const std::size_t agents = part.trace_expertise.size();
        std::vector<double> row_major(agents * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < agents; ++j) row_major[j * n + i] = part.trace_perceptions[i][j];
        const PerceptionMatrix perceptions(agents, n, std::move(row_major));
        RandomStream rng(part.seed);
        std::vector<std::vector<std::size_t>> pos;
        for (std::size_t j = 0; j < agents; ++j) pos.push_back(positions(perceptions.row(j), rng));
        std::vector<double> borda(n, 0.0);
        for (std::size_t j = 0; j < agents; ++j)
            for (std::size_t i = 0; i < n; ++i) borda[i] += static_cast<double>(n - pos[j][i]);
        const auto votes = voting_scores(perceptions);
        const auto means = averaging_scores(perceptions);

        const std::size_t m = part.ms.front();
        auto winners = [&](const std::vector<double>& scores) {
            std::vector<bool> chosen(n, false);
            for (std::size_t i : select_top_m(scores, m, rng).selected) chosen[i] = true;
            return chosen;
        };
        const auto by_votes = winners(votes);
        const auto by_mean = winners(means);
        const auto by_borda = winners(borda);

        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < agents; ++j)
                result.trace_rows.push_back({i + 1, j + 1, part.trace_types[i], part.trace_qualities[i],
                                             part.trace_expertise[j], perceptions(j, i), pos[j][i], ""});
            auto summary = [&](std::string name, double score, bool chosen) {
                result.trace_rows.push_back({i + 1, 0, part.trace_types[i], part.trace_qualities[i], 0.0, score, 0,
                                             name + (chosen ? "*" : "")});
            };
            summary("voting", votes[i], by_votes[i]);
            summary("averaging", means[i], by_mean[i]);
            summary("ranking", borda[i], by_borda[i]);
        }
    }
    return result;
}

}  // namespace detail

/// Runs every sweep point of the experiment. Rows come out in deterministic
/// sweep-major order; results do not depend on `workers`.
inline ExperimentResult run_experiment_rows(const ExperimentSpec& spec, unsigned workers = 1) {
    if (spec.kind == ExperimentKind::trace) return detail::run_trace(spec);
    ExperimentResult result;
    std::map<std::tuple<std::size_t, std::size_t, std::string>, double> bound_cache;

    for (const auto& part : spec.parts) {
        const std::string label = detail::experiment_label(spec, part);
        std::vector<RuleEntry> entries;
        for (const auto& token : part.rules) entries.push_back(parse_rule_entry(token));

        for (const auto& quality : part.quality_dists)
        for (const auto& type : part.type_dists)
        for (const auto& batching : part.batchings)
        for (std::size_t n : part.ns)
        for (std::size_t m : part.ms) {
            if (m == 0 || m > n) {
                if (part.skip_infeasible) continue;
                throw ConfigurationError(label + ": sweep point m=" + std::to_string(m) + " n=" + std::to_string(n) +
                                         " violates 1 <= m <= n");
            }
            for (std::size_t agents : part.agent_counts)
            for (double beta : part.betas) {
                if (part.theoretical_max) {
                    const auto key = std::make_tuple(m, n, to_string(quality));
                    auto it = bound_cache.find(key);
                    if (it == bound_cache.end()) it = bound_cache.emplace(key, max_performance(m, n, quality).total).first;
                    result.rows.push_back({label, std::string(kTheoreticalMaxRule), beta, m, n, 0, 0.0,
                                           to_string(quality), to_string(type), 0, part.seed, it->second, 0.0});
                }
                for (const auto& entry : entries) {
                    std::vector<double> errors{0.0};
                    if (entry.kind == RuleKind::delegation)
                        errors = entry.delegation_error ? std::vector<double>{*entry.delegation_error}
                                                        : part.delegation_errors;
                    for (double r : errors) {
                        ScenarioConfig config;
                        config.n = n;
                        config.m = m;
                        config.agents = entry.agents.value_or(agents);
                        config.mean_expertise = part.mean_expertise;
                        config.breadth = beta;
                        config.type_dist = type;
                        config.quality_dist = quality;
                        config.rule.kind = entry.kind;
                        config.rule.delegation_error = entry.kind == RuleKind::delegation ? r : 0.0;
                        config.rule.designated_agent = entry.designated_agent;
                        config.batching = batching;
                        config.replications = part.replications;
                        config.master_seed = part.seed;
                        const EnsembleStats stats = run_ensemble(config, workers);

                        std::size_t effective_agents = config.agents;
                        if (batching) effective_agents = scenario_panel(config).size();
                        else if (entry.kind == RuleKind::individual) effective_agents = 1;
                        std::string rule_name(to_string(entry.kind));
                        result.rows.push_back({label, rule_name, beta, m, n, effective_agents, config.rule.delegation_error,
                                               to_string(quality), to_string(type), part.replications, part.seed,
                                               stats.mean_total_performance, stats.std_error});
                        if (part.rank_table) {
                            for (std::size_t k = 0; k < stats.rank_selection_frequency.size(); ++k)
                                result.rank_rows.push_back({label, rule_name, beta, m, n, effective_agents,
                                                            config.rule.delegation_error, k + 1,
                                                            stats.rank_selection_frequency[k]});
                        }
                    }
                }
            }
        }
    }
    return result;
}

namespace detail {

template <std::size_t N>
void write_header(std::ostream& out, const std::array<std::string_view, N>& columns) {
    for (std::size_t k = 0; k < N; ++k) out << (k ? "," : "") << columns[k];
    out << '\n';
}

}  // namespace detail

inline void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    using detail::format_number;
    detail::write_header(out, kResultColumns);
    for (const auto& r : rows)
        out << r.experiment << ',' << r.rule << ',' << format_number(r.beta) << ',' << r.m << ',' << r.n << ','
            << r.agents << ',' << format_number(r.delegation_error) << ',' << r.quality_dist << ',' << r.type_dist
            << ',' << r.replications << ',' << r.seed << ',' << format_number(r.mean_performance) << ','
            << format_number(r.std_error) << '\n';
}

inline void write_rank_csv(std::ostream& out, const std::vector<RankRow>& rows) {
    using detail::format_number;
    detail::write_header(out, kRankColumns);
    for (const auto& r : rows)
        out << r.experiment << ',' << r.rule << ',' << format_number(r.beta) << ',' << r.m << ',' << r.n << ','
            << r.agents << ',' << format_number(r.delegation_error) << ',' << r.true_rank << ','
            << format_number(r.selection_probability) << '\n';
}

inline void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
    using detail::format_number;
    detail::write_header(out, kTraceColumns);
    for (const auto& r : rows)
        out << r.project << ',' << r.agent << ',' << format_number(r.type) << ',' << format_number(r.quality) << ','
            << format_number(r.expertise) << ',' << format_number(r.perceived) << ',' << r.position << ','
            << r.selected_by << '\n';
}

/// Runs the experiment and writes <out_dir>/<name>.csv (plus <name>_ranks.csv
/// when a rank table is requested). Returns the written paths.
inline std::vector<std::filesystem::path> run_experiment(const ExperimentSpec& spec,
                                                         const std::filesystem::path& out_dir, unsigned workers = 1) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + out_dir.string() + "': " + ec.message());

    const ExperimentResult result = run_experiment_rows(spec, workers);
    std::vector<std::filesystem::path> written;
    auto open = [&](const std::filesystem::path& path) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
        written.push_back(path);
        return out;
    };
    if (spec.kind == ExperimentKind::trace) {
        auto out = open(out_dir / (spec.name + ".csv"));
        write_trace_csv(out, result.trace_rows);
    } else {
        auto out = open(out_dir / (spec.name + ".csv"));
        write_results_csv(out, result.rows);
        if (spec.has_rank_table()) {
            auto ranks = open(out_dir / (spec.name + "_ranks.csv"));
            write_rank_csv(ranks, result.rank_rows);
        }
    }
    for (const auto& path : written)
        if (!std::filesystem::exists(path)) throw std::runtime_error("failed to write '" + path.string() + "'");
    return written;
}

}  // namespace orgsel
