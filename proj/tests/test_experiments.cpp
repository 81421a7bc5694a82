#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "orgsel/experiments.hpp"

using namespace orgsel;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string f; std::getline(in, f, ',');) out.push_back(f);
    return out;
}

std::string header_of(const auto& columns) {
    std::string h;
    for (auto c : columns) h += (h.empty() ? "" : ",") + std::string(c);
    return h;
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("orgsel_test_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST(Config, ParsesSectionsAndComments) {
    const auto doc = parse_config("# top\nm = 10  # budget\nrules = voting, ranking\n[part a]\nm = 30\n[part b]\n");
    EXPECT_EQ(doc.top.at("m"), "10");
    EXPECT_EQ(doc.top.at("rules"), "voting, ranking");
    ASSERT_EQ(doc.parts.size(), 2u);
    EXPECT_EQ(doc.parts[0].label, "a");
    EXPECT_EQ(doc.parts[0].values.at("m"), "30");
    EXPECT_THROW(parse_config("just words"), ConfigurationError);
    EXPECT_THROW(parse_config("[section x]\n"), ConfigurationError);
    EXPECT_THROW(parse_config("[part]\n"), ConfigurationError);
}

TEST(Config, ValueLists) {
    EXPECT_EQ(parse_real_list("0:1:0.25"), (std::vector<double>{0, 0.25, 0.5, 0.75, 1.0}));
    EXPECT_EQ(parse_real_list("0:5:0.25").size(), 21u);
    EXPECT_NEAR(parse_real_list("10/3").at(0), 10.0 / 3.0, 1e-15);
    EXPECT_EQ(parse_count_list("3:9:2, 20"), (std::vector<std::size_t>{3, 5, 7, 9, 20}));
    EXPECT_THROW(parse_count_list("2.5"), ConfigurationError);
    EXPECT_THROW(parse_real_list("1:2"), ConfigurationError);
    EXPECT_EQ(split_list("uniform(-5,5), powerlaw(-0.5,-5,5)").size(), 2u);
    EXPECT_FALSE(parse_batching("none"));
    const auto b = parse_batching("10/expertise/decentralized");
    ASSERT_TRUE(b);
    EXPECT_EQ(b->assignment, BatchAssignment::expertise_matched);
    EXPECT_EQ(b->decision, BatchDecision::decentralized);
    EXPECT_THROW(parse_batching("10/sorted/centralized"), ConfigurationError);
}

TEST(Config, RuleEntries) {
    const auto d = parse_rule_entry("delegation:r=0.2:N=3");
    EXPECT_EQ(d.kind, RuleKind::delegation);
    EXPECT_DOUBLE_EQ(*d.delegation_error, 0.2);
    EXPECT_EQ(*d.agents, 3u);
    EXPECT_EQ(*parse_rule_entry("portfolio-expert:agent=2").designated_agent, 2u);
    EXPECT_THROW(parse_rule_entry("voting:r=0.5"), ConfigurationError);
    EXPECT_THROW(parse_rule_entry("ranking:x=1"), ConfigurationError);
}

TEST(Registry, ListsAllBuiltins) {
    const auto list = list_experiments();
    EXPECT_GE(list.size(), 15u);
    std::set<std::string> names;
    for (const auto& e : list) {
        names.insert(e.name);
        EXPECT_FALSE(e.description.empty());
    }
    for (const char* n : {"fig2a", "fig2b", "fig3", "fig4a", "fig4b", "fig5a", "fig5b", "fig6a", "fig6b", "fig8",
                          "fig10", "fig11", "fig12", "fig13", "table2"})
        EXPECT_TRUE(names.count(n)) << n;
}

TEST(Registry, BuiltinsParse) {
    for (const auto& e : list_experiments()) {
        const auto spec = load_experiment(e.name);
        EXPECT_EQ(spec.name, e.name);
        EXPECT_FALSE(spec.parts.empty());
    }
    EXPECT_THROW(load_experiment("fig99"), ConfigurationError);
    const auto fig8 = load_experiment("fig8");
    EXPECT_EQ(fig8.parts.size(), 4u);
    EXPECT_EQ(fig8.parts[0].betas.size(), 21u);
}

TEST(Registry, EverySmokeRunHonoursHeaderContract) {
    const auto dir = scratch("smoke");
    const std::string results_header = header_of(kResultColumns);
    for (const auto& e : list_experiments()) {
        const auto spec = load_experiment(e.name, std::nullopt, {std::uint64_t{7}, std::size_t{100}});
        const auto written = run_experiment(spec, dir);
        ASSERT_FALSE(written.empty()) << e.name;
        const auto rows = lines(slurp(written[0]));
        ASSERT_GE(rows.size(), 2u) << e.name;
        if (e.name == "table2") {
            EXPECT_EQ(rows[0], header_of(kTraceColumns));
            continue;
        }
        EXPECT_EQ(rows[0], results_header) << e.name;
        for (std::size_t k = 1; k < rows.size(); ++k) {
            const auto f = fields(rows[k]);
            ASSERT_EQ(f.size(), kResultColumns.size()) << e.name << ": " << rows[k];
            EXPECT_EQ(f[0].substr(0, e.name.size()), e.name);
            if (f[1] != kTheoreticalMaxRule) {
                EXPECT_EQ(f[9], "100");
            }
            EXPECT_NE(rows[k].find_first_of("0123456789"), std::string::npos);
        }
        if (spec.has_rank_table()) {
            ASSERT_EQ(written.size(), 2u);
            EXPECT_EQ(lines(slurp(written[1]))[0], header_of(kRankColumns));
        }
    }
    fs::remove_all(dir);
}

TEST(Experiments, SweepMajorOrder) {
    const auto doc = parse_config("rules = averaging, delegation\nr = 0, 1\nbeta = 0, 5\nm = 1, 2\nn = 4\n"
                                  "theoretical_max = true\nreps = 20\n");
    const auto result = run_experiment_rows(make_experiment("order", doc));
    std::vector<std::string> seen;
    for (const auto& r : result.rows)
        seen.push_back(std::to_string(r.m) + "/" + detail::format_number(r.beta) + "/" + r.rule + "/" +
                       detail::format_number(r.delegation_error));
    const std::vector<std::string> expected{
        "1/0/theoretical_max/0", "1/0/averaging/0", "1/0/delegation/0", "1/0/delegation/1",
        "1/5/theoretical_max/0", "1/5/averaging/0", "1/5/delegation/0", "1/5/delegation/1",
        "2/0/theoretical_max/0", "2/0/averaging/0", "2/0/delegation/0", "2/0/delegation/1",
        "2/5/theoretical_max/0", "2/5/averaging/0", "2/5/delegation/0", "2/5/delegation/1"};
    EXPECT_EQ(seen, expected);
}

TEST(Experiments, InfeasiblePointsSkipOrFail) {
    auto doc = parse_config("rules = ranking\nn = 2, 5\nm = 1, 3\nreps = 10\n");
    EXPECT_THROW(run_experiment_rows(make_experiment("bad", doc)), ConfigurationError);
    doc.top["infeasible"] = "skip";
    EXPECT_EQ(run_experiment_rows(make_experiment("ok", doc)).rows.size(), 3u);
}

TEST(Experiments, EffectivePanelSizeColumn) {
    const auto doc = parse_config("rules = individual, voting, delegation:N=3\nr = 0\nN = 15\nreps = 10\n"
                                  "[part plain]\n[part batched]\nbatching = 10/random/centralized\n");
    const auto rows = run_experiment_rows(make_experiment("panel", doc)).rows;
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0].agents, 1u);
    EXPECT_EQ(rows[1].agents, 15u);
    EXPECT_EQ(rows[2].agents, 3u);
    EXPECT_EQ(rows[3].experiment, "panel:batched");
    EXPECT_EQ(rows[3].agents, 10u);
    EXPECT_EQ(rows[4].agents, 150u);
    EXPECT_EQ(rows[5].agents, 10u);
}

TEST(Experiments, RerunsAreByteIdentical) {
    const auto spec = load_experiment("fig3", std::nullopt, {std::uint64_t{11}, std::size_t{200}});
    const auto a = scratch("rerun_a"), b = scratch("rerun_b");
    const auto wa = run_experiment(spec, a, 1);
    const auto wb = run_experiment(spec, b, 4);
    ASSERT_EQ(wa.size(), 2u);
    for (std::size_t k = 0; k < wa.size(); ++k) EXPECT_EQ(slurp(wa[k]), slurp(wb[k]));
    const auto ranks = lines(slurp(wa[1]));
    EXPECT_EQ(ranks.size(), 1u + 2u * 100u);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Experiments, ConfigFileOverlaysBuiltin) {
    const auto dir = scratch("overlay");
    fs::create_directories(dir);
    const auto file = dir / "short.cfg";
    std::ofstream(file) << "beta = 0, 5\nrules = ranking\n";
    const auto spec = load_experiment("fig2a", file.string(), {std::nullopt, std::size_t{50}});
    ASSERT_EQ(spec.parts.size(), 1u);
    EXPECT_EQ(spec.parts[0].betas, (std::vector<double>{0, 5}));
    EXPECT_EQ(spec.parts[0].ms, (std::vector<std::size_t>{10}));
    EXPECT_EQ(spec.parts[0].replications, 50u);
    const auto rows = run_experiment_rows(spec).rows;
    EXPECT_EQ(rows.size(), 4u);  // two theoretical_max rows plus two ranking rows

    const auto custom = load_experiment("mine", file.string());
    EXPECT_EQ(custom.name, "mine");
    EXPECT_THROW(load_experiment("mine"), ConfigurationError);
    std::ofstream(dir / "bad.cfg") << "betas = 1\n";
    EXPECT_THROW(load_experiment("fig2a", (dir / "bad.cfg").string()), ConfigurationError);
    fs::remove_all(dir);
}

TEST(Experiments, WorkedExampleTrace) {
    const auto result = run_experiment_rows(load_experiment("table2"));
    std::vector<double> votes, means, borda;
    std::vector<std::size_t> agent1_positions;
    std::vector<std::string> winners;
    for (const auto& r : result.trace_rows) {
        if (r.agent == 1) agent1_positions.push_back(r.position);
        if (r.agent != 0) continue;
        const std::string label = r.selected_by.substr(0, r.selected_by.find('*'));
        (label == "voting" ? votes : label == "averaging" ? means : borda).push_back(r.perceived);
        if (r.selected_by.back() == '*') winners.push_back(label + std::to_string(r.project));
    }
    EXPECT_EQ(agent1_positions, (std::vector<std::size_t>{1, 3, 2}));
    EXPECT_EQ(votes, (std::vector<double>{2, 3, 1}));
    EXPECT_EQ(borda, (std::vector<double>{4, 3, 2}));
    EXPECT_NEAR(means[0], -0.07, 0.005);
    EXPECT_NEAR(means[1], 2.00, 0.005);
    EXPECT_NEAR(means[2], -0.13, 0.005);
    EXPECT_EQ(std::set<std::string>(winners.begin(), winners.end()),
              (std::set<std::string>{"ranking1", "voting2", "averaging2"}));
}

TEST(Cli, RunWritesIdenticalBytesForSameSeed) {
    const auto a = scratch("cli_a"), b = scratch("cli_b");
    const std::string cli = ORGSEL_CLI_PATH;
    const std::string base = cli + " run fig5b --reps 30 --seed 9 --out ";
    ASSERT_EQ(std::system((base + a.string() + " --workers 1 > /dev/null").c_str()), 0);
    ASSERT_EQ(std::system((base + b.string() + " --workers 3 > /dev/null").c_str()), 0);
    EXPECT_EQ(slurp(a / "fig5b.csv"), slurp(b / "fig5b.csv"));
    EXPECT_NE(std::system((cli + " run nope > /dev/null 2>&1").c_str()), 0);
    EXPECT_EQ(std::system((cli + " list > /dev/null").c_str()), 0);
    EXPECT_EQ(std::system((cli + " analytics max 10 100 -5 5 > /dev/null").c_str()), 0);
    EXPECT_NE(std::system((cli + " analytics mstar 100 -5 -1 > /dev/null 2>&1").c_str()), 0);
    fs::remove_all(a);
    fs::remove_all(b);
}
