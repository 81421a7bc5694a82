// orgsel: run portfolio-selection experiments and query the analytic bounds.

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "orgsel/orgsel.hpp"

namespace {

void print(double v) { std::cout << std::setprecision(12) << v << '\n'; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Budget-constrained portfolio selection: simulation experiments and analytic maxima"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "List builtin experiments");

    auto* run = app.add_subcommand("run", "Run an experiment and write CSV results");
    std::string experiment;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> reps;
    unsigned workers = 1;
    std::string out_dir = "results";
    std::optional<std::string> config_path;
    run->add_option("experiment", experiment, "Builtin name, or a new name defined by --config")->required();
    run->add_option("--seed", seed, "Master seed for every sweep point");
    run->add_option("--reps", reps, "Replications per sweep point")->check(CLI::PositiveNumber);
    run->add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--config", config_path, "Key-value file overlaying or defining the experiment")
        ->check(CLI::ExistingFile);

    auto* analytics = app.add_subcommand("analytics", "Closed-form and numeric bounds");
    analytics->require_subcommand(1);

    std::size_t m = 10, n = 100, agents = 3;
    double q_low = -5.0, q_high = 5.0, t_low = 0.0, t_high = 10.0;
    std::string dist_text = "uniform(-5;5)";

    auto* amax = analytics->add_subcommand("max", "E*[q; m, n] for uniform(ql, qh) qualities");
    amax->add_option("m", m)->required();
    amax->add_option("n", n)->required();
    amax->add_option("ql", q_low)->required();
    amax->add_option("qh", q_high)->required();

    auto* amstar = analytics->add_subcommand("mstar", "Budget maximizing E* (real-valued and rounded)");
    amstar->add_option("n", n)->required();
    amstar->add_option("ql", q_low)->required();
    amstar->add_option("qh", q_high)->required();

    auto* aestar = analytics->add_subcommand("estar", "E*[q; m, n] for any quality law, by quadrature");
    aestar->add_option("m", m)->required();
    aestar->add_option("n", n)->required();
    aestar->add_option("--dist", dist_text, "uniform(a;b), truncnormal(mu;sd;a;b) or powerlaw(k;a;b)");

    auto* aexp = analytics->add_subcommand("expertise", "Delegation-optimal expertise values");
    aexp->add_option("N", agents)->required();
    aexp->add_option("tl", t_low)->required();
    aexp->add_option("th", t_high)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            for (const auto& info : orgsel::list_experiments())
                std::cout << std::left << std::setw(8) << info.name << "  " << info.description << '\n';
        } else if (*run) {
            if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
            const auto spec = orgsel::load_experiment(experiment, config_path, {seed, reps});
            for (const auto& path : orgsel::run_experiment(spec, out_dir, workers)) std::cout << path.string() << '\n';
        } else if (*amax) {
            const auto bound = orgsel::max_performance_uniform(m, n, q_low, q_high);
            std::cout << std::setprecision(12) << "total " << bound.total << "\nper_project " << bound.per_project
                      << '\n';
        } else if (*amstar) {
            std::cout << std::setprecision(12) << "m_star " << orgsel::optimal_budget(n, q_low, q_high)
                      << "\nm_star_rounded " << orgsel::optimal_budget_rounded(n, q_low, q_high)
                      << "\nselectiveness_limit " << orgsel::selectiveness_limit(q_low, q_high) << '\n';
        } else if (*aestar) {
            const auto bound = orgsel::max_performance(m, n, orgsel::parse_distribution(dist_text));
            std::cout << std::setprecision(12) << "total " << bound.total << "\nper_project " << bound.per_project
                      << '\n';
        } else if (*aexp) {
            for (double e : orgsel::optimal_delegation_expertise(agents, t_low, t_high)) print(e);
        }
    } catch (const orgsel::ConfigurationError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const orgsel::DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
