#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "orgsel/distributions.hpp"
#include "orgsel/errors.hpp"
#include "orgsel/random.hpp"

namespace orgsel {

/// The n candidate projects. Index i refers to the same project in both vectors.
class ProjectSlate {
public:
    ProjectSlate(std::vector<double> qualities, std::vector<double> types)
        : qualities_(std::move(qualities)), types_(std::move(types)) {
        if (qualities_.empty()) throw ConfigurationError("a slate needs at least one project");
        if (qualities_.size() != types_.size())
            throw ConfigurationError("slate qualities and types differ in length");
    }

    std::size_t size() const noexcept { return qualities_.size(); }
    std::span<const double> qualities() const noexcept { return qualities_; }
    std::span<const double> types() const noexcept { return types_; }
    double quality(std::size_t i) const { return qualities_[i]; }
    double type(std::size_t i) const { return types_[i]; }

    /// Sum of true qualities over the given project indices, accumulated in
    /// index order so equal sets give bit-equal totals.
    double total_quality(std::span<const std::size_t> selected) const {
        std::vector<std::size_t> sorted(selected.begin(), selected.end());
        std::sort(sorted.begin(), sorted.end());
        double total = 0.0;
        for (std::size_t i : sorted) total += qualities_.at(i);
        return total;
    }

private:
    std::vector<double> qualities_;
    std::vector<double> types_;
};

/// The evaluating agents, described by their expertise values.
class AgentPanel {
public:
    explicit AgentPanel(std::vector<double> expertise) : expertise_(std::move(expertise)) {
        if (expertise_.empty()) throw ConfigurationError("a panel needs at least one agent");
    }

    std::size_t size() const noexcept { return expertise_.size(); }
    std::span<const double> expertise() const noexcept { return expertise_; }
    double expertise(std::size_t j) const { return expertise_[j]; }

private:
    std::vector<double> expertise_;
};

/// Perceived qualities, one row per agent and one column per project.
class PerceptionMatrix {
public:
    PerceptionMatrix(std::size_t agents, std::size_t projects)
        : agents_(agents), projects_(projects), values_(agents * projects, 0.0) {}

    PerceptionMatrix(std::size_t agents, std::size_t projects, std::vector<double> row_major)
        : agents_(agents), projects_(projects), values_(std::move(row_major)) {
        if (values_.size() != agents_ * projects_)
            throw ConfigurationError("perception values do not match the matrix shape");
    }

    std::size_t agents() const noexcept { return agents_; }
    std::size_t projects() const noexcept { return projects_; }

    double& operator()(std::size_t agent, std::size_t project) { return values_[agent * projects_ + project]; }
    double operator()(std::size_t agent, std::size_t project) const { return values_[agent * projects_ + project]; }

    std::span<const double> row(std::size_t agent) const {
        return std::span<const double>(values_).subspan(agent * projects_, projects_);
    }
    std::span<double> row(std::size_t agent) {
        return std::span<double>(values_).subspan(agent * projects_, projects_);
    }

private:
    std::size_t agents_;
    std::size_t projects_;
    std::vector<double> values_;
};

/// n independent (type, quality) pairs. Per project the type is drawn first.
inline ProjectSlate sample_slate(std::size_t n, const DistributionSpec& type_dist,
                                 const DistributionSpec& quality_dist, RandomStream& rng) {
    if (n == 0) throw ConfigurationError("slate size must be at least 1");
    type_dist.validate();
    quality_dist.validate();
    std::vector<double> qualities(n);
    std::vector<double> types(n);
    for (std::size_t i = 0; i < n; ++i) {
        types[i] = sample(type_dist, rng);
        qualities[i] = sample(quality_dist, rng);
    }
    return ProjectSlate(std::move(qualities), std::move(types));
}

/// Evenly spaced expertise on [mean - breadth, mean + breadth], ascending.
/// A single agent sits at the mean.
inline AgentPanel build_panel(std::size_t agents, double mean_expertise, double breadth) {
    if (agents == 0) throw ConfigurationError("panel size must be at least 1");
    if (!(breadth >= 0.0)) throw ConfigurationError("knowledge breadth must be non-negative");
    std::vector<double> expertise(agents, mean_expertise);
    if (agents > 1) {
        const double step = 2.0 * breadth / static_cast<double>(agents - 1);
        for (std::size_t j = 0; j < agents; ++j)
            expertise[j] = mean_expertise - breadth + step * static_cast<double>(j);
        expertise.back() = mean_expertise + breadth;
    }
    return AgentPanel(std::move(expertise));
}

/// Noise scale of agent expertise e on a project of type t.
inline double perception_sd(double type, double expertise) noexcept {
    return std::abs(type - expertise);
}

/// One noisy reading of a project: quality plus normal(0, |t - e|) noise.
/// A zero scale reproduces the quality exactly. Always consumes one normal.
inline double perceive_one(double quality, double type, double expertise, RandomStream& rng) {
    const double sd = perception_sd(type, expertise);
    const double noise = rng.normal();
    return sd > 0.0 ? quality + sd * noise : quality;
}

/// Every agent perceives every project. Draw order: agent-major.
inline PerceptionMatrix perceive(const ProjectSlate& slate, const AgentPanel& panel, RandomStream& rng) {
    PerceptionMatrix result(panel.size(), slate.size());
    for (std::size_t j = 0; j < panel.size(); ++j) {
        const double e = panel.expertise(j);
        for (std::size_t i = 0; i < slate.size(); ++i)
            result(j, i) = perceive_one(slate.quality(i), slate.type(i), e, rng);
    }
    return result;
}

}  // namespace orgsel
