#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "orgsel/errors.hpp"
#include "orgsel/model.hpp"

using namespace orgsel;

TEST(SampleSlate, BaseCaseSupport) {
    RandomStream rng(1);
    const auto slate = sample_slate(100, DistributionSpec::uniform(0, 10), DistributionSpec::uniform(-5, 5), rng);
    ASSERT_EQ(slate.size(), 100u);
    for (std::size_t i = 0; i < slate.size(); ++i) {
        EXPECT_GE(slate.type(i), 0.0);
        EXPECT_LE(slate.type(i), 10.0);
        EXPECT_GE(slate.quality(i), -5.0);
        EXPECT_LE(slate.quality(i), 5.0);
    }
}

TEST(SampleSlate, SingleProjectAndErrors) {
    RandomStream rng(2);
    EXPECT_EQ(sample_slate(1, DistributionSpec::uniform(0, 10), DistributionSpec::uniform(-5, 5), rng).size(), 1u);
    EXPECT_THROW(sample_slate(0, DistributionSpec::uniform(0, 10), DistributionSpec::uniform(-5, 5), rng),
                 ConfigurationError);
    EXPECT_THROW(ProjectSlate({1.0, 2.0}, {0.0}), ConfigurationError);
}

TEST(SampleSlate, MeanTotalQualityIsZero) {
    RandomStream rng(3);
    double sum = 0.0;
    const int slates = 100000;
    for (int k = 0; k < slates; ++k) {
        const auto s = sample_slate(100, DistributionSpec::uniform(0, 10), DistributionSpec::uniform(-5, 5), rng);
        for (double q : s.qualities()) sum += q;
    }
    EXPECT_NEAR(sum / slates, 0.0, 0.5);
}

TEST(BuildPanel, Examples) {
    const auto wide = build_panel(3, 5, 5);
    EXPECT_EQ(std::vector<double>(wide.expertise().begin(), wide.expertise().end()), (std::vector<double>{0, 5, 10}));
    const auto flat = build_panel(3, 5, 0);
    EXPECT_EQ(std::vector<double>(flat.expertise().begin(), flat.expertise().end()), (std::vector<double>{5, 5, 5}));
    const auto optimal = build_panel(3, 5, 10.0 / 3.0);
    EXPECT_NEAR(optimal.expertise(0), 5.0 / 3.0, 1e-12);
    EXPECT_NEAR(optimal.expertise(1), 5.0, 1e-12);
    EXPECT_NEAR(optimal.expertise(2), 25.0 / 3.0, 1e-12);
    EXPECT_EQ(build_panel(1, 5, 3).expertise(0), 5.0);
    EXPECT_THROW(build_panel(3, 5, -1), ConfigurationError);
    EXPECT_THROW(build_panel(0, 5, 1), ConfigurationError);
}

TEST(BuildPanel, SymmetricAndSpansBreadth) {
    for (std::size_t agents : {2u, 3u, 4u, 15u, 45u})
        for (double beta : {0.0, 0.25, 10.0 / 3.0, 5.0}) {
            const auto panel = build_panel(agents, 5, beta);
            ASSERT_EQ(panel.size(), agents);
            EXPECT_DOUBLE_EQ(panel.expertise(0), 5 - beta);
            EXPECT_DOUBLE_EQ(panel.expertise(agents - 1), 5 + beta);
            for (std::size_t j = 0; j < agents; ++j) {
                EXPECT_NEAR(panel.expertise(j) + panel.expertise(agents - 1 - j), 10.0, 1e-12);
                if (j) {
                    EXPECT_LE(panel.expertise(j - 1), panel.expertise(j));
                }
            }
        }
}

TEST(Perceive, ZeroMismatchIsExact) {
    RandomStream rng(4);
    const ProjectSlate slate({1.5, -2.0, 3.25}, {5, 5, 5});
    const auto matrix = perceive(slate, build_panel(4, 5, 0), rng);
    ASSERT_EQ(matrix.agents(), 4u);
    ASSERT_EQ(matrix.projects(), 3u);
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(matrix(j, i), slate.quality(i));
}

TEST(Perceive, NoiseScaleIsMismatch) {
    RandomStream rng(5);
    const int draws = 100000;
    double s = 0.0, s2 = 0.0;
    for (int k = 0; k < draws; ++k) {
        const double d = perceive_one(1.0, 10.0, 5.0, rng) - 1.0;
        s += d;
        s2 += d * d;
    }
    const double var = s2 / draws - (s / draws) * (s / draws);
    EXPECT_NEAR(var, 25.0, 0.5);
    for (auto [t, e] : {std::pair{0.0, 5.0}, {7.0, 6.0}, {2.0, 2.5}}) {
        double a = 0.0, b = 0.0;
        for (int k = 0; k < draws; ++k) {
            const double d = perceive_one(0.0, t, e, rng);
            a += d;
            b += d * d;
        }
        const double sd = std::sqrt(b / draws - (a / draws) * (a / draws));
        EXPECT_NEAR(sd / std::abs(t - e), 1.0, 0.02);
    }
}

TEST(Perceive, WorkedExampleScales) {
    const std::vector<double> types{10, 5, 0};
    std::vector<double> sds;
    for (double t : types) sds.push_back(perception_sd(t, 5.0));
    EXPECT_EQ(sds, (std::vector<double>{5, 0, 5}));
    RandomStream rng(6);
    const auto matrix = perceive(ProjectSlate({3, 2, 1}, types), build_panel(3, 5, 0), rng);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(matrix(j, 1), 2.0);
}
