#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "orgsel/distributions.hpp"
#include "orgsel/errors.hpp"

using orgsel::DistributionSpec;
using orgsel::RandomStream;

namespace {

std::vector<DistributionSpec> all_kinds() {
    return {DistributionSpec::uniform(-5, 5), DistributionSpec::truncated_normal(0, 1, -5, 5),
            DistributionSpec::power_law(-0.5, -5, 5), DistributionSpec::truncated_normal(3, 2, 0, 10),
            DistributionSpec::truncated_normal(0, 1, 2, 4), DistributionSpec::power_law(1.5, 0, 2)};
}

double ks_distance(const DistributionSpec& d, std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const double count = static_cast<double>(xs.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double f = orgsel::cdf(d, xs[k]);
        worst = std::max({worst, std::abs(f - k / count), std::abs(f - (k + 1) / count)});
    }
    return worst;
}

}  // namespace

TEST(Distribution, ValidationRejectsBadSpecs) {
    EXPECT_THROW(DistributionSpec::uniform(1, 1), orgsel::ConfigurationError);
    EXPECT_THROW(DistributionSpec::truncated_normal(0, 0, -1, 1), orgsel::ConfigurationError);
    EXPECT_THROW(DistributionSpec::power_law(-1.0, 0, 1), orgsel::ConfigurationError);
    EXPECT_THROW(DistributionSpec::power_law(-2.0, 0, 1), orgsel::ConfigurationError);
}

TEST(Distribution, UniformSampleMean) {
    RandomStream rng(1);
    const auto d = DistributionSpec::uniform(-5, 5);
    double s = 0.0;
    for (int k = 0; k < 100000; ++k) s += orgsel::sample(d, rng);
    EXPECT_NEAR(s / 100000.0, 0.0, 0.05);
}

TEST(Distribution, SamplesStayInSupport) {
    RandomStream rng(2);
    for (const auto& d : all_kinds())
        for (int k = 0; k < 20000; ++k) {
            const double x = orgsel::sample(d, rng);
            ASSERT_GE(x, d.lower) << orgsel::to_string(d);
            ASSERT_LE(x, d.upper) << orgsel::to_string(d);
        }
}

TEST(Distribution, EmpiricalCdfMatchesAnalytic) {
    RandomStream rng(3);
    for (const auto& d : all_kinds()) {
        std::vector<double> xs(100000);
        for (auto& x : xs) x = orgsel::sample(d, rng);
        EXPECT_LT(ks_distance(d, xs), 0.01) << orgsel::to_string(d);
    }
}

TEST(Distribution, PowerLawQuantiles) {
    const auto d = DistributionSpec::power_law(-0.5, -5, 5);
    EXPECT_NEAR(orgsel::cdf(d, 0.0), std::sqrt(0.5), 1e-12);
    EXPECT_NEAR(1.0 - orgsel::cdf(d, 4.0), 1.0 - std::sqrt(0.9), 1e-12);
    RandomStream rng(4);
    int negative = 0, above4 = 0;
    for (int k = 0; k < 100000; ++k) {
        const double q = orgsel::sample(d, rng);
        negative += q < 0.0;
        above4 += q > 4.0;
    }
    EXPECT_NEAR(negative / 1e5, 0.707, 0.005);
    EXPECT_NEAR(above4 / 1e5, 0.051, 0.003);
}

TEST(Distribution, QuantileInvertsCdf) {
    for (const auto& d : all_kinds())
        for (double u : {1e-6, 0.01, 0.25, 0.5, 0.75, 0.99, 1 - 1e-6})
            EXPECT_NEAR(orgsel::cdf(d, orgsel::quantile(d, u)), u, 1e-9) << orgsel::to_string(d) << " u=" << u;
}

TEST(Distribution, TruncatedNormalFarTail) {
    // Support entirely in the upper tail: inverse CDF must not collapse to a bound.
    const auto d = DistributionSpec::truncated_normal(0, 1, 6, 8);
    RandomStream rng(5);
    double s = 0.0;
    for (int k = 0; k < 20000; ++k) {
        const double x = orgsel::sample(d, rng);
        ASSERT_GE(x, 6.0);
        ASSERT_LE(x, 8.0);
        s += x;
    }
    EXPECT_NEAR(s / 20000.0, orgsel::mean(d), 0.01);
    EXPECT_GT(orgsel::mean(d), 6.0);
}

TEST(Distribution, MeansMatchSamples) {
    RandomStream rng(6);
    for (const auto& d : all_kinds()) {
        double s = 0.0;
        for (int k = 0; k < 100000; ++k) s += orgsel::sample(d, rng);
        EXPECT_NEAR(s / 1e5, orgsel::mean(d), 0.03 * (d.upper - d.lower) / 10.0 + 0.01) << orgsel::to_string(d);
    }
}

TEST(Distribution, StringRoundTrip) {
    for (const auto& d : all_kinds()) EXPECT_EQ(orgsel::parse_distribution(orgsel::to_string(d)), d);
    EXPECT_EQ(orgsel::parse_distribution("uniform(-5, 5)"), DistributionSpec::uniform(-5, 5));
    EXPECT_EQ(orgsel::to_string(DistributionSpec::uniform(-5, 5)), "uniform(-5;5)");
    EXPECT_THROW(orgsel::parse_distribution("gamma(1;2)"), orgsel::ConfigurationError);
    EXPECT_THROW(orgsel::parse_distribution("uniform(1)"), orgsel::ConfigurationError);
}
