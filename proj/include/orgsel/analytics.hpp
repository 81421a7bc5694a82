#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "orgsel/distributions.hpp"
#include "orgsel/errors.hpp"

// Order-statistic bounds on portfolio performance.
//
// E*[q; m, n] is the expected total quality of the m best projects among n
// i.i.d. draws, i.e. what an omniscient selector achieves. For uniform
// qualities it has a closed form; other laws go through quadrature over the
// summed density of the top m order statistics.

namespace orgsel {

struct PerformanceBound {
    double total = 0.0;        // E*[q; m, n]
    double per_project = 0.0;  // E*_m = total / m
};

namespace detail {

inline void check_budget(std::size_t m, std::size_t n) {
    if (m == 0 || m > n) throw ConfigurationError("budget m must satisfy 1 <= m <= n");
}

inline void check_support(double low, double high) {
    if (!(low < high)) throw ConfigurationError("support requires low < high");
}

inline PerformanceBound make_bound(double total, std::size_t m) {
    return {total, total / static_cast<double>(m)};
}

}  // namespace detail

/// Closed-form E* for uniform(q_low, q_high) qualities:
/// m [q_low + (q_high - q_low)(2n + 1 - m)/(2n + 2)].
inline PerformanceBound max_performance_uniform(std::size_t m, std::size_t n, double q_low, double q_high) {
    detail::check_budget(m, n);
    detail::check_support(q_low, q_high);
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    const double total = md * (q_low + (q_high - q_low) * (2.0 * nd + 1.0 - md) / (2.0 * nd + 2.0));
    return detail::make_bound(total, m);
}

/// Density of the i-th smallest of n draws (1 <= i <= n).
class OrderStatisticDensity {
public:
    OrderStatisticDensity(std::size_t i, std::size_t n, DistributionSpec dist) : i_(i), n_(n), dist_(dist) {
        if (i == 0 || i > n) throw ConfigurationError("order statistic rank must satisfy 1 <= i <= n");
        dist_.validate();
        log_coefficient_ = std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(i)) -
                           std::lgamma(static_cast<double>(n - i) + 1.0);
    }

    double operator()(double q) const { return at_offset(q - dist_.lower); }

    /// Density at lower + offset.
    double at_offset(double offset) const {
        if (offset <= 0.0 || offset >= dist_.upper - dist_.lower) return 0.0;
        const double base = pdf_at_offset(dist_, offset);
        if (base == 0.0 || !std::isfinite(base)) return 0.0;
        const double u = cdf_at_offset(dist_, offset);
        double log_weight = log_coefficient_;
        if (i_ > 1) log_weight += static_cast<double>(i_ - 1) * std::log(u);
        if (n_ > i_) log_weight += static_cast<double>(n_ - i_) * std::log1p(-u);
        return base * std::exp(log_weight);
    }

    const DistributionSpec& distribution() const noexcept { return dist_; }

private:
    std::size_t i_;
    std::size_t n_;
    DistributionSpec dist_;
    double log_coefficient_ = 0.0;
};

inline OrderStatisticDensity order_statistic_pdf(std::size_t i, std::size_t n, const DistributionSpec& dist) {
    return OrderStatisticDensity(i, n, dist);
}

/// Sum of the densities of the m largest order statistics out of n. Summing
/// the binomial weights gives n phi(q) P[Binomial(n-1, Phi(q)) >= n-m], and the
/// binomial tail is a regularized incomplete beta I_Phi(n-m, m).
class TopOrderStatisticsDensity {
public:
    TopOrderStatisticsDensity(std::size_t m, std::size_t n, DistributionSpec dist) : m_(m), n_(n), dist_(dist) {
        detail::check_budget(m, n);
        dist_.validate();
    }

    double operator()(double q) const { return at_offset(q - dist_.lower); }

    double at_offset(double offset) const {
        if (offset <= 0.0 || offset >= dist_.upper - dist_.lower) return 0.0;
        const double base = pdf_at_offset(dist_, offset);
        if (base == 0.0 || !std::isfinite(base)) return 0.0;
        const double weight = m_ == n_ ? 1.0
                                       : boost::math::ibeta(static_cast<double>(n_ - m_), static_cast<double>(m_),
                                                            cdf_at_offset(dist_, offset));
        return static_cast<double>(n_) * base * weight;
    }

    const DistributionSpec& distribution() const noexcept { return dist_; }

private:
    std::size_t m_;
    std::size_t n_;
    DistributionSpec dist_;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t levels = 0;
};

/// tanh-sinh quadrature over [low, high]; copes with the integrable endpoint
/// singularity of negative power laws. integration_points caps the
/// refinement depth at about log2(points) levels.
template <typename F>
QuadratureResult integrate(F f, double low, double high, std::size_t integration_points = 10000,
                           double relative_tolerance = 1e-10) {
    const auto levels = static_cast<std::size_t>(
        std::clamp(std::ceil(std::log2(static_cast<double>(std::max<std::size_t>(integration_points, 16)))), 4.0,
                   24.0));
    boost::math::quadrature::tanh_sinh<double> integrator(levels);
    QuadratureResult result;
    double l1 = 0.0;
    result.value = integrator.integrate(f, low, high, relative_tolerance, &result.error_estimate, &l1, &result.levels);
    const double accept = 1e-7 * std::max(1.0, l1);
    if (!std::isfinite(result.value) || !(result.error_estimate <= accept)) {
        std::ostringstream msg;
        msg << "quadrature did not converge on [" << low << ", " << high << "]: value=" << result.value
            << " error_estimate=" << result.error_estimate << " l1=" << l1 << " levels=" << result.levels << "/"
            << levels;
        throw NumericError(msg.str());
    }
    return result;
}

/// Integral of g(q) * density(q) over the support. The density is evaluated
/// by offset from the lower bound.
template <typename Density, typename G>
double integrate_against(const Density& density, G g, std::size_t integration_points = 10000) {
    const DistributionSpec& d = density.distribution();
    return integrate([&](double offset) { return g(d.lower + offset) * density.at_offset(offset); }, 0.0,
                     d.upper - d.lower, integration_points)
        .value;
}

/// Expected value of the i-th smallest of n draws.
inline double order_statistic_mean(std::size_t i, std::size_t n, const DistributionSpec& dist,
                                   std::size_t integration_points = 10000) {
    return integrate_against(order_statistic_pdf(i, n, dist), [](double q) { return q; }, integration_points);
}

/// E* for an arbitrary quality law by quadrature of q times the summed top-m
/// order-statistic density.
inline PerformanceBound max_performance_general(std::size_t m, std::size_t n, const DistributionSpec& dist,
                                                std::size_t integration_points = 10000) {
    const TopOrderStatisticsDensity density(m, n, dist);
    return detail::make_bound(integrate_against(density, [](double q) { return q; }, integration_points), m);
}

/// Closed form when available, quadrature otherwise.
inline PerformanceBound max_performance(std::size_t m, std::size_t n, const DistributionSpec& dist) {
    if (dist.kind == DistributionKind::uniform) return max_performance_uniform(m, n, dist.lower, dist.upper);
    return max_performance_general(m, n, dist);
}

/// Real-valued budget maximizing E* for uniform qualities:
/// (q_low + q_high + 2 q_high n) / (2 (q_high - q_low)).
inline double optimal_budget(std::size_t n, double q_low, double q_high) {
    detail::check_support(q_low, q_high);
    if (!(q_high > 0.0))
        throw DomainError("no positive-quality projects: expected performance peaks at m = 0");
    return (q_low + q_high + 2.0 * q_high * static_cast<double>(n)) / (2.0 * (q_high - q_low));
}

/// Nearest integer to optimal_budget clamped to [1, n].
inline std::size_t optimal_budget_rounded(std::size_t n, double q_low, double q_high) {
    const double m = std::round(optimal_budget(n, q_low, q_high));
    return static_cast<std::size_t>(std::clamp(m, 1.0, static_cast<double>(n)));
}

/// Large-n limit of m*/n.
inline double selectiveness_limit(double q_low, double q_high) {
    detail::check_support(q_low, q_high);
    if (q_high <= 0.0) return 0.0;
    if (q_low > 0.0) return 1.0;
    return 1.0 / (1.0 - q_low / q_high);
}

/// Expertise values maximizing delegation performance for uniform types:
/// t_low + (2j - 1)(t_high - t_low)/(2N), ascending.
inline std::vector<double> optimal_delegation_expertise(std::size_t agents, double t_low, double t_high) {
    if (agents == 0) throw ConfigurationError("panel size must be at least 1");
    detail::check_support(t_low, t_high);
    std::vector<double> expertise(agents);
    const double width = t_high - t_low;
    for (std::size_t j = 1; j <= agents; ++j)
        expertise[j - 1] = t_low + static_cast<double>(2 * j - 1) * width / (2.0 * static_cast<double>(agents));
    return expertise;
}

/// E* per project at m = 1: the expected maximum of n uniform draws.
inline double max_quality_single(std::size_t n, double q_low, double q_high) {
    if (n == 0) throw ConfigurationError("n must be at least 1");
    detail::check_support(q_low, q_high);
    const double nd = static_cast<double>(n);
    return q_low + (q_high - q_low) * nd / (nd + 1.0);
}

}  // namespace orgsel
