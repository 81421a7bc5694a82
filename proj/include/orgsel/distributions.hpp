#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "orgsel/errors.hpp"
#include "orgsel/random.hpp"

namespace orgsel {

enum class DistributionKind { uniform, truncated_normal, power_law };

/// Sampling law for project qualities or types, always on a bounded support.
///
/// The power law has density proportional to (x - lower)^exponent, so for
/// negative exponents the mass piles up at the lower end of the support.
struct DistributionSpec {
    DistributionKind kind = DistributionKind::uniform;
    double lower = 0.0;
    double upper = 1.0;
    double mean = 0.0;      // truncated normal only
    double sd = 1.0;        // truncated normal only
    double exponent = 0.0;  // power law only

    static DistributionSpec uniform(double lower, double upper) {
        DistributionSpec d;
        d.kind = DistributionKind::uniform;
        d.lower = lower;
        d.upper = upper;
        d.validate();
        return d;
    }

    static DistributionSpec truncated_normal(double mean, double sd, double lower, double upper) {
        DistributionSpec d;
        d.kind = DistributionKind::truncated_normal;
        d.mean = mean;
        d.sd = sd;
        d.lower = lower;
        d.upper = upper;
        d.validate();
        return d;
    }

    static DistributionSpec power_law(double exponent, double lower, double upper) {
        DistributionSpec d;
        d.kind = DistributionKind::power_law;
        d.exponent = exponent;
        d.lower = lower;
        d.upper = upper;
        d.validate();
        return d;
    }

    void validate() const {
        if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper))
            throw ConfigurationError("distribution support requires finite lower < upper");
        if (kind == DistributionKind::truncated_normal && (!(sd > 0.0) || !std::isfinite(mean)))
            throw ConfigurationError("truncated normal requires sd > 0 and a finite mean");
        if (kind == DistributionKind::power_law && !(exponent > -1.0))
            throw ConfigurationError("power-law exponent must exceed -1");
    }

    bool operator==(const DistributionSpec&) const = default;
};

namespace detail {

inline const boost::math::normal_distribution<double>& standard_normal() {
    static const boost::math::normal_distribution<double> dist(0.0, 1.0);
    return dist;
}

struct TruncationBounds {
    double alpha;  // standardized lower bound
    double beta;   // standardized upper bound
};

inline TruncationBounds standardized(const DistributionSpec& d) {
    return {(d.lower - d.mean) / d.sd, (d.upper - d.mean) / d.sd};
}

// Inverse CDF of the standard normal truncated to [alpha, beta]. Intervals in
// the upper tail are reflected so the CDF differences stay well conditioned.
inline double truncated_standard_quantile(double alpha, double beta, double u) {
    using boost::math::cdf;
    using boost::math::quantile;
    const auto& z = standard_normal();
    if (alpha > 0.0) return -truncated_standard_quantile(-beta, -alpha, 1.0 - u);
    const double lo = cdf(z, alpha);
    const double hi = cdf(z, beta);
    double p = lo + u * (hi - lo);
    p = std::clamp(p, lo, hi);
    if (p <= 0.0) return alpha;
    if (p >= 1.0) return beta;
    return std::clamp(quantile(z, p), alpha, beta);
}

}  // namespace detail

inline double cdf(const DistributionSpec& d, double x) {
    if (x <= d.lower) return 0.0;
    if (x >= d.upper) return 1.0;
    switch (d.kind) {
        case DistributionKind::uniform:
            return (x - d.lower) / (d.upper - d.lower);
        case DistributionKind::truncated_normal: {
            const auto [a, b] = detail::standardized(d);
            const auto& z = detail::standard_normal();
            const double z_x = (x - d.mean) / d.sd;
            if (a > 0.0) {
                const double tail_a = boost::math::cdf(boost::math::complement(z, a));
                const double tail_b = boost::math::cdf(boost::math::complement(z, b));
                const double tail_x = boost::math::cdf(boost::math::complement(z, z_x));
                return (tail_a - tail_x) / (tail_a - tail_b);
            }
            const double lo = boost::math::cdf(z, a);
            return (boost::math::cdf(z, z_x) - lo) / (boost::math::cdf(z, b) - lo);
        }
        case DistributionKind::power_law:
            return std::pow((x - d.lower) / (d.upper - d.lower), d.exponent + 1.0);
    }
    return 0.0;
}

inline double pdf(const DistributionSpec& d, double x) {
    if (x < d.lower || x > d.upper) return 0.0;
    const double width = d.upper - d.lower;
    switch (d.kind) {
        case DistributionKind::uniform:
            return 1.0 / width;
        case DistributionKind::truncated_normal: {
            const auto [a, b] = detail::standardized(d);
            const auto& z = detail::standard_normal();
            const double mass = a > 0.0
                ? boost::math::cdf(boost::math::complement(z, a)) - boost::math::cdf(boost::math::complement(z, b))
                : boost::math::cdf(z, b) - boost::math::cdf(z, a);
            return boost::math::pdf(z, (x - d.mean) / d.sd) / (d.sd * mass);
        }
        case DistributionKind::power_law: {
            const double k1 = d.exponent + 1.0;
            return k1 / width * std::pow((x - d.lower) / width, d.exponent);
        }
    }
    return 0.0;
}

/// pdf and cdf evaluated at lower + offset without forming the sum, so the
/// power-law singularity at the lower bound stays resolvable for tiny offsets.
inline double pdf_at_offset(const DistributionSpec& d, double offset) {
    if (d.kind != DistributionKind::power_law) return pdf(d, d.lower + offset);
    const double width = d.upper - d.lower;
    if (offset <= 0.0 || offset > width) return 0.0;
    return (d.exponent + 1.0) / width * std::pow(offset / width, d.exponent);
}

inline double cdf_at_offset(const DistributionSpec& d, double offset) {
    if (d.kind != DistributionKind::power_law) return cdf(d, d.lower + offset);
    const double width = d.upper - d.lower;
    if (offset <= 0.0) return 0.0;
    if (offset >= width) return 1.0;
    return std::pow(offset / width, d.exponent + 1.0);
}

/// Inverse CDF, u in [0, 1].
inline double quantile(const DistributionSpec& d, double u) {
    const double width = d.upper - d.lower;
    double x = d.lower;
    switch (d.kind) {
        case DistributionKind::uniform:
            x = d.lower + u * width;
            break;
        case DistributionKind::truncated_normal: {
            const auto [a, b] = detail::standardized(d);
            x = d.mean + d.sd * detail::truncated_standard_quantile(a, b, u);
            break;
        }
        case DistributionKind::power_law:
            x = d.lower + width * std::pow(u, 1.0 / (d.exponent + 1.0));
            break;
    }
    return std::clamp(x, d.lower, d.upper);
}

inline double mean(const DistributionSpec& d) {
    switch (d.kind) {
        case DistributionKind::uniform:
            return 0.5 * (d.lower + d.upper);
        case DistributionKind::truncated_normal: {
            const auto [a, b] = detail::standardized(d);
            const auto& z = detail::standard_normal();
            const double mass = a > 0.0
                ? boost::math::cdf(boost::math::complement(z, a)) - boost::math::cdf(boost::math::complement(z, b))
                : boost::math::cdf(z, b) - boost::math::cdf(z, a);
            return d.mean + d.sd * (boost::math::pdf(z, a) - boost::math::pdf(z, b)) / mass;
        }
        case DistributionKind::power_law: {
            const double k1 = d.exponent + 1.0;
            return d.lower + (d.upper - d.lower) * k1 / (k1 + 1.0);
        }
    }
    return 0.0;
}

/// One draw by inverse transform; consumes exactly one uniform per call.
inline double sample(const DistributionSpec& d, RandomStream& rng) {
    return quantile(d, rng.uniform01());
}

namespace detail {

/// Shortest round-trip decimal form of a double.
inline std::string format_number(double x) {
    std::array<char, 64> buf{};
    const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), result.ptr);
}

inline double parse_number(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || result.ec != std::errc{} || result.ptr != text.data() + text.size())
        throw ConfigurationError("not a number: '" + std::string(text) + "'");
    return value;
}

}  // namespace detail

/// Compact text form, also accepted by parse_distribution():
/// "uniform(a,b)", "truncnormal(mean,sd,a,b)", "powerlaw(k,a,b)".
inline std::string to_string(const DistributionSpec& d) {
    using detail::format_number;
    switch (d.kind) {
        case DistributionKind::uniform:
            return "uniform(" + format_number(d.lower) + ";" + format_number(d.upper) + ")";
        case DistributionKind::truncated_normal:
            return "truncnormal(" + format_number(d.mean) + ";" + format_number(d.sd) + ";" +
                   format_number(d.lower) + ";" + format_number(d.upper) + ")";
        case DistributionKind::power_law:
            return "powerlaw(" + format_number(d.exponent) + ";" + format_number(d.lower) + ";" +
                   format_number(d.upper) + ")";
    }
    return {};
}

/// Parses the to_string() form. Arguments may be separated by ';' or ','.
inline DistributionSpec parse_distribution(std::string_view text) {
    const auto open = text.find('(');
    const auto close = text.rfind(')');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open)
        throw ConfigurationError("malformed distribution: '" + std::string(text) + "'");
    std::string name;
    for (char c : text.substr(0, open))
        if (!std::isspace(static_cast<unsigned char>(c))) name += static_cast<char>(std::tolower(c));
    std::vector<double> args;
    std::string_view rest = text.substr(open + 1, close - open - 1);
    while (!rest.empty()) {
        const auto sep = rest.find_first_of(";,");
        args.push_back(detail::parse_number(rest.substr(0, sep)));
        if (sep == std::string_view::npos) break;
        rest.remove_prefix(sep + 1);
    }
    auto expect = [&](std::size_t count) {
        if (args.size() != count)
            throw ConfigurationError("distribution '" + name + "' takes " + std::to_string(count) + " arguments");
    };
    if (name == "uniform" || name == "u") {
        expect(2);
        return DistributionSpec::uniform(args[0], args[1]);
    }
    if (name == "truncnormal" || name == "truncated-normal" || name == "truncated_normal") {
        expect(4);
        return DistributionSpec::truncated_normal(args[0], args[1], args[2], args[3]);
    }
    if (name == "powerlaw" || name == "power-law" || name == "power_law") {
        expect(3);
        return DistributionSpec::power_law(args[0], args[1], args[2]);
    }
    throw ConfigurationError("unknown distribution '" + name + "'");
}

}  // namespace orgsel
