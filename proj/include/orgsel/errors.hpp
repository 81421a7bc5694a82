#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace orgsel {

/// Invalid parameters: bad distribution bounds, m > n, negative breadth, etc.
class ConfigurationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Quadrature or other numeric procedure failed to reach its tolerance.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A closed form was evaluated outside the region where it has a meaning.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A single Monte Carlo replication threw; carries the replication index.
class ReplicationError : public std::runtime_error {
public:
    ReplicationError(std::size_t index, const std::string& what)
        : std::runtime_error("replication " + std::to_string(index) + " failed: " + what),
          index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

}  // namespace orgsel
