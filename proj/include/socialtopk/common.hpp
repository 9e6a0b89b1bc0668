#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace socialtopk {

using UserId = std::uint32_t;
using ItemId = std::uint32_t;
using TagId = std::uint32_t;

/// Stands in for a query tag that is absent from the tag dictionary.
/// Every list lookup on it is empty, so items score 0 on that dimension.
inline constexpr TagId kUnknownTag = std::numeric_limits<TagId>::max();

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Lookup of a user (or seeker) that does not exist.
class NotFoundError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Inconsistent or incomplete run configuration (missing files, bad flags).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace socialtopk
