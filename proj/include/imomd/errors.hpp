#pragma once

#include <stdexcept>
#include <string>

namespace imomd {

/// Caller handed us something outside an operation's domain.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed external data (OSM XML, edge-list, scenario text).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// An external id in a scenario that the loaded graph does not know.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Required destinations are not connected in the destination graph.
class NoSequenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A destination cannot be inserted anywhere in the current sequence.
class NoInsertionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Broken internal precondition; indicates a bug rather than bad input.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace imomd
