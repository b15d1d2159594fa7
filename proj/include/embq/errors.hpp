#pragma once

#include <stdexcept>
#include <string>

namespace embq {

// Bad input: malformed files, schema violations, precondition failures.
// Maps to CLI exit code 2.
class UsageError : public std::runtime_error {
  public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// A configured resource cap was exceeded. Maps to CLI exit code 3.
class CapError : public std::runtime_error {
  public:
    explicit CapError(const std::string& what) : std::runtime_error(what) {}
};

// Violation of an internal guarantee (e.g. a verified-by-construction
// equivalence failed to verify). Never expected on valid inputs.
class EngineError : public std::logic_error {
  public:
    explicit EngineError(const std::string& what) : std::logic_error(what) {}
};

} // namespace embq
