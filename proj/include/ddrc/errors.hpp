#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ddrc {

// Bad caller input: malformed files, dimension mismatches, out-of-range states.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// A requested enumeration or model would exceed the configured work guard.
class capacity_error : public std::runtime_error {
public:
    capacity_error(const std::string& what, std::uint64_t required, std::uint64_t limit)
        : std::runtime_error(what + " (required " + std::to_string(required) +
                             ", limit " + std::to_string(limit) + ")"),
          required(required),
          limit(limit) {}

    std::uint64_t required;
    std::uint64_t limit;
};

// Structurally invalid model (e.g. infeasible recourse under complete-recourse assumptions).
class model_error : public std::runtime_error {
public:
    explicit model_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure inside a solver after all safeguards.
class solver_error : public std::runtime_error {
public:
    explicit solver_error(const std::string& what, std::string log = {})
        : std::runtime_error(what), iteration_log(std::move(log)) {}

    std::string iteration_log;
};

}  // namespace ddrc
