#pragma once

#include <cstdint>
#include <vector>

#include "ddrc/instance.hpp"

namespace ddrc::oracle {

inline constexpr std::uint64_t kWorkGuard = 1ull << 26;

struct OracleResult {
    Allocation x;
    double value = 0.0;
};

// recourse value of one integral scenario state
double scenario_value(const Instance& inst, const StateVector& state);

// exact probability-weighted objective of a fixed allocation
double exact_objective(const Instance& inst, const Allocation& x,
                       std::uint64_t cell_guard = kScenarioCellGuard);

// exhaustive minimum over feasible allocations; ties break to the
// lexicographically smallest allocation
OracleResult brute_force_solve(const Instance& inst, std::uint64_t work_guard = kWorkGuard);

// every budget-feasible level assignment, lexicographic order
std::vector<Allocation> enumerate_allocations(const Instance& inst,
                                              std::uint64_t guard = kWorkGuard);

}  // namespace ddrc::oracle
