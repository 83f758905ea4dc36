#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddrc/bnb.hpp"
#include "ddrc/instance.hpp"

namespace ddrc::sra {

struct Options {
    double epsilon = -1.0;  // < 0: 1e-6 * (1 + |root relaxation|)
    double gap_tol = 1e-6;
    double time_limit_s = 0.0;
};

struct RefinementEvent {
    int leaf = -1;
    int component = -1;
};

struct Result {
    bnb::SolveStatus status = bnb::SolveStatus::Infeasible;
    bool has_solution = false;
    Allocation x;
    double objective = 0.0;
    double bound = 0.0;
    double gap = 0.0;
    std::int64_t refinements = 0;
    std::vector<RefinementEvent> events;
    int leaf_count = 1;
    std::int64_t nodes = 0;
    double epsilon_used = 0.0;
    std::vector<bnb::TraceRow> trace;
    std::string tree_snapshot;
};

// Successive refinement: branch and bound on the epigraph model, rejecting
// any incumbent whose worst leaf gap still exceeds epsilon and growing the
// partition tree at that leaf before re-solving.
Result run(const Instance& inst, const Options& opts = {});

// Optimal value of the epigraph model for the tree reached after the first
// `prefix` recorded refinements; used to audit the bound chain.
double epigraph_value_for_prefix(const Instance& inst,
                                 const std::vector<RefinementEvent>& events,
                                 std::size_t prefix, double gap_tol = 1e-9);

}  // namespace ddrc::sra
