#pragma once

#include <cstdint>
#include <vector>

#include "ddrc/bnb.hpp"
#include "ddrc/instance.hpp"

namespace ddrc::msp {

inline constexpr std::uint64_t kModelVarGuard = 1ull << 21;

// Scenario-expanded benchmark model. Second-stage blocks contain no
// first-stage variables, so each block is presolved to its optimal value and
// the multilinear scenario weights are what remains to linearize; chains
// over a shared-prefix trie keep the model at one envelope per
// (assignment-prefix, level).
struct MspModel {
    lp::LinearProgram prog;
    std::vector<std::vector<int>> x;
    std::vector<int> binaries;
    std::vector<Scenario> scenarios;
    std::vector<double> scenario_values;  // presolved block optima
    std::vector<int> scenario_prob_var;   // trie leaf accumulator per scenario (-1 if constant)
};

MspModel build_msp(const Instance& inst, std::uint64_t cell_guard = kScenarioCellGuard,
                   std::uint64_t var_guard = kModelVarGuard);

struct Options {
    double gap_tol = 1e-6;
    double time_limit_s = 0.0;
    std::uint64_t cell_guard = kScenarioCellGuard;
    std::uint64_t var_guard = kModelVarGuard;
};

struct Result {
    bnb::SolveStatus status = bnb::SolveStatus::Infeasible;
    bool has_solution = false;
    Allocation x;
    double objective = 0.0;
    double bound = 0.0;
    double gap = 0.0;
    std::int64_t nodes = 0;
    std::vector<bnb::TraceRow> trace;
};

Result solve_msp(const Instance& inst, const Options& opts = {});

// objective of the built model with the allocation pinned; equals the exact
// probability-weighted objective whenever the chains are exact
double model_objective_at(const MspModel& model, const Instance& inst, const Allocation& x);

}  // namespace ddrc::msp
