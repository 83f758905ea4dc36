#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ddrc/lp.hpp"
#include "ddrc/snip.hpp"

namespace ddrc {

// dense p[i][kappa][level] with every (i, level) column a distribution over states
struct StateProbabilityTable {
    int n = 0;
    int K = 0;
    int L = 0;
    std::vector<double> p;

    static StateProbabilityTable zeros(int n, int K, int L) {
        StateProbabilityTable t;
        t.n = n;
        t.K = K;
        t.L = L;
        t.p.assign(static_cast<std::size_t>(n) * (K + 1) * (L + 1), 0.0);
        return t;
    }

    double prob(int i, int kappa, int level) const {
        return p[(static_cast<std::size_t>(i) * (K + 1) + kappa) * (L + 1) + level];
    }
    double& prob(int i, int kappa, int level) {
        return p[(static_cast<std::size_t>(i) * (K + 1) + kappa) * (L + 1) + level];
    }

    // true when the component's state is almost surely the same at every level
    bool degenerate(int i) const;
    // that state, or -1 for nondegenerate components
    int sure_state(int i) const;

    void validate() const;
};

struct Allocation {
    std::vector<int> level;  // chosen level per component

    int spend() const {
        int s = 0;
        for (int l : level) s += l;
        return s;
    }
};

// explicit second stage: min q'y  s.t. W y (rel) r,  y_{cap_var[i]} <= u[i] * state_i,  y >= 0
struct GenericRecourse {
    int n_y = 0;
    std::vector<double> q;
    std::vector<lp::RowSpec> rows;  // over y variables
    std::vector<int> capacity_var;  // per component
    std::vector<double> u;          // per component, > 0
    std::vector<double> M;          // per component dual bound, >= 0
};

// max-flow interdiction second stage on a grid; component i is failable arc
// component_arc[i], state kappa=1 means the arc failed
struct SnipRecourse {
    snip::GridNetwork net;
    std::vector<int> component_arc;
};

struct GeneratorSpec {
    int rows = 0;
    int cols = 0;
    std::uint64_t seed = 0;
    snip::AMode a_mode;
};

struct Instance {
    StateProbabilityTable table;
    std::vector<std::vector<double>> alloc_cost;  // [i][level]
    int budget_rhs = 0;
    std::variant<GenericRecourse, SnipRecourse> recourse;
    std::vector<int> varying;  // components with nondegenerate state tables

    // kept for instances produced from a grid spec, so files stay small and
    // regeneration is reproducible
    std::optional<GeneratorSpec> generator;

    int n() const { return table.n; }
    int K() const { return table.K; }
    int L() const { return table.L; }

    bool is_snip() const { return std::holds_alternative<SnipRecourse>(recourse); }
    const SnipRecourse& snip_recourse() const { return std::get<SnipRecourse>(recourse); }
    const GenericRecourse& generic_recourse() const { return std::get<GenericRecourse>(recourse); }

    double allocation_cost(const Allocation& x) const;
    bool feasible(const Allocation& x) const;
    void validate() const;
    void refresh_varying();
};

using StateVector = std::vector<int>;

struct Scenario {
    StateVector state;               // all components
    std::vector<int> varying_state;  // parallel to Instance::varying
};

double realization_probability(const Instance& inst, const Allocation& x,
                               const StateVector& state);

// componentwise expected state under x; `fixed` pins components (-1 = free)
std::vector<double> expected_state(const Instance& inst, const Allocation& x,
                                   const std::vector<int>& fixed);

inline constexpr std::uint64_t kScenarioCellGuard = 1ull << 24;

std::vector<Scenario> enumerate_scenarios(const Instance& inst,
                                          std::uint64_t cell_guard = kScenarioCellGuard);

// builds the SP instance for a generated grid: components are the failable
// arcs, allocation costs are zero, budget_rhs = budget * levels
Instance make_grid_instance(int rows, int cols, std::uint64_t seed, const snip::AMode& mode,
                            int budget, int levels);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);
Instance instance_from_json_text(const std::string& text);
std::string instance_to_json_text(const Instance& inst);

}  // namespace ddrc
