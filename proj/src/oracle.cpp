#include "ddrc/oracle.hpp"

#include <cmath>

#include "ddrc/bounds.hpp"
#include "ddrc/errors.hpp"

namespace ddrc::oracle {

double scenario_value(const Instance& inst, const StateVector& state) {
    if (inst.is_snip()) {
        const SnipRecourse& rec = inst.snip_recourse();
        std::vector<double> avail(rec.net.arcs.size(), 1.0);
        for (int i = 0; i < inst.n(); ++i)
            if (state[i] == 1) avail[rec.component_arc[i]] = 0.0;
        return snip::max_flow(rec.net, avail);
    }
    std::vector<double> s(state.begin(), state.end());
    return bounds::recourse_value(inst, s);
}

double exact_objective(const Instance& inst, const Allocation& x, std::uint64_t cell_guard) {
    const std::vector<Scenario> scenarios = enumerate_scenarios(inst, cell_guard);
    double total = inst.allocation_cost(x);
    for (const Scenario& s : scenarios)
        total += realization_probability(inst, x, s.state) * scenario_value(inst, s.state);
    return total;
}

std::vector<Allocation> enumerate_allocations(const Instance& inst, std::uint64_t guard) {
    const std::uint64_t base = inst.L() + 1;
    std::uint64_t count = 1;
    for (int i = 0; i < inst.n(); ++i) {
        if (count > guard / base)
            throw capacity_error("allocation enumeration too large", 0, guard);
        count *= base;
    }
    std::vector<Allocation> out;
    Allocation x;
    x.level.assign(inst.n(), 0);
    for (;;) {
        if (x.spend() <= inst.budget_rhs) out.push_back(x);
        int i = inst.n() - 1;
        while (i >= 0) {
            if (++x.level[i] <= inst.L()) break;
            x.level[i] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return out;
}

OracleResult brute_force_solve(const Instance& inst, std::uint64_t work_guard) {
    const std::uint64_t scen_base = inst.K() + 1;
    const std::uint64_t alloc_base = inst.L() + 1;
    long double work = 1.0L;
    for (int i = 0; i < inst.n(); ++i) work *= alloc_base;
    for (std::size_t i = 0; i < inst.varying.size(); ++i) work *= scen_base;
    if (work > static_cast<long double>(work_guard))
        throw capacity_error("brute force enumeration too large",
                             work > 1e18L ? ~0ull : static_cast<std::uint64_t>(work),
                             work_guard);

    const std::vector<Scenario> scenarios = enumerate_scenarios(inst);
    std::vector<double> values(scenarios.size());
    for (std::size_t s = 0; s < scenarios.size(); ++s)
        values[s] = scenario_value(inst, scenarios[s].state);

    OracleResult best;
    bool have = false;
    for (const Allocation& x : enumerate_allocations(inst, work_guard)) {
        double obj = inst.allocation_cost(x);
        for (std::size_t s = 0; s < scenarios.size(); ++s)
            obj += realization_probability(inst, x, scenarios[s].state) * values[s];
        // lexicographic tie-break comes free from enumeration order
        if (!have || obj < best.value - 1e-12) {
            best.x = x;
            best.value = obj;
            have = true;
        }
    }
    if (!have) throw model_error("no feasible allocation under the budget");
    return best;
}

}  // namespace ddrc::oracle
