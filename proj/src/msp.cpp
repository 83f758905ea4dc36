#include "ddrc/msp.hpp"

#include <cmath>

#include "ddrc/alloc_vars.hpp"
#include "ddrc/errors.hpp"
#include "ddrc/linearize.hpp"
#include "ddrc/oracle.hpp"

namespace ddrc::msp {

using lp::Relation;
using lp::Term;

MspModel build_msp(const Instance& inst, std::uint64_t cell_guard, std::uint64_t var_guard) {
    inst.validate();
    MspModel model;
    model.scenarios = enumerate_scenarios(inst, cell_guard);
    const std::uint64_t nv = inst.varying.size();
    const std::uint64_t states = inst.K() + 1;

    // trie footprint: one accumulator per node, one envelope per (node, level)
    long double vars = 0.0L;
    long double width = 1.0L;
    for (std::uint64_t d = 0; d < nv; ++d) {
        width *= states;
        vars += width * (inst.L() + 2);
    }
    if (vars > static_cast<long double>(var_guard))
        throw capacity_error("scenario-expanded model too large",
                             vars > 1e18L ? ~0ull : static_cast<std::uint64_t>(vars),
                             var_guard);

    model.scenario_values.reserve(model.scenarios.size());
    for (const Scenario& s : model.scenarios)
        model.scenario_values.push_back(oracle::scenario_value(inst, s.state));

    lp::ProgramSink sink(model.prog);
    AllocVars alloc = append_allocation_vars(sink, inst);
    model.x = alloc.x;
    model.binaries = alloc.binaries;

    if (nv == 0) {
        // deterministic instance: a pinned unit variable carries the constant
        const int unit = sink.add_variable(1.0, 1.0, model.scenario_values[0]);
        model.scenario_prob_var.assign(1, unit);
        return model;
    }

    // breadth-first trie over the varying components, children in state order,
    // so leaves line up with the scenario odometer
    std::vector<int> frontier;  // accumulator vars of the previous depth
    {
        const int comp = inst.varying[0];
        for (int k = 0; k <= inst.K(); ++k) {
            const int p = sink.add_variable(0.0, 1.0, 0.0);
            std::vector<Term> row{{p, 1.0}};
            for (int l = 0; l <= inst.L(); ++l) {
                const double f = inst.table.prob(comp, k, l);
                if (f != 0.0) row.push_back({model.x[comp][l], -f});
            }
            sink.add_row(Relation::EQ, 0.0, std::move(row));
            frontier.push_back(p);
        }
    }
    for (std::uint64_t d = 1; d < nv; ++d) {
        const int comp = inst.varying[d];
        std::vector<int> next;
        next.reserve(frontier.size() * states);
        for (const int parent : frontier) {
            // one product aux per level, shared by all of this parent's children
            std::vector<int> z(inst.L() + 1);
            for (int l = 0; l <= inst.L(); ++l)
                z[l] = mccormick_product(sink, model.x[comp][l], parent, 0.0, 1.0).aux;
            for (int k = 0; k <= inst.K(); ++k) {
                const int p = sink.add_variable(0.0, 1.0, 0.0);
                std::vector<Term> row{{p, 1.0}};
                for (int l = 0; l <= inst.L(); ++l) {
                    const double f = inst.table.prob(comp, k, l);
                    if (f != 0.0) row.push_back({z[l], -f});
                }
                sink.add_row(Relation::EQ, 0.0, std::move(row));
                next.push_back(p);
            }
        }
        frontier = std::move(next);
    }

    if (frontier.size() != model.scenarios.size())
        throw model_error("scenario trie does not match the enumeration");
    model.scenario_prob_var = frontier;
    for (std::size_t s = 0; s < frontier.size(); ++s)
        model.prog.obj[frontier[s]] = model.scenario_values[s];
    return model;
}

Result solve_msp(const Instance& inst, const Options& opts) {
    MspModel model = build_msp(inst, opts.cell_guard, opts.var_guard);

    bnb::Options engine_opts;
    engine_opts.gap_tol = opts.gap_tol;
    engine_opts.time_limit_s = opts.time_limit_s;
    bnb::Engine engine(model.prog, model.binaries, engine_opts);
    const bnb::Result raw = engine.solve();

    Result res;
    res.status = raw.status;
    res.has_solution = raw.has_incumbent;
    res.objective = raw.objective;
    res.bound = raw.bound;
    res.gap = raw.gap;
    res.nodes = raw.nodes;
    res.trace = raw.trace;
    if (raw.has_incumbent) {
        AllocVars alloc;
        alloc.x = model.x;
        res.x = alloc.read(inst, [&](int var) { return raw.x.at(var); });
    }
    return res;
}

double model_objective_at(const MspModel& model, const Instance& inst, const Allocation& x) {
    lp::LinearProgram pinned = model.prog;
    for (int i = 0; i < inst.n(); ++i)
        for (int l = 0; l <= inst.L(); ++l) {
            const double v = (x.level[i] == l) ? 1.0 : 0.0;
            pinned.lo[model.x[i][l]] = v;
            pinned.hi[model.x[i][l]] = v;
        }
    const lp::Solution s = lp::solve(pinned);
    if (!s.optimal()) throw model_error("pinned scenario model did not solve");
    return s.objective;
}

}  // namespace ddrc::msp
