#include "ddrc/sra.hpp"

#include <cmath>
#include <sstream>

#include "ddrc/bounds.hpp"
#include "ddrc/epigraph.hpp"
#include "ddrc/errors.hpp"
#include "ddrc/partition_tree.hpp"

namespace ddrc::sra {

Result run(const Instance& inst, const Options& opts) {
    inst.validate();

    lp::LinearProgram prog;
    lp::ProgramSink sink(prog);
    EpigraphModel model(inst, sink);

    double epsilon = opts.epsilon;
    if (epsilon < 0.0) {
        const lp::Solution root = lp::solve(prog);
        const double root_bound = root.optimal() ? root.objective : 0.0;
        epsilon = 1e-6 * (1.0 + std::fabs(root_bound));
    }

    bnb::Options engine_opts;
    engine_opts.gap_tol = opts.gap_tol;
    engine_opts.time_limit_s = opts.time_limit_s;
    bnb::Engine engine(prog, model.binaries(), engine_opts);

    PartitionTree tree(inst.n());
    std::vector<RefinementEvent> events;

    engine.set_callback([&](bnb::Candidate& cand) {
        const Allocation x = model.read_allocation(cand.value);
        const int leaf =
            select_leaf(tree, [&](int l) { return bounds::leaf_gap(inst, tree, l, x); });
        const double gap = bounds::leaf_gap(inst, tree, leaf, x);
        if (gap <= epsilon) return bnb::Verdict::Accept;

        const int component = select_component(inst, tree, leaf, x, [&](int c, int k) {
            return bounds::child_gap(inst, tree, leaf, c, k, x);
        });
        const std::vector<int> children = tree.refine(leaf, component, inst.K());

        bnb::EditSink edit_sink(*cand.edit);
        model.apply_refinement(edit_sink, tree, leaf, component, children);
        events.push_back({leaf, component});
        ++*cand.refinement_counter;
        return bnb::Verdict::Reject;
    });

    const bnb::Result raw = engine.solve();

    Result res;
    res.status = raw.status;
    res.has_solution = raw.has_incumbent;
    res.objective = raw.objective;
    res.bound = raw.bound;
    res.gap = raw.gap;
    res.nodes = raw.nodes;
    res.refinements = static_cast<std::int64_t>(events.size());
    res.events = events;
    res.leaf_count = static_cast<int>(tree.leaves().size());
    res.epsilon_used = epsilon;
    res.trace = raw.trace;
    if (raw.has_incumbent)
        res.x = model.read_allocation([&](int var) { return raw.x.at(var); });
    std::ostringstream snapshot;
    tree.write_snapshot(snapshot);
    res.tree_snapshot = snapshot.str();
    return res;
}

double epigraph_value_for_prefix(const Instance& inst,
                                 const std::vector<RefinementEvent>& events,
                                 std::size_t prefix, double gap_tol) {
    if (prefix > events.size()) throw input_error("prefix exceeds recorded refinements");

    lp::LinearProgram prog;
    lp::ProgramSink sink(prog);
    EpigraphModel model(inst, sink);
    PartitionTree tree(inst.n());
    for (std::size_t e = 0; e < prefix; ++e) {
        const std::vector<int> children =
            tree.refine(events[e].leaf, events[e].component, inst.K());
        model.apply_refinement(sink, tree, events[e].leaf, events[e].component, children);
    }

    bnb::Options opts;
    opts.gap_tol = gap_tol;
    bnb::Engine engine(prog, model.binaries(), opts);
    const bnb::Result res = engine.solve();
    if (res.status != bnb::SolveStatus::Optimal)
        throw model_error("epigraph replay did not solve to optimality");
    return res.objective;
}

}  // namespace ddrc::sra
