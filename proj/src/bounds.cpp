#include "ddrc/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "ddrc/errors.hpp"
#include "ddrc/lp.hpp"

namespace ddrc::bounds {

using lp::LinearProgram;
using lp::Relation;
using lp::Term;

namespace {

void check_state(const Instance& inst, const std::vector<double>& state) {
    if (static_cast<int>(state.size()) != inst.n())
        throw input_error("state vector length mismatch");
    for (double v : state)
        if (v < -1e-9 || v > inst.K() + 1e-9)
            throw input_error("state component outside [0, K]");
}

std::vector<double> arc_failure_mass(const Instance& inst, const std::vector<double>& state) {
    const SnipRecourse& rec = inst.snip_recourse();
    std::vector<double> fail(rec.net.arcs.size(), 0.0);
    for (int i = 0; i < inst.n(); ++i)
        fail[rec.component_arc[i]] = std::clamp(state[i], 0.0, 1.0);
    return fail;
}

double generic_recourse_value(const Instance& inst, const std::vector<double>& state) {
    const GenericRecourse& rec = inst.generic_recourse();
    LinearProgram prog;
    for (int v = 0; v < rec.n_y; ++v) prog.add_variable(0.0, lp::kInf, rec.q[v]);
    for (const lp::RowSpec& row : rec.rows) prog.add_row(row.rel, row.rhs, row.terms);
    for (int i = 0; i < inst.n(); ++i)
        prog.add_row(Relation::LE, rec.u[i] * state[i], {{rec.capacity_var[i], 1.0}});
    const lp::Solution s = lp::solve(prog);
    if (s.status == lp::Status::Infeasible)
        throw model_error("recourse infeasible: the template violates complete recourse");
    if (!s.optimal()) throw model_error("recourse program did not solve to optimality");
    return s.objective;
}

double generic_penalized_value(const Instance& inst, const std::vector<double>& state) {
    const GenericRecourse& rec = inst.generic_recourse();
    if (inst.K() != 1)
        throw model_error(
            "penalized recourse for explicit templates is defined for binary states only");
    LinearProgram prog;
    std::vector<double> charge(rec.n_y, 0.0);
    for (int i = 0; i < inst.n(); ++i)
        charge[rec.capacity_var[i]] += rec.M[i] * (1.0 - state[i]);
    for (int v = 0; v < rec.n_y; ++v) prog.add_variable(0.0, lp::kInf, rec.q[v] + charge[v]);
    for (const lp::RowSpec& row : rec.rows) prog.add_row(row.rel, row.rhs, row.terms);
    for (int i = 0; i < inst.n(); ++i)
        prog.add_row(Relation::LE, rec.u[i], {{rec.capacity_var[i], 1.0}});
    const lp::Solution s = lp::solve(prog);
    if (s.status == lp::Status::Infeasible)
        throw model_error("penalized recourse infeasible");
    if (!s.optimal()) throw model_error("penalized recourse did not solve to optimality");
    return s.objective;
}

}  // namespace

double recourse_value(const Instance& inst, const std::vector<double>& state) {
    check_state(inst, state);
    if (inst.is_snip())
        return snip::charged_flow_value(inst.snip_recourse().net, arc_failure_mass(inst, state));
    return generic_recourse_value(inst, state);
}

double penalized_value(const Instance& inst, const std::vector<double>& state) {
    check_state(inst, state);
    if (inst.is_snip()) {
        const SnipRecourse& rec = inst.snip_recourse();
        return snip::max_flow(
            rec.net, snip::availability_from_failure(rec.net, arc_failure_mass(inst, state)));
    }
    return generic_penalized_value(inst, state);
}

double recourse_upper_bound(const Instance& inst) {
    if (inst.is_snip()) {
        const SnipRecourse& rec = inst.snip_recourse();
        return snip::max_flow(rec.net, std::vector<double>(rec.net.arcs.size(), 1.0));
    }
    // the value function is nonincreasing in the state, so the zero state
    // dominates every point of the box
    return recourse_value(inst, std::vector<double>(inst.n(), 0.0));
}

BoundPair tree_bounds(const Instance& inst, const PartitionTree& tree, const Allocation& x) {
    BoundPair out;
    for (int leaf : tree.leaves()) {
        BoundLeaf row;
        row.leaf = leaf;
        row.probability = node_probability(inst, tree, leaf, x);
        const std::vector<double> mean = leaf_conditional_mean(inst, tree, leaf, x);
        row.theta = recourse_value(inst, mean);
        row.theta_tilde = penalized_value(inst, mean);
        out.lower += row.probability * row.theta;
        out.upper += row.probability * row.theta_tilde;
        out.breakdown.push_back(row);
    }
    return out;
}

double leaf_gap(const Instance& inst, const PartitionTree& tree, int leaf, const Allocation& x) {
    const double p = node_probability(inst, tree, leaf, x);
    if (p <= 0.0) return 0.0;
    const std::vector<double> mean = leaf_conditional_mean(inst, tree, leaf, x);
    return std::max(0.0, p * (penalized_value(inst, mean) - recourse_value(inst, mean)));
}

double child_gap(const Instance& inst, const PartitionTree& tree, int leaf, int component,
                 int state, const Allocation& x) {
    const TreeNode& nd = tree.node(leaf);
    if (nd.fixed_map[component] >= 0)
        throw input_error("child_gap: component already fixed at this leaf");
    const double p = node_probability(inst, tree, leaf, x) *
                     inst.table.prob(component, state, x.level[component]);
    if (p <= 0.0) return 0.0;
    std::vector<int> fixed = nd.fixed_map;
    fixed[component] = state;
    const std::vector<double> mean = expected_state(inst, x, fixed);
    return std::max(0.0, p * (penalized_value(inst, mean) - recourse_value(inst, mean)));
}

}  // namespace ddrc::bounds
