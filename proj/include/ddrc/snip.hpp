#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ddrc/lp.hpp"

namespace ddrc::snip {

struct Arc {
    int from = 0;
    int to = 0;
    double cap = 0.0;
    double a = 0.0;  // attack-resistance parameter; 0 means the arc cannot fail
};

// Grid interdiction network. Node 0 is the source, node 1 the sink; grid
// node (r, c) sits at 2 + r*cols + c. Failable arcs are those with a > 0;
// source/sink arcs never fail and carry capacity larger than any cut.
struct GridNetwork {
    int rows = 0;
    int cols = 0;
    int num_nodes = 0;
    int source = 0;
    int sink = 1;
    std::vector<Arc> arcs;
    std::vector<int> failable;  // arc ids with a > 0, in arc order

    int grid_node(int r, int c) const { return 2 + r * cols + c; }
};

struct AMode {
    enum class Kind { Uniform, Explicit } kind = Kind::Uniform;
    std::vector<double> a;  // Explicit: one entry per interior arc, in arc order

    static AMode uniform() { return {Kind::Uniform, {}}; }
    static AMode explicit_values(std::vector<double> v) { return {Kind::Explicit, std::move(v)}; }
};

// Single-component state probability: kappa=1 means the arc failed.
double interdiction_probability(double a_k, int kappa, int level);

// Fig-3 topology: bidirectional interior arcs, source feeding the left
// column, right column draining into the sink. Interior capacities are
// uniform integers in {1..10} drawn from `seed`; source/sink arcs carry the
// sum of interior capacities plus one. Uniform mode sets a = budget*levels /
// (number of interior arcs) on every interior arc.
GridNetwork generate_grid(int rows, int cols, std::uint64_t seed, const AMode& mode,
                          int budget, int levels);

// max flow with per-arc capacity multipliers in [0, 1]; multiplier 1 for an
// integral availability vector reproduces the interdicted network's flow
double max_flow(const GridNetwork& net, const std::vector<double>& availability);

// same value through the LP route, for cross-checks
double max_flow_lp(const GridNetwork& net, const std::vector<double>& availability);

// flow value when capacities stay whole but per-unit flow on arc k is
// charged failure_mass[k] (in [0,1]); agrees with max_flow on integral
// failure vectors and is convex in the failure mass
double charged_flow_value(const GridNetwork& net, const std::vector<double>& failure_mass);

// availability = 1 - failure, elementwise
std::vector<double> availability_from_failure(const GridNetwork& net,
                                              const std::vector<double>& failure_mass);

// Cut-potential block for one partition-tree leaf: variables alpha (node
// potentials in [0,1], source pinned to 0, sink to 1) and beta (arc duals in
// [0,1]), rows  alpha_i - alpha_j + beta_k >= -failure_k  per surviving arc,
// and  theta >= sum_k cap_k beta_k. `failure_expr` gives each arc's failure
// mass as an affine expression over model variables (constants for fixed
// arcs). Minimizing theta against these rows reproduces charged_flow_value.
struct LeafBlock {
    std::vector<int> alpha;  // per node
    std::vector<int> beta;   // per arc, -1 where the arc is surely failed
    int theta_row = -1;
};

LeafBlock append_leaf_block(lp::ModelSink& sink, const GridNetwork& net, int theta_var,
                            const std::vector<std::pair<double, std::vector<lp::Term>>>& failure_expr);

void write_dot(const GridNetwork& net, std::ostream& os);

}  // namespace ddrc::snip
