#include "ddrc/snip.hpp"

#include <cmath>
#include <ostream>

#include "ddrc/errors.hpp"
#include "ddrc/maxflow.hpp"
#include "ddrc/rng.hpp"

namespace ddrc::snip {

using lp::LinearProgram;
using lp::Relation;
using lp::Term;

double interdiction_probability(double a_k, int kappa, int level) {
    if (kappa != 0 && kappa != 1) throw input_error("interdiction_probability: kappa must be 0 or 1");
    if (level < 0) throw input_error("interdiction_probability: negative level");
    if (a_k < 0.0) throw input_error("interdiction_probability: negative a_k");
    double fail;
    if (level == 0) fail = 0.0;
    else fail = static_cast<double>(level) / (static_cast<double>(level) + a_k);
    return kappa == 1 ? fail : 1.0 - fail;
}

GridNetwork generate_grid(int rows, int cols, std::uint64_t seed, const AMode& mode,
                          int budget, int levels) {
    if (rows < 2 || cols < 2) throw input_error("generate_grid: rows and cols must be >= 2");

    GridNetwork net;
    net.rows = rows;
    net.cols = cols;
    net.num_nodes = 2 + rows * cols;

    Rng rng(seed);
    double interior_total = 0.0;
    auto add_interior = [&](int from, int to) {
        Arc arc;
        arc.from = from;
        arc.to = to;
        arc.cap = static_cast<double>(rng.next_int(1, 10));
        interior_total += arc.cap;
        net.arcs.push_back(arc);
    };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) {
                add_interior(net.grid_node(r, c), net.grid_node(r, c + 1));
                add_interior(net.grid_node(r, c + 1), net.grid_node(r, c));
            }
            if (r + 1 < rows) {
                add_interior(net.grid_node(r, c), net.grid_node(r + 1, c));
                add_interior(net.grid_node(r + 1, c), net.grid_node(r, c));
            }
        }
    }
    const int n_interior = static_cast<int>(net.arcs.size());

    if (mode.kind == AMode::Kind::Explicit) {
        if (static_cast<int>(mode.a.size()) != n_interior)
            throw input_error("explicit a vector has " + std::to_string(mode.a.size()) +
                              " entries; grid has " + std::to_string(n_interior) +
                              " interior arcs");
        for (double v : mode.a)
            if (v < 0.0 || !std::isfinite(v)) throw input_error("a values must be finite and >= 0");
        for (int k = 0; k < n_interior; ++k) net.arcs[k].a = mode.a[k];
    } else {
        const double a = static_cast<double>(budget) * levels / n_interior;
        for (int k = 0; k < n_interior; ++k) net.arcs[k].a = a;
    }

    const double big = interior_total + 1.0;
    for (int r = 0; r < rows; ++r)
        net.arcs.push_back(Arc{net.source, net.grid_node(r, 0), big, 0.0});
    for (int r = 0; r < rows; ++r)
        net.arcs.push_back(Arc{net.grid_node(r, cols - 1), net.sink, big, 0.0});

    for (int k = 0; k < static_cast<int>(net.arcs.size()); ++k)
        if (net.arcs[k].a > 0.0) net.failable.push_back(k);
    return net;
}

double max_flow(const GridNetwork& net, const std::vector<double>& availability) {
    if (availability.size() != net.arcs.size())
        throw input_error("availability vector size mismatch");
    MaxFlow mf(net.num_nodes);
    for (std::size_t k = 0; k < net.arcs.size(); ++k) {
        const double mult = availability[k];
        if (mult > 1e-15) mf.add_arc(net.arcs[k].from, net.arcs[k].to, net.arcs[k].cap * mult);
    }
    return mf.solve(net.source, net.sink);
}

double max_flow_lp(const GridNetwork& net, const std::vector<double>& availability) {
    if (availability.size() != net.arcs.size())
        throw input_error("availability vector size mismatch");
    LinearProgram prog;
    std::vector<int> y(net.arcs.size());
    for (std::size_t k = 0; k < net.arcs.size(); ++k)
        y[k] = prog.add_variable(0.0, net.arcs[k].cap * availability[k], 0.0);
    double big = 1.0;
    for (const Arc& a : net.arcs) big += a.cap;
    const int y_ts = prog.add_variable(0.0, big, -1.0);

    std::vector<std::vector<Term>> conserve(net.num_nodes);
    for (std::size_t k = 0; k < net.arcs.size(); ++k) {
        conserve[net.arcs[k].from].push_back({y[k], 1.0});
        conserve[net.arcs[k].to].push_back({y[k], -1.0});
    }
    conserve[net.sink].push_back({y_ts, 1.0});
    conserve[net.source].push_back({y_ts, -1.0});
    for (int v = 0; v < net.num_nodes; ++v)
        prog.add_row(Relation::EQ, 0.0, std::move(conserve[v]));

    const lp::Solution s = lp::solve(prog);
    if (!s.optimal()) throw model_error("max-flow LP did not solve");
    return -s.objective;
}

double charged_flow_value(const GridNetwork& net, const std::vector<double>& failure_mass) {
    if (failure_mass.size() != net.arcs.size())
        throw input_error("failure mass vector size mismatch");
    LinearProgram prog;
    std::vector<int> y(net.arcs.size());
    for (std::size_t k = 0; k < net.arcs.size(); ++k)
        y[k] = prog.add_variable(0.0, net.arcs[k].cap, failure_mass[k]);
    double big = 1.0;
    for (const Arc& a : net.arcs) big += a.cap;
    const int y_ts = prog.add_variable(0.0, big, -1.0);

    std::vector<std::vector<Term>> conserve(net.num_nodes);
    for (std::size_t k = 0; k < net.arcs.size(); ++k) {
        conserve[net.arcs[k].from].push_back({y[k], 1.0});
        conserve[net.arcs[k].to].push_back({y[k], -1.0});
    }
    conserve[net.sink].push_back({y_ts, 1.0});
    conserve[net.source].push_back({y_ts, -1.0});
    for (int v = 0; v < net.num_nodes; ++v)
        prog.add_row(Relation::EQ, 0.0, std::move(conserve[v]));

    const lp::Solution s = lp::solve(prog);
    if (!s.optimal()) throw model_error("charged-flow LP did not solve");
    return -s.objective;
}

std::vector<double> availability_from_failure(const GridNetwork& net,
                                              const std::vector<double>& failure_mass) {
    if (failure_mass.size() != net.arcs.size())
        throw input_error("failure mass vector size mismatch");
    std::vector<double> avail(net.arcs.size());
    for (std::size_t k = 0; k < net.arcs.size(); ++k) avail[k] = 1.0 - failure_mass[k];
    return avail;
}

LeafBlock append_leaf_block(
    lp::ModelSink& sink, const GridNetwork& net, int theta_var,
    const std::vector<std::pair<double, std::vector<Term>>>& failure_expr) {
    if (failure_expr.size() != net.arcs.size())
        throw input_error("failure expression vector size mismatch");

    LeafBlock block;
    block.alpha.resize(net.num_nodes);
    block.beta.assign(net.arcs.size(), -1);
    for (int v = 0; v < net.num_nodes; ++v) {
        double lo = 0.0, hi = 1.0;
        if (v == net.source) hi = 0.0;
        if (v == net.sink) lo = 1.0;
        block.alpha[v] = sink.add_variable(lo, hi, 0.0);
    }

    std::vector<Term> theta_terms{{theta_var, 1.0}};
    for (std::size_t k = 0; k < net.arcs.size(); ++k) {
        const auto& [fail_const, fail_terms] = failure_expr[k];
        if (fail_terms.empty() && fail_const >= 1.0 - 1e-12) continue;  // surely failed

        const int beta = sink.add_variable(0.0, 1.0, 0.0);
        block.beta[k] = beta;
        std::vector<Term> row{{block.alpha[net.arcs[k].from], 1.0},
                              {block.alpha[net.arcs[k].to], -1.0},
                              {beta, 1.0}};
        for (const Term& t : fail_terms) row.push_back(t);
        sink.add_row(Relation::GE, -fail_const, std::move(row));
        theta_terms.push_back({beta, -net.arcs[k].cap});
    }
    block.theta_row = sink.add_row(Relation::GE, 0.0, std::move(theta_terms));
    return block;
}

void write_dot(const GridNetwork& net, std::ostream& os) {
    os << "digraph grid {\n  rankdir=LR;\n";
    os << "  s [shape=doublecircle];\n  t [shape=doublecircle];\n";
    auto name = [&](int v) {
        if (v == net.source) return std::string("s");
        if (v == net.sink) return std::string("t");
        const int g = v - 2;
        return "n" + std::to_string(g / net.cols) + "_" + std::to_string(g % net.cols);
    };
    for (const Arc& a : net.arcs) {
        os << "  " << name(a.from) << " -> " << name(a.to) << " [label=\"" << a.cap;
        if (a.a > 0.0) os << " a=" << a.a;
        os << "\"];\n";
    }
    os << "}\n";
}

}  // namespace ddrc::snip
