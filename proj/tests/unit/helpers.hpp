#pragma once

#include <vector>

#include "ddrc/instance.hpp"
#include "ddrc/rng.hpp"

namespace ddrc::testing {

// s -> mid -> t path with caps (c1, c2); both arcs attackable, failing with
// probability level/(level+a) under the instance's level count
inline Instance series_path_instance(double c1, double c2, int levels, double a) {
    snip::GridNetwork net;
    net.rows = 1;
    net.cols = 1;
    net.num_nodes = 3;
    net.arcs.push_back(snip::Arc{0, 2, c1, a});
    net.arcs.push_back(snip::Arc{2, 1, c2, a});
    net.failable = {0, 1};

    Instance inst;
    inst.table = StateProbabilityTable::zeros(2, 1, levels);
    for (int i = 0; i < 2; ++i)
        for (int l = 0; l <= levels; ++l) {
            inst.table.prob(i, 1, l) = snip::interdiction_probability(a, 1, l);
            inst.table.prob(i, 0, l) = snip::interdiction_probability(a, 0, l);
        }
    inst.alloc_cost.assign(2, std::vector<double>(levels + 1, 0.0));
    inst.budget_rhs = 2 * levels;
    SnipRecourse rec;
    rec.component_arc = net.failable;
    rec.net = std::move(net);
    inst.recourse = std::move(rec);
    inst.refresh_varying();
    return inst;
}

// small capacitated-supply template with an expensive uncapped backstop:
//   min y1 + 2 y2 + 10 y3   s.t. y1 + y2 + y3 >= 4,  y1 <= 4 s1,  y2 <= 3 s2
inline Instance backstop_instance() {
    Instance inst;
    inst.table = StateProbabilityTable::zeros(2, 1, 1);
    for (int i = 0; i < 2; ++i) {
        inst.table.prob(i, 0, 0) = 0.4;
        inst.table.prob(i, 1, 0) = 0.6;
        inst.table.prob(i, 0, 1) = 0.8;
        inst.table.prob(i, 1, 1) = 0.2;
    }
    inst.alloc_cost = {{0.0, 1.0}, {0.0, 1.0}};
    inst.budget_rhs = 2;
    GenericRecourse rec;
    rec.n_y = 3;
    rec.q = {1.0, 2.0, 10.0};
    rec.rows.push_back(
        lp::RowSpec{lp::Relation::GE, 4.0, {{0, 1.0}, {1, 1.0}, {2, 1.0}}});
    rec.capacity_var = {0, 1};
    rec.u = {4.0, 3.0};
    rec.M = {9.0, 8.0};
    inst.recourse = std::move(rec);
    inst.refresh_varying();
    return inst;
}

// grid instance with a seeded sparse explicit attack-parameter vector
inline Instance sparse_grid_instance(int rows, int cols, std::uint64_t seed, int n_failable,
                                     int budget, int levels) {
    // interior arc count of the grid
    const int interior = 2 * (rows * (cols - 1) + (rows - 1) * cols);
    Rng rng(seed * 7919 + 13);
    std::vector<double> a(interior, 0.0);
    int placed = 0;
    while (placed < n_failable) {
        const int k = static_cast<int>(rng.next_below(interior));
        if (a[k] > 0.0) continue;
        a[k] = 0.5 + 3.5 * rng.next_double();
        ++placed;
    }
    return make_grid_instance(rows, cols, seed, snip::AMode::explicit_values(a), budget,
                              levels);
}

}  // namespace ddrc::testing
