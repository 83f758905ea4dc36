#pragma once

#include <vector>

#include "ddrc/instance.hpp"
#include "ddrc/partition_tree.hpp"

namespace ddrc::bounds {

// Recourse value at a (possibly fractional) state vector. Convex in the
// state and exact on integral states; the building block of every lower
// bound. Interdiction instances evaluate the capacity-charged flow
// (capacities stay whole, flow through an arc pays its failure mass);
// explicit templates solve the capacity-scaled program.
double recourse_value(const Instance& inst, const std::vector<double>& state);

// Concave companion of recourse_value: agrees with it on integral states and
// dominates it in between, which turns leaf means into upper bounds.
// Interdiction instances use the availability-scaled max flow; explicit
// templates (K=1 only) drop the capacity rows and charge M_i per unit of
// flow on a component, weighted by its missing state mass.
double penalized_value(const Instance& inst, const std::vector<double>& state);

// Recourse value at the componentwise best state; bounds every theta.
double recourse_upper_bound(const Instance& inst);

struct BoundLeaf {
    int leaf = -1;
    double probability = 0.0;
    double theta = 0.0;
    double theta_tilde = 0.0;
};

struct BoundPair {
    double lower = 0.0;
    double upper = 0.0;
    std::vector<BoundLeaf> breakdown;
};

BoundPair tree_bounds(const Instance& inst, const PartitionTree& tree, const Allocation& x);

// probability-weighted evaluator gap at one leaf's conditional mean
double leaf_gap(const Instance& inst, const PartitionTree& tree, int leaf, const Allocation& x);

// gap at the hypothetical child of `leaf` fixing `component` to `state`
double child_gap(const Instance& inst, const PartitionTree& tree, int leaf, int component,
                 int state, const Allocation& x);

}  // namespace ddrc::bounds
