#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "ddrc/instance.hpp"

namespace ddrc {

struct TreeNode {
    int id = 0;
    int parent = -1;
    int fixed_component = -1;  // component fixed on entry; -1 for the root
    int fixed_state = -1;
    std::vector<int> children;
    std::vector<int> fixed_map;  // cumulative component -> state, -1 unfixed
};

// Rooted tree over partial capacity realizations. Refining a leaf on a
// component replaces it by K+1 children, one per state; the leaves always
// partition the support.
class PartitionTree {
public:
    explicit PartitionTree(int n_components);

    int root() const { return 0; }
    int num_nodes() const { return static_cast<int>(nodes_.size()); }
    const TreeNode& node(int id) const { return nodes_.at(id); }
    bool is_leaf(int id) const { return nodes_.at(id).children.empty(); }
    const std::vector<int>& leaves() const { return leaves_; }
    std::vector<std::pair<int, int>> arcs() const;

    // returns the new child ids (states 0..K on `component`)
    std::vector<int> refine(int leaf, int component, int K);

    void write_snapshot(std::ostream& os) const;

private:
    std::vector<TreeNode> nodes_;
    std::vector<int> leaves_;  // sorted by id
    int n_;
};

double node_probability(const Instance& inst, const PartitionTree& tree, int node,
                        const Allocation& x);

std::vector<double> leaf_conditional_mean(const Instance& inst, const PartitionTree& tree,
                                          int leaf, const Allocation& x);

// argmax of gap over leaves, ties to the lowest leaf id
int select_leaf(const PartitionTree& tree, const std::function<double(int)>& gap);

// argmin over unfixed components of the state-probability-weighted child
// gaps, ties to the lowest component index
int select_component(const Instance& inst, const PartitionTree& tree, int leaf,
                     const Allocation& x,
                     const std::function<double(int component, int state)>& child_gap);

}  // namespace ddrc
