#include "ddrc/partition_tree.hpp"

#include <algorithm>
#include <ostream>

#include "ddrc/errors.hpp"

namespace ddrc {

PartitionTree::PartitionTree(int n_components) : n_(n_components) {
    TreeNode root;
    root.id = 0;
    root.fixed_map.assign(n_, -1);
    nodes_.push_back(std::move(root));
    leaves_.push_back(0);
}

std::vector<std::pair<int, int>> PartitionTree::arcs() const {
    std::vector<std::pair<int, int>> out;
    for (const TreeNode& node : nodes_)
        if (node.parent >= 0) out.push_back({node.parent, node.id});
    return out;
}

std::vector<int> PartitionTree::refine(int leaf, int component, int K) {
    if (leaf < 0 || leaf >= num_nodes() || !is_leaf(leaf))
        throw input_error("refine: not a leaf node");
    if (component < 0 || component >= n_) throw input_error("refine: unknown component");
    if (nodes_[leaf].fixed_map[component] >= 0)
        throw input_error("refine: component already fixed at this leaf");

    std::vector<int> children;
    for (int state = 0; state <= K; ++state) {
        TreeNode child;
        child.id = num_nodes();
        child.parent = leaf;
        child.fixed_component = component;
        child.fixed_state = state;
        child.fixed_map = nodes_[leaf].fixed_map;
        child.fixed_map[component] = state;
        nodes_[leaf].children.push_back(child.id);
        children.push_back(child.id);
        nodes_.push_back(std::move(child));
    }
    leaves_.erase(std::find(leaves_.begin(), leaves_.end(), leaf));
    leaves_.insert(leaves_.end(), children.begin(), children.end());
    std::sort(leaves_.begin(), leaves_.end());
    return children;
}

void PartitionTree::write_snapshot(std::ostream& os) const {
    // one node per line: indentation by depth, id, fixed pairs, leaf flag
    std::function<void(int, int)> dump = [&](int id, int depth) {
        const TreeNode& node = nodes_[id];
        for (int i = 0; i < depth; ++i) os << "  ";
        os << "node " << id;
        if (node.fixed_component >= 0)
            os << " [" << node.fixed_component << "=" << node.fixed_state << "]";
        bool first = true;
        os << " fixed{";
        for (int i = 0; i < n_; ++i) {
            if (node.fixed_map[i] < 0) continue;
            if (!first) os << ",";
            os << i << ":" << node.fixed_map[i];
            first = false;
        }
        os << "}";
        if (node.children.empty()) os << " leaf";
        os << "\n";
        for (int c : node.children) dump(c, depth + 1);
    };
    dump(0, 0);
}

double node_probability(const Instance& inst, const PartitionTree& tree, int node,
                        const Allocation& x) {
    double prod = 1.0;
    const TreeNode& nd = tree.node(node);
    for (int i = 0; i < inst.n(); ++i)
        if (nd.fixed_map[i] >= 0) prod *= inst.table.prob(i, nd.fixed_map[i], x.level[i]);
    return prod;
}

std::vector<double> leaf_conditional_mean(const Instance& inst, const PartitionTree& tree,
                                          int leaf, const Allocation& x) {
    return expected_state(inst, x, tree.node(leaf).fixed_map);
}

int select_leaf(const PartitionTree& tree, const std::function<double(int)>& gap) {
    int best = -1;
    double best_gap = 0.0;
    for (int leaf : tree.leaves()) {
        const double g = gap(leaf);
        if (best < 0 || g > best_gap + 1e-15) {
            best = leaf;
            best_gap = g;
        }
    }
    return best;
}

int select_component(const Instance& inst, const PartitionTree& tree, int leaf,
                     const Allocation& x,
                     const std::function<double(int, int)>& child_gap) {
    const TreeNode& nd = tree.node(leaf);
    int best = -1;
    double best_score = 0.0;
    for (int i = 0; i < inst.n(); ++i) {
        if (nd.fixed_map[i] >= 0) continue;
        double score = 0.0;
        for (int k = 0; k <= inst.K(); ++k)
            score += inst.table.prob(i, k, x.level[i]) * child_gap(i, k);
        if (best < 0 || score < best_score - 1e-15) {
            best = i;
            best_score = score;
        }
    }
    if (best < 0) throw input_error("select_component: all components fixed at this leaf");
    return best;
}

}  // namespace ddrc
