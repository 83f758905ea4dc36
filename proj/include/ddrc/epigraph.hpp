#pragma once

#include <functional>
#include <unordered_map>
#include <vector>

#include "ddrc/instance.hpp"
#include "ddrc/lp.hpp"
#include "ddrc/partition_tree.hpp"

namespace ddrc::sra {

// The growing lower-bound MIP: allocation binaries, one epigraph variable
// per tree node, and a recourse block per leaf evaluated at that leaf's
// conditional mean. Refinements only ever add variables and rows; superseded
// leaf blocks stay behind as valid slack.
class EpigraphModel {
public:
    EpigraphModel(const Instance& inst, lp::ModelSink& sink);

    // rows/vars for one refinement already performed on `tree`:
    // a conditional row tying the refined leaf's theta to its children via
    // linearized probability products, plus one recourse block per child
    void apply_refinement(lp::ModelSink& sink, const PartitionTree& tree, int refined_leaf,
                          int component, const std::vector<int>& children);

    int theta_of(int tree_node) const { return theta_.at(tree_node); }
    int x_var(int component, int level) const { return x_[component][level]; }
    const std::vector<int>& binaries() const { return binaries_; }
    double theta_max() const { return theta_max_; }
    int root_theta() const { return theta_.at(0); }

    Allocation read_allocation(const std::function<double(int)>& value) const;

private:
    void append_leaf_block(lp::ModelSink& sink, const std::vector<int>& fixed_map,
                           int theta_var);
    std::vector<lp::Term> level_terms(int component, const std::vector<double>& coef_by_level) const;

    const Instance& inst_;
    std::vector<std::vector<int>> x_;
    std::vector<int> binaries_;
    std::unordered_map<int, int> theta_;
    double theta_max_ = 0.0;
};

}  // namespace ddrc::sra
