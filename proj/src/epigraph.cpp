#include "ddrc/epigraph.hpp"

#include <functional>

#include "ddrc/alloc_vars.hpp"
#include "ddrc/bounds.hpp"
#include "ddrc/errors.hpp"
#include "ddrc/linearize.hpp"
#include "ddrc/snip.hpp"

namespace ddrc::sra {

using lp::Relation;
using lp::Term;

EpigraphModel::EpigraphModel(const Instance& inst, lp::ModelSink& sink) : inst_(inst) {
    theta_max_ = bounds::recourse_upper_bound(inst);

    AllocVars alloc = append_allocation_vars(sink, inst);
    x_ = std::move(alloc.x);
    binaries_ = std::move(alloc.binaries);

    const int theta0 = sink.add_variable(0.0, theta_max_, 1.0);
    theta_[0] = theta0;
    append_leaf_block(sink, std::vector<int>(inst.n(), -1), theta0);
}

std::vector<Term> EpigraphModel::level_terms(int component,
                                             const std::vector<double>& coef_by_level) const {
    std::vector<Term> terms;
    for (int l = 0; l <= inst_.L(); ++l)
        if (coef_by_level[l] != 0.0) terms.push_back({x_[component][l], coef_by_level[l]});
    return terms;
}

void EpigraphModel::append_leaf_block(lp::ModelSink& sink, const std::vector<int>& fixed_map,
                                      int theta_var) {
    const int L = inst_.L();
    if (inst_.is_snip()) {
        const SnipRecourse& rec = inst_.snip_recourse();
        std::vector<std::pair<double, std::vector<Term>>> failure(rec.net.arcs.size(),
                                                                  {0.0, {}});
        for (int i = 0; i < inst_.n(); ++i) {
            const int arc = rec.component_arc[i];
            if (fixed_map[i] >= 0) {
                failure[arc] = {static_cast<double>(fixed_map[i]), {}};
            } else {
                std::vector<double> coef(L + 1);
                for (int l = 0; l <= L; ++l) coef[l] = inst_.table.prob(i, 1, l);
                failure[arc] = {0.0, level_terms(i, coef)};
            }
        }
        snip::append_leaf_block(sink, rec.net, theta_var, failure);
        return;
    }

    const GenericRecourse& rec = inst_.generic_recourse();
    std::vector<int> y(rec.n_y);
    for (int v = 0; v < rec.n_y; ++v) y[v] = sink.add_variable(0.0, lp::kInf, 0.0);
    for (const lp::RowSpec& row : rec.rows) {
        std::vector<Term> terms;
        for (const Term& t : row.terms) terms.push_back({y[t.var], t.coef});
        sink.add_row(row.rel, row.rhs, std::move(terms));
    }
    // capacity rows at the leaf's conditional mean, affine in x
    for (int i = 0; i < inst_.n(); ++i) {
        if (fixed_map[i] >= 0) {
            sink.add_row(Relation::LE, rec.u[i] * fixed_map[i],
                         {{y[rec.capacity_var[i]], 1.0}});
        } else {
            std::vector<double> coef(L + 1, 0.0);
            for (int l = 0; l <= L; ++l)
                for (int k = 1; k <= inst_.K(); ++k)
                    coef[l] -= rec.u[i] * k * inst_.table.prob(i, k, l);
            std::vector<Term> terms = level_terms(i, coef);
            terms.push_back({y[rec.capacity_var[i]], 1.0});
            sink.add_row(Relation::LE, 0.0, std::move(terms));
        }
    }
    std::vector<Term> link{{theta_var, 1.0}};
    for (int v = 0; v < rec.n_y; ++v)
        if (rec.q[v] != 0.0) link.push_back({y[v], -rec.q[v]});
    sink.add_row(Relation::GE, 0.0, std::move(link));
}

void EpigraphModel::apply_refinement(lp::ModelSink& sink, const PartitionTree& tree,
                                     int refined_leaf, int component,
                                     const std::vector<int>& children) {
    const int parent_theta = theta_of(refined_leaf);

    // fresh epigraph variable per child
    std::vector<int> child_theta(children.size());
    for (std::size_t c = 0; c < children.size(); ++c) {
        child_theta[c] = sink.add_variable(0.0, theta_max_, 0.0);
        theta_[children[c]] = child_theta[c];
    }

    // conditional row: parent theta dominates the probability-weighted
    // children; one product aux per (child, level) keeps every envelope
    // binary-times-continuous
    std::vector<Term> row{{parent_theta, 1.0}};
    for (std::size_t c = 0; c < children.size(); ++c) {
        const int state = tree.node(children[c]).fixed_state;
        for (int l = 0; l <= inst_.L(); ++l) {
            const double prob = inst_.table.prob(component, state, l);
            if (prob == 0.0) continue;
            const ProductAux aux =
                mccormick_product(sink, x_[component][l], child_theta[c], 0.0, theta_max_);
            row.push_back({aux.aux, -prob});
        }
    }
    sink.add_row(Relation::GE, 0.0, std::move(row));

    for (std::size_t c = 0; c < children.size(); ++c)
        append_leaf_block(sink, tree.node(children[c]).fixed_map, child_theta[c]);
}

Allocation EpigraphModel::read_allocation(const std::function<double(int)>& value) const {
    AllocVars alloc;
    alloc.x = x_;
    return alloc.read(inst_, value);
}

}  // namespace ddrc::sra
