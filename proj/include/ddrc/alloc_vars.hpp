#pragma once

#include <functional>
#include <vector>

#include "ddrc/instance.hpp"
#include "ddrc/lp.hpp"

namespace ddrc {

// allocation binaries plus the one-level-per-component and budget rows
struct AllocVars {
    std::vector<std::vector<int>> x;  // [component][level]
    std::vector<int> binaries;

    Allocation read(const Instance& inst, const std::function<double(int)>& value) const {
        Allocation a;
        a.level.assign(inst.n(), 0);
        for (int i = 0; i < inst.n(); ++i) {
            int pick = 0;
            double best = -1.0;
            for (int l = 0; l <= inst.L(); ++l) {
                const double v = value(x[i][l]);
                if (v > best) {
                    best = v;
                    pick = l;
                }
            }
            a.level[i] = pick;
        }
        return a;
    }
};

inline AllocVars append_allocation_vars(lp::ModelSink& sink, const Instance& inst) {
    AllocVars out;
    const int n = inst.n();
    const int L = inst.L();
    out.x.resize(n);
    for (int i = 0; i < n; ++i) {
        out.x[i].resize(L + 1);
        for (int l = 0; l <= L; ++l) {
            out.x[i][l] = sink.add_variable(0.0, 1.0, inst.alloc_cost[i][l]);
            out.binaries.push_back(out.x[i][l]);
        }
    }
    for (int i = 0; i < n; ++i) {
        std::vector<lp::Term> terms;
        for (int l = 0; l <= L; ++l) terms.push_back({out.x[i][l], 1.0});
        sink.add_row(lp::Relation::EQ, 1.0, std::move(terms));
    }
    std::vector<lp::Term> budget;
    for (int i = 0; i < n; ++i)
        for (int l = 1; l <= L; ++l) budget.push_back({out.x[i][l], static_cast<double>(l)});
    sink.add_row(lp::Relation::LE, static_cast<double>(inst.budget_rhs), std::move(budget));
    return out;
}

}  // namespace ddrc
