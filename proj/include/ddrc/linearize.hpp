#pragma once

#include <array>
#include <vector>

#include "ddrc/lp.hpp"

namespace ddrc {

// c0 + sum coef_j * var_j, used for probability weights over binary variables
struct AffineExpr {
    double constant = 0.0;
    std::vector<lp::Term> terms;

    double value_at(const std::vector<double>& point) const {
        double v = constant;
        for (const lp::Term& t : terms) v += t.coef * point[t.var];
        return v;
    }
};

// envelope of z = b * t for binary b and t in [lo, hi]
struct ProductAux {
    int aux = -1;
    int binary = -1;
    int continuous = -1;
    double lo = 0.0;
    double hi = 0.0;
    std::array<int, 4> rows{-1, -1, -1, -1};
};

struct ChainResult {
    int result_var = -1;
    std::vector<int> stage_vars;  // accumulator after each factor
    std::vector<ProductAux> auxes;
};

// Adds variable z and the four rows z <= hi*b, z >= lo*b, z <= t - lo*(1-b),
// z >= t - hi*(1-b). Exact for b in {0,1}; the convex hull otherwise.
ProductAux mccormick_product(lp::ModelSink& sink, int b, int t, double lo, double hi);
ProductAux mccormick_product(lp::LinearProgram& prog, int b, int t, double lo, double hi);

// Sequentially multiplies `tail` (bounded in [0, tail_hi]) by each factor,
// left to right. Factors must take values in [0,1] whenever their variables
// are binary; products with each binary variable are linearized separately so
// every envelope stays binary-times-continuous.
ChainResult chain_multilinear(lp::ModelSink& sink, const std::vector<AffineExpr>& factors,
                              int tail, double tail_hi);
ChainResult chain_multilinear(lp::LinearProgram& prog, const std::vector<AffineExpr>& factors,
                              int tail, double tail_hi);

}  // namespace ddrc
