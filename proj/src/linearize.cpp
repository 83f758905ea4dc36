#include "ddrc/linearize.hpp"

#include <cmath>

#include "ddrc/errors.hpp"

namespace ddrc {

using lp::LinearProgram;
using lp::Relation;
using lp::Term;

ProductAux mccormick_product(lp::ModelSink& sink, int b, int t, double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw input_error("mccormick_product requires finite bounds on the continuous factor");
    if (lo > hi) throw input_error("mccormick_product: lo > hi");

    ProductAux p;
    p.binary = b;
    p.continuous = t;
    p.lo = lo;
    p.hi = hi;
    p.aux = sink.add_variable(std::min(0.0, lo), std::max(0.0, hi), 0.0);
    p.rows[0] = sink.add_row(Relation::LE, 0.0, {{p.aux, 1.0}, {b, -hi}});
    p.rows[1] = sink.add_row(Relation::GE, 0.0, {{p.aux, 1.0}, {b, -lo}});
    p.rows[2] = sink.add_row(Relation::LE, -lo, {{p.aux, 1.0}, {t, -1.0}, {b, -lo}});
    p.rows[3] = sink.add_row(Relation::GE, -hi, {{p.aux, 1.0}, {t, -1.0}, {b, -hi}});
    return p;
}

ProductAux mccormick_product(LinearProgram& prog, int b, int t, double lo, double hi) {
    lp::ProgramSink sink(prog);
    return mccormick_product(sink, b, t, lo, hi);
}

ChainResult chain_multilinear(lp::ModelSink& sink, const std::vector<AffineExpr>& factors,
                              int tail, double tail_hi) {
    if (factors.empty()) throw input_error("chain_multilinear: empty factor list");
    if (!std::isfinite(tail_hi)) throw input_error("chain_multilinear: tail bound must be finite");

    ChainResult out;
    int acc = tail;
    for (const AffineExpr& f : factors) {
        // acc' = f.constant * acc + sum coef_j * (b_j * acc)
        std::vector<Term> row;
        for (const Term& ft : f.terms) {
            ProductAux aux = mccormick_product(sink, ft.var, acc, 0.0, tail_hi);
            row.push_back({aux.aux, -ft.coef});
            out.auxes.push_back(aux);
        }
        const int next = sink.add_variable(0.0, tail_hi, 0.0);
        row.push_back({next, 1.0});
        if (f.constant != 0.0) row.push_back({acc, -f.constant});
        sink.add_row(Relation::EQ, 0.0, std::move(row));
        out.stage_vars.push_back(next);
        acc = next;
    }
    out.result_var = acc;
    return out;
}

ChainResult chain_multilinear(LinearProgram& prog, const std::vector<AffineExpr>& factors,
                              int tail, double tail_hi) {
    lp::ProgramSink sink(prog);
    return chain_multilinear(sink, factors, tail, tail_hi);
}

}  // namespace ddrc
