#include "ddrc/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "ddrc/errors.hpp"

namespace ddrc::bnb {

namespace {

double now_s() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

}  // namespace

ModelEdit::ModelEdit(Engine& engine) : engine_(engine) {
    base_var_ = engine.simplex().num_columns();
    base_row_ = engine.simplex().num_rows();
}

int ModelEdit::add_variable(double lo, double hi, double obj, std::vector<lp::Term> entries) {
    // staged columns land before staged rows, so entries may only reference
    // rows that already exist; couple new vars to new rows via the rows
    for (const lp::Term& t : entries)
        if (t.var < 0 || t.var >= base_row_)
            throw input_error("staged column may only reference existing rows");
    vars_.push_back({lo, hi, obj, std::move(entries)});
    return base_var_ + static_cast<int>(vars_.size()) - 1;
}

int ModelEdit::add_row(lp::Relation rel, double rhs, std::vector<lp::Term> terms) {
    for (const lp::Term& t : terms)
        if (t.var < 0 || t.var >= base_var_ + static_cast<int>(vars_.size()))
            throw input_error("staged row references unknown variable");
    rows_.push_back(lp::RowSpec{rel, rhs, std::move(terms)});
    return base_row_ + static_cast<int>(rows_.size()) - 1;
}

Engine::Engine(lp::LinearProgram model, std::vector<int> binaries, Options opts)
    : binaries_(std::move(binaries)), opts_(opts) {
    model.validate();
    for (int b : binaries_) {
        if (b < 0 || b >= model.num_vars()) throw input_error("binary list references unknown variable");
        if (model.lo[b] < -1e-9 || model.hi[b] > 1.0 + 1e-9)
            throw input_error("binary variable must have bounds within [0,1]");
    }
    simplex_ = std::make_unique<lp::Simplex>(std::move(model));
    const int total = simplex_->num_columns();
    root_lo_.resize(total);
    root_hi_.resize(total);
    for (int j = 0; j < total; ++j) {
        root_lo_[j] = simplex_->lower_bound(j);
        root_hi_[j] = simplex_->upper_bound(j);
    }
}

int Engine::num_columns() const { return simplex_->num_columns(); }

void Engine::apply_fixings(const std::vector<std::pair<int, int>>& fixings) {
    for (int var : applied_) simplex_->set_bounds(var, root_lo_[var], root_hi_[var]);
    applied_.clear();
    for (auto [var, val] : fixings) {
        simplex_->set_bounds(var, val, val);
        applied_.push_back(var);
    }
}

double Engine::queue_bound() const {
    double b = lp::kInf;
    for (const Node& n : heap_) b = std::min(b, n.parent_bound);
    return b;
}

void Engine::push_trace(double incumbent, double bound, int open) {
    trace_.push_back({now_s() - start_time_, incumbent, bound, open, refinements_});
}

Result Engine::solve() {
    start_time_ = now_s();
    Result res;

    auto cmp = [](const Node& a, const Node& b) {
        if (a.parent_bound != b.parent_bound) return a.parent_bound > b.parent_bound;
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.seq > b.seq;  // min-heap: pop lowest bound, deepest, oldest
    };

    Node root;
    root.seq = 0;
    heap_.push_back(root);

    double incumbent = lp::kInf;
    std::vector<double> inc_x;
    bool timed_out = false;
    bool unbounded = false;
    std::int64_t seq = 1;
    std::int64_t reject_streak = 0;
    double last_reject_obj = lp::kInf;
    std::vector<double> last_reject_x;

    const auto gap_slack = [&]() { return opts_.gap_tol * std::max(1.0, std::fabs(incumbent)); };

    while (!heap_.empty()) {
        if (opts_.time_limit_s > 0.0 && now_s() - start_time_ > opts_.time_limit_s) {
            timed_out = true;
            break;
        }
        std::pop_heap(heap_.begin(), heap_.end(), cmp);
        Node node = std::move(heap_.back());
        heap_.pop_back();
        ++res.nodes;

        if (std::isfinite(incumbent) && node.parent_bound >= incumbent - gap_slack()) continue;

        apply_fixings(node.fixings);
        if (!node.basis.empty()) {
            // extend a stale basis with the logicals of rows added since
            lp::Basis basis = node.basis;
            const int m = simplex_->num_rows();
            for (int r = static_cast<int>(basis.basic.size()); r < m; ++r)
                basis.basic.push_back(simplex_->logical_of_row(r));
            basis.at_upper.resize(simplex_->num_columns(), 0);
            simplex_->load_basis(basis);
        }

        lp::Solution sol = simplex_->solve();
        res.lp_iterations += sol.iterations;

        for (;;) {
            if (sol.status == lp::Status::Infeasible) break;
            if (sol.status == lp::Status::Unbounded) { unbounded = true; break; }
            const double node_bound = sol.objective;
            if (std::isfinite(incumbent) && node_bound >= incumbent - gap_slack()) break;

            // most fractional binary, ties to the lowest index
            int branch_var = -1;
            double best_frac = opts_.int_tol;
            for (int b : binaries_) {
                const double v = simplex_->value_of(b);
                const double frac = std::fabs(v - std::round(v));
                if (frac > best_frac + 1e-15) {
                    best_frac = frac;
                    branch_var = b;
                }
            }

            if (branch_var >= 0) {
                Node child0;
                child0.fixings = node.fixings;
                child0.fixings.push_back({branch_var, 0});
                child0.parent_bound = node_bound;
                child0.depth = node.depth + 1;
                child0.basis = sol.basis;
                Node child1 = child0;
                child1.fixings.back().second = 1;
                child0.seq = seq++;
                child1.seq = seq++;
                // branch up first so equal bounds pop the one-side first
                heap_.push_back(std::move(child1));
                std::push_heap(heap_.begin(), heap_.end(), cmp);
                heap_.push_back(std::move(child0));
                std::push_heap(heap_.begin(), heap_.end(), cmp);
                break;
            }

            // integral candidate
            std::vector<double> xvals(simplex_->num_columns());
            for (int j = 0; j < simplex_->num_columns(); ++j) xvals[j] = simplex_->value_of(j);

            Verdict verdict = Verdict::Accept;
            ModelEdit edit(*this);
            if (callback_) {
                Candidate cand;
                cand.objective = node_bound;
                cand.value = [&](int var) { return xvals.at(var); };
                cand.edit = &edit;
                cand.refinement_counter = &refinements_;
                verdict = callback_(cand);
            }

            if (verdict == Verdict::Accept) {
                if (!edit.empty())
                    throw solver_error("callback accepted a candidate but staged edits");
                if (node_bound < incumbent - 1e-12) {
                    incumbent = node_bound;
                    inc_x = xvals;
                    push_trace(incumbent, std::min(queue_bound(), node_bound),
                               static_cast<int>(heap_.size()));
                }
                reject_streak = 0;
                break;
            }

            // rejection must stage something, otherwise nothing can change
            if (edit.empty())
                throw solver_error("callback rejected a candidate without adding rows");

            const bool same_point =
                std::fabs(node_bound - last_reject_obj) <= 1e-12 && xvals == last_reject_x;
            reject_streak = same_point ? reject_streak + 1 : 0;
            last_reject_obj = node_bound;
            last_reject_x = xvals;
            if (reject_streak > opts_.max_reject_streak)
                throw solver_error("candidate rejection made no progress");

            // grow the master problem; every open node inherits the rows
            const int old_total = simplex_->num_columns();
            for (const ModelEdit::StagedVar& v : edit.vars_)
                simplex_->add_variable(v.lo, v.hi, v.obj, v.entries);
            simplex_->add_rows(edit.rows_);
            const int total = simplex_->num_columns();
            root_lo_.resize(total);
            root_hi_.resize(total);
            for (int j = old_total; j < total; ++j) {
                root_lo_[j] = simplex_->lower_bound(j);
                root_hi_[j] = simplex_->upper_bound(j);
            }
            push_trace(incumbent, std::min(queue_bound(), node_bound),
                       static_cast<int>(heap_.size()));

            sol = simplex_->solve();  // re-solve this node with the new rows
            res.lp_iterations += sol.iterations;
        }
        if (unbounded) break;
    }

    apply_fixings({});  // restore root bounds

    res.trace = trace_;
    res.has_incumbent = std::isfinite(incumbent);
    if (unbounded) {
        res.status = SolveStatus::Unbounded;
    } else if (timed_out) {
        res.status = SolveStatus::TimedOut;
    } else {
        res.status = res.has_incumbent ? SolveStatus::Optimal : SolveStatus::Infeasible;
    }
    if (res.has_incumbent) {
        res.objective = incumbent;
        res.x = inc_x;
        const double open = heap_.empty() ? incumbent : std::min(queue_bound(), incumbent);
        res.bound = (res.status == SolveStatus::Optimal) ? incumbent : open;
        res.gap = std::fabs(incumbent - res.bound) / std::max(1.0, std::fabs(incumbent));
    } else {
        res.bound = -lp::kInf;
        res.gap = lp::kInf;
    }
    push_trace(res.has_incumbent ? incumbent : lp::kInf, res.bound,
               static_cast<int>(heap_.size()));
    return res;
}

void write_trace_csv(const std::vector<TraceRow>& trace, std::ostream& os) {
    os << "elapsed_s,incumbent,bound,open_nodes,refinements\n";
    char buf[160];
    for (const TraceRow& r : trace) {
        std::snprintf(buf, sizeof buf, "%.3f,%.9g,%.9g,%d,%lld\n", r.elapsed_s, r.incumbent,
                      r.bound, r.open_nodes, static_cast<long long>(r.refinements));
        os << buf;
    }
}

}  // namespace ddrc::bnb
