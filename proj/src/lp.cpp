#include "ddrc/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "ddrc/errors.hpp"

namespace ddrc::lp {

namespace {
bool finite(double v) { return std::isfinite(v); }
}  // namespace

int LinearProgram::add_variable(double lower, double upper, double objective) {
    obj.push_back(objective);
    lo.push_back(lower);
    hi.push_back(upper);
    return num_vars() - 1;
}

int LinearProgram::add_row(Relation rel, double rhs, std::vector<Term> terms) {
    rows.push_back(RowSpec{rel, rhs, std::move(terms)});
    return num_rows() - 1;
}

void LinearProgram::validate() const {
    const int n = num_vars();
    for (int j = 0; j < n; ++j) {
        if (!finite(lo[j]))
            throw input_error("variable " + std::to_string(j) + " needs a finite lower bound");
        if (lo[j] > hi[j] + 1e-12)
            throw input_error("variable " + std::to_string(j) + " has lo > hi");
    }
    for (const RowSpec& row : rows) {
        if (!finite(row.rhs)) throw input_error("row rhs must be finite");
        for (const Term& t : row.terms) {
            if (t.var < 0 || t.var >= n)
                throw input_error("row references unknown variable " + std::to_string(t.var));
            if (!finite(t.coef)) throw input_error("row coefficient must be finite");
        }
    }
}

// ---------------------------------------------------------------------------

Simplex::Simplex(LinearProgram prog, SolverOptions opts)
    : prog_(std::move(prog)), opts_(opts) {
    prog_.validate();
    const int n = prog_.num_vars();
    col_obj_.assign(prog_.obj.begin(), prog_.obj.end());
    col_lo_.assign(prog_.lo.begin(), prog_.lo.end());
    col_hi_.assign(prog_.hi.begin(), prog_.hi.end());
    cols_.resize(n);
    stat_.assign(n, VStat::AtLower);
    pos_of_.assign(n, -1);
    d_.assign(n, 0.0);
    std::vector<RowSpec> rows;
    rows.swap(prog_.rows);
    add_rows(rows);
}

int Simplex::num_structural() const {
    return static_cast<int>(cols_.size()) - m_;
}

void Simplex::add_rows(const std::vector<RowSpec>& rows) {
    if (rows.empty()) return;
    const int old_m = m_;
    const int k = static_cast<int>(rows.size());
    const int new_m = old_m + k;

    for (const RowSpec& row : rows) {
        if (!finite(row.rhs)) throw input_error("row rhs must be finite");
        for (const Term& t : row.terms)
            if (t.var < 0 || t.var >= static_cast<int>(cols_.size()))
                throw input_error("row references unknown variable " + std::to_string(t.var));
    }

    // grow the dense inverse: B' = [[B,0],[C,I]] => B'^{-1} = [[Binv,0],[-C Binv,I]]
    std::vector<double> nbinv;
    if (factorized_) {
        nbinv.assign(static_cast<std::size_t>(new_m) * new_m, 0.0);
        for (int i = 0; i < old_m; ++i)
            std::copy_n(binv_.begin() + static_cast<std::size_t>(i) * old_m, old_m,
                        nbinv.begin() + static_cast<std::size_t>(i) * new_m);
    }

    for (int r = 0; r < k; ++r) {
        const RowSpec& row = rows[r];
        const int row_id = old_m + r;
        prog_.rows.push_back(row);
        rhs_.push_back(row.rhs);

        double slo = 0.0, shi = 0.0;
        switch (row.rel) {
            case Relation::LE: slo = 0.0; shi = kInf; break;
            case Relation::EQ: slo = 0.0; shi = 0.0; break;
            case Relation::GE: slo = -kInf; shi = 0.0; break;
        }
        col_obj_.push_back(0.0);
        col_lo_.push_back(slo);
        col_hi_.push_back(shi);
        cols_.push_back({Term{row_id, 1.0}});
        const int logical = static_cast<int>(cols_.size()) - 1;
        logical_of_row_.push_back(logical);
        stat_.push_back(VStat::Basic);
        pos_of_.push_back(row_id);
        basic_.push_back(logical);
        d_.push_back(0.0);

        for (const Term& t : row.terms)
            if (t.coef != 0.0) cols_[t.var].push_back(Term{row_id, t.coef});

        if (factorized_) {
            double* out = nbinv.data() + static_cast<std::size_t>(row_id) * new_m;
            for (const Term& t : row.terms) {
                const int p = pos_of_[t.var];
                if (p >= 0 && p < old_m) {
                    const double* bi = nbinv.data() + static_cast<std::size_t>(p) * new_m;
                    for (int c = 0; c < old_m; ++c) out[c] -= t.coef * bi[c];
                }
            }
            out[row_id] = 1.0;
        }
    }

    m_ = new_m;
    if (factorized_) {
        binv_ = std::move(nbinv);
        xb_.resize(m_, 0.0);
        y_.resize(m_, 0.0);
        compute_basic_values();
        compute_duals_and_reduced();
    }
}

int Simplex::add_variable(double lower, double upper, double objective,
                          const std::vector<Term>& entries) {
    if (!finite(lower)) throw input_error("new variable needs a finite lower bound");
    for (const Term& t : entries)
        if (t.var < 0 || t.var >= m_) throw input_error("column entry references unknown row");

    col_obj_.push_back(objective);
    col_lo_.push_back(lower);
    col_hi_.push_back(upper);
    cols_.push_back(entries);
    pos_of_.push_back(-1);
    const int id = static_cast<int>(cols_.size()) - 1;

    VStat s = VStat::AtLower;
    double dj = objective;
    if (factorized_) {
        for (const Term& t : cols_[id]) dj -= y_[t.var] * t.coef;
        if (dj < -opts_.opt_tol && finite(upper)) s = VStat::AtUpper;
    }
    stat_.push_back(s);
    d_.push_back(dj);
    if (factorized_ && nonbasic_value(id) != 0.0) compute_basic_values();
    return id;
}

void Simplex::set_bounds(int var, double lower, double upper) {
    if (var < 0 || var >= static_cast<int>(col_lo_.size()))
        throw input_error("set_bounds: unknown variable");
    if (!finite(lower)) throw input_error("set_bounds: lower must be finite");
    if (lower > upper + 1e-12) throw input_error("set_bounds: lo > hi");
    col_lo_[var] = lower;
    col_hi_[var] = upper;
    if (stat_[var] == VStat::AtUpper && !finite(upper)) stat_[var] = VStat::AtLower;
    if (factorized_) compute_basic_values();
}

double Simplex::value_of(int var) const {
    if (stat_[var] == VStat::Basic) return xb_[pos_of_[var]];
    return nonbasic_value(var);
}

double Simplex::nonbasic_value(int var) const {
    return (stat_[var] == VStat::AtLower) ? col_lo_[var] : col_hi_[var];
}

void Simplex::load_basis(const Basis& basis) {
    if (static_cast<int>(basis.basic.size()) != m_) throw input_error("basis row count mismatch");
    const int total = static_cast<int>(cols_.size());
    std::fill(pos_of_.begin(), pos_of_.end(), -1);
    for (int j = 0; j < total; ++j) {
        stat_[j] = VStat::AtLower;
        if (j < static_cast<int>(basis.at_upper.size()) && basis.at_upper[j] && finite(col_hi_[j]))
            stat_[j] = VStat::AtUpper;
        if (stat_[j] == VStat::AtLower && !finite(col_lo_[j])) stat_[j] = VStat::AtUpper;
    }
    basic_ = basis.basic;
    for (int i = 0; i < m_; ++i) {
        if (basic_[i] < 0 || basic_[i] >= total)
            throw input_error("basis references unknown variable");
        stat_[basic_[i]] = VStat::Basic;
        pos_of_[basic_[i]] = i;
    }
    factorized_ = false;
}

Basis Simplex::current_basis() const {
    Basis b;
    b.basic = basic_;
    b.at_upper.assign(cols_.size(), 0);
    for (std::size_t j = 0; j < cols_.size(); ++j)
        if (stat_[j] == VStat::AtUpper) b.at_upper[j] = 1;
    return b;
}

void Simplex::ensure_basis() {
    if (static_cast<int>(basic_.size()) != m_) {
        basic_.resize(m_);
        for (int i = 0; i < m_; ++i) basic_[i] = logical_of_row_[i];
    }
    if (!factorized_) refactorize();
}

void Simplex::refactorize() {
    const int m = m_;
    if (m == 0) { factorized_ = true; return; }
    std::vector<double> a(static_cast<std::size_t>(m) * m, 0.0);
    for (int p = 0; p < m; ++p)
        for (const Term& t : cols_[basic_[p]])
            a[static_cast<std::size_t>(t.var) * m + p] = t.coef;

    binv_.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) binv_[static_cast<std::size_t>(i) * m + i] = 1.0;

    std::vector<char> row_used(m, 0);
    std::vector<int> pivot_row_of_col(m, -1);
    bool repaired = false;
    for (int c = 0; c < m; ++c) {
        int pr = -1;
        double best = 1e-11;
        for (int i = 0; i < m; ++i) {
            if (row_used[i]) continue;
            const double v = std::fabs(a[static_cast<std::size_t>(i) * m + c]);
            if (v > best) { best = v; pr = i; }
        }
        if (pr < 0) { repaired = true; continue; }
        row_used[pr] = 1;
        pivot_row_of_col[c] = pr;
        double* arow = a.data() + static_cast<std::size_t>(pr) * m;
        double* brow = binv_.data() + static_cast<std::size_t>(pr) * m;
        const double inv = 1.0 / arow[c];
        for (int k = 0; k < m; ++k) { arow[k] *= inv; brow[k] *= inv; }
        for (int i = 0; i < m; ++i) {
            if (i == pr) continue;
            const double f = a[static_cast<std::size_t>(i) * m + c];
            if (f == 0.0) continue;
            double* ai = a.data() + static_cast<std::size_t>(i) * m;
            double* bi = binv_.data() + static_cast<std::size_t>(i) * m;
            for (int k = 0; k < m; ++k) { ai[k] -= f * arow[k]; bi[k] -= f * brow[k]; }
        }
    }

    if (repaired) {
        // dependent basis columns: kick them out for the logicals of unpivoted rows
        for (int c = 0; c < m; ++c) {
            if (pivot_row_of_col[c] >= 0) continue;
            int free_row = -1;
            for (int i = 0; i < m; ++i)
                if (!row_used[i]) { free_row = i; row_used[i] = 1; break; }
            const int old_var = basic_[c];
            stat_[old_var] = finite(col_lo_[old_var]) ? VStat::AtLower : VStat::AtUpper;
            pos_of_[old_var] = -1;
            const int logical = logical_of_row_[free_row];
            if (stat_[logical] == VStat::Basic && pos_of_[logical] != c) {
                // logical already basic elsewhere; extremely degenerate, restart clean
                for (int i = 0; i < m; ++i) {
                    stat_[basic_[i]] = finite(col_lo_[basic_[i]]) ? VStat::AtLower : VStat::AtUpper;
                    pos_of_[basic_[i]] = -1;
                }
                for (int i = 0; i < m; ++i) {
                    basic_[i] = logical_of_row_[i];
                    stat_[basic_[i]] = VStat::Basic;
                    pos_of_[basic_[i]] = i;
                }
                refactorize();
                return;
            }
            basic_[c] = logical;
            stat_[logical] = VStat::Basic;
            pos_of_[logical] = c;
        }
        refactorize();
        return;
    }

    // reorder rows of the inverse to basic-position order
    std::vector<double> ordered(static_cast<std::size_t>(m) * m);
    for (int c = 0; c < m; ++c)
        std::copy_n(binv_.begin() + static_cast<std::size_t>(pivot_row_of_col[c]) * m, m,
                    ordered.begin() + static_cast<std::size_t>(c) * m);
    binv_ = std::move(ordered);

    for (int i = 0; i < m; ++i) pos_of_[basic_[i]] = i;
    factorized_ = true;
    pivots_since_refactor_ = 0;
    xb_.resize(m);
    y_.resize(m);
    compute_basic_values();
    compute_duals_and_reduced();
}

void Simplex::compute_basic_values() {
    const int m = m_;
    std::vector<double> r = rhs_;
    const int total = static_cast<int>(cols_.size());
    for (int j = 0; j < total; ++j) {
        if (stat_[j] == VStat::Basic) continue;
        const double v = nonbasic_value(j);
        if (v == 0.0) continue;
        for (const Term& t : cols_[j]) r[t.var] -= t.coef * v;
    }
    xb_.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        const double* bi = binv_.data() + static_cast<std::size_t>(i) * m;
        double s = 0.0;
        for (int k = 0; k < m; ++k) s += bi[k] * r[k];
        xb_[i] = s;
    }
}

void Simplex::compute_duals_and_reduced() {
    const int m = m_;
    y_.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        const double cb = col_obj_[basic_[i]];
        if (cb == 0.0) continue;
        const double* bi = binv_.data() + static_cast<std::size_t>(i) * m;
        for (int k = 0; k < m; ++k) y_[k] += cb * bi[k];
    }
    const int total = static_cast<int>(cols_.size());
    for (int j = 0; j < total; ++j) {
        if (stat_[j] == VStat::Basic) { d_[j] = 0.0; continue; }
        double dj = col_obj_[j];
        for (const Term& t : cols_[j]) dj -= y_[t.var] * t.coef;
        d_[j] = dj;
    }
}

void Simplex::ftran(int var, std::vector<double>& out) const {
    const int m = m_;
    out.assign(m, 0.0);
    for (const Term& t : cols_[var]) {
        const double c = t.coef;
        const double* base = binv_.data() + t.var;
        for (int i = 0; i < m; ++i) out[i] += c * base[static_cast<std::size_t>(i) * m];
    }
}

void Simplex::update_inverse(int pivot_pos, const std::vector<double>& alpha) {
    const int m = m_;
    double* prow = binv_.data() + static_cast<std::size_t>(pivot_pos) * m;
    const double inv = 1.0 / alpha[pivot_pos];
    for (int k = 0; k < m; ++k) prow[k] *= inv;
    for (int i = 0; i < m; ++i) {
        if (i == pivot_pos) continue;
        const double f = alpha[i];
        if (f == 0.0) continue;
        double* bi = binv_.data() + static_cast<std::size_t>(i) * m;
        for (int k = 0; k < m; ++k) bi[k] -= f * prow[k];
    }
}

double Simplex::infeasibility_sum() const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i) {
        const int v = basic_[i];
        if (xb_[i] < col_lo_[v]) s += col_lo_[v] - xb_[i];
        else if (xb_[i] > col_hi_[v]) s += xb_[i] - col_hi_[v];
    }
    return s;
}

double Simplex::basic_objective() const {
    double obj = 0.0;
    const int total = static_cast<int>(cols_.size());
    for (int j = 0; j < total; ++j) {
        if (col_obj_[j] == 0.0) continue;
        obj += col_obj_[j] * value_of(j);
    }
    return obj;
}

int Simplex::price_entering(const std::vector<double>& costs) const {
    const int total = static_cast<int>(cols_.size());
    int best = -1;
    double best_score = opts_.opt_tol;
    for (int j = 0; j < total; ++j) {
        if (stat_[j] == VStat::Basic || col_hi_[j] <= col_lo_[j]) continue;
        double viol = 0.0;
        if (stat_[j] == VStat::AtLower) {
            if (costs[j] < -opts_.opt_tol) viol = -costs[j];
        } else {
            if (costs[j] > opts_.opt_tol) viol = costs[j];
        }
        if (viol <= 0.0) continue;
        if (bland_) return j;
        if (viol > best_score) { best_score = viol; best = j; }
    }
    return best;
}

void Simplex::build_phase1_costs() {
    const int m = m_;
    std::vector<double> cb(m, 0.0);
    for (int i = 0; i < m; ++i) {
        const int v = basic_[i];
        if (xb_[i] < col_lo_[v] - opts_.feas_tol) cb[i] = -1.0;
        else if (xb_[i] > col_hi_[v] + opts_.feas_tol) cb[i] = 1.0;
    }
    std::vector<double> y1(m, 0.0);
    for (int i = 0; i < m; ++i) {
        if (cb[i] == 0.0) continue;
        const double* bi = binv_.data() + static_cast<std::size_t>(i) * m;
        for (int k = 0; k < m; ++k) y1[k] += cb[i] * bi[k];
    }
    const int total = static_cast<int>(cols_.size());
    phase1_d_.assign(total, 0.0);
    for (int j = 0; j < total; ++j) {
        if (stat_[j] == VStat::Basic) continue;
        double dj = 0.0;
        for (const Term& t : cols_[j]) dj -= y1[t.var] * t.coef;
        phase1_d_[j] = dj;
    }
}

Simplex::Step Simplex::primal_iterate(bool phase_one) {
    if (phase_one) build_phase1_costs();
    const std::vector<double>& costs = phase_one ? phase1_d_ : d_;
    const int q = price_entering(costs);
    if (q < 0) return Step::Done;

    const double dir = (stat_[q] == VStat::AtLower) ? 1.0 : -1.0;
    std::vector<double> alpha;
    ftran(q, alpha);

    double t_best = col_hi_[q] - col_lo_[q];  // bound flip step
    int block = -1;
    int block_side = 0;
    double block_alpha = 0.0;
    for (int i = 0; i < m_; ++i) {
        const double rate = -dir * alpha[i];
        if (std::fabs(rate) <= opts_.pivot_tol) continue;
        const int v = basic_[i];
        const double lo = col_lo_[v], hi = col_hi_[v];
        double t = kInf;
        int side = 0;
        if (phase_one && xb_[i] < lo - opts_.feas_tol) {
            if (rate > 0.0) { t = (lo - xb_[i]) / rate; side = -1; }
        } else if (phase_one && xb_[i] > hi + opts_.feas_tol) {
            if (rate < 0.0) { t = (hi - xb_[i]) / rate; side = +1; }
        } else if (rate > 0.0) {
            if (finite(hi)) { t = (hi - xb_[i]) / rate; side = +1; }
        } else {
            if (finite(lo)) { t = (lo - xb_[i]) / rate; side = -1; }
        }
        if (!finite(t)) continue;
        if (t < 0.0) t = 0.0;
        bool better;
        if (block < 0) {
            better = t < t_best;
        } else {
            better = t < t_best - 1e-12 ||
                     (t < t_best + 1e-12 &&
                      (bland_ ? basic_[i] < basic_[block]
                              : std::fabs(alpha[i]) > std::fabs(block_alpha)));
        }
        if (better) { t_best = t; block = i; block_side = side; block_alpha = alpha[i]; }
    }

    if (block < 0) {
        if (!finite(t_best)) return phase_one ? Step::Stuck : Step::Unbounded;
        ++iters_;
        const double delta = dir * t_best;
        for (int i = 0; i < m_; ++i) xb_[i] -= delta * alpha[i];
        stat_[q] = (stat_[q] == VStat::AtLower) ? VStat::AtUpper : VStat::AtLower;
        return Step::Moved;
    }

    ++iters_;
    ++pivots_since_refactor_;
    const double enter_from = nonbasic_value(q);
    const double delta = dir * t_best;
    for (int i = 0; i < m_; ++i) xb_[i] -= delta * alpha[i];

    const int leaving = basic_[block];
    basic_[block] = q;
    pos_of_[q] = block;
    pos_of_[leaving] = -1;
    stat_[q] = VStat::Basic;
    stat_[leaving] = (block_side < 0) ? VStat::AtLower : VStat::AtUpper;
    if (stat_[leaving] == VStat::AtLower && !finite(col_lo_[leaving]))
        stat_[leaving] = VStat::AtUpper;
    xb_[block] = enter_from + delta;

    update_inverse(block, alpha);
    after_pivot();
    return Step::Moved;
}

Simplex::Step Simplex::dual_iterate() {
    int r = -1;
    double worst = opts_.feas_tol;
    for (int i = 0; i < m_; ++i) {
        const int v = basic_[i];
        double viol = 0.0;
        if (xb_[i] < col_lo_[v]) viol = col_lo_[v] - xb_[i];
        else if (xb_[i] > col_hi_[v]) viol = xb_[i] - col_hi_[v];
        if (viol > worst) { worst = viol; r = i; }
    }
    if (r < 0) return Step::Done;

    const int leave_var = basic_[r];
    const double sigma = (xb_[r] > col_hi_[leave_var]) ? 1.0 : -1.0;
    const double target = (sigma > 0.0) ? col_hi_[leave_var] : col_lo_[leave_var];

    const int m = m_;
    const double* rho = binv_.data() + static_cast<std::size_t>(r) * m;
    const int total = static_cast<int>(cols_.size());
    int q = -1;
    double best_ratio = kInf;
    double best_arow = 0.0;
    for (int j = 0; j < total; ++j) {
        if (stat_[j] == VStat::Basic || col_hi_[j] <= col_lo_[j]) continue;
        double arow = 0.0;
        for (const Term& t : cols_[j]) arow += rho[t.var] * t.coef;
        const double a = sigma * arow;
        const bool eligible = (stat_[j] == VStat::AtLower) ? (a > opts_.pivot_tol)
                                                           : (a < -opts_.pivot_tol);
        if (!eligible) continue;
        const double ratio = d_[j] / a;
        bool better;
        if (q < 0) {
            better = true;
        } else {
            better = ratio < best_ratio - 1e-12 ||
                     (ratio < best_ratio + 1e-12 &&
                      (bland_ ? j < q : std::fabs(arow) > std::fabs(best_arow)));
        }
        if (better) { q = j; best_ratio = ratio; best_arow = arow; }
    }
    if (q < 0) return Step::InfeasibleRay;

    std::vector<double> alpha;
    ftran(q, alpha);
    if (std::fabs(alpha[r]) <= opts_.pivot_tol) {
        refactorize();
        return Step::Moved;  // retry from refreshed numbers
    }
    const double delta_q = (xb_[r] - target) / alpha[r];
    const double enter_from = nonbasic_value(q);

    ++iters_;
    ++pivots_since_refactor_;
    for (int i = 0; i < m_; ++i) xb_[i] -= delta_q * alpha[i];
    basic_[r] = q;
    pos_of_[q] = r;
    pos_of_[leave_var] = -1;
    stat_[q] = VStat::Basic;
    stat_[leave_var] = (sigma > 0.0) ? VStat::AtUpper : VStat::AtLower;
    if (stat_[leave_var] == VStat::AtLower && !finite(col_lo_[leave_var]))
        stat_[leave_var] = VStat::AtUpper;
    xb_[r] = enter_from + delta_q;

    update_inverse(r, alpha);
    after_pivot();
    return Step::Moved;
}

void Simplex::after_pivot() {
    if (pivots_since_refactor_ >= opts_.refactor_interval) refactorize();
    else compute_duals_and_reduced();
}

Solution Simplex::solve() {
    ensure_basis();

    const std::int64_t cap =
        (opts_.max_iterations > 0)
            ? opts_.max_iterations
            : 5000 + 80LL * (m_ + static_cast<std::int64_t>(cols_.size()));
    iters_ = 0;
    bland_ = false;

    // restore dual feasibility by bound flips where the opposite bound exists
    {
        bool flipped = false;
        const int total = static_cast<int>(cols_.size());
        for (int j = 0; j < total; ++j) {
            if (stat_[j] == VStat::Basic || col_hi_[j] <= col_lo_[j]) continue;
            if (stat_[j] == VStat::AtLower && d_[j] < -opts_.opt_tol && finite(col_hi_[j])) {
                stat_[j] = VStat::AtUpper;
                flipped = true;
            } else if (stat_[j] == VStat::AtUpper && d_[j] > opts_.opt_tol &&
                       finite(col_lo_[j])) {
                stat_[j] = VStat::AtLower;
                flipped = true;
            }
        }
        if (flipped) compute_basic_values();
    }

    auto dual_feasible = [&]() {
        const int total = static_cast<int>(cols_.size());
        for (int j = 0; j < total; ++j) {
            if (stat_[j] == VStat::Basic || col_hi_[j] <= col_lo_[j]) continue;
            if (stat_[j] == VStat::AtLower && d_[j] < -1e-6) return false;
            if (stat_[j] == VStat::AtUpper && d_[j] > 1e-6) return false;
        }
        return true;
    };

    Status status = Status::Optimal;
    std::int64_t stall = 0;
    double last_obj = kInf;
    auto track = [&](double v) {
        if (v < last_obj - 1e-12) { last_obj = v; stall = 0; }
        else if (++stall > 400) bland_ = true;
    };

    if (infeasibility_sum() > opts_.feas_tol && dual_feasible()) {
        // warm restart path: restore primal feasibility with dual pivots
        for (;;) {
            const Step s = dual_iterate();
            if (s == Step::Done) break;
            if (s == Step::InfeasibleRay) { status = Status::Infeasible; break; }
            if (iters_ > cap)
                throw solver_error("dual simplex iteration limit",
                                   "iterations=" + std::to_string(iters_));
            track(infeasibility_sum());
        }
    }

    if (status == Status::Optimal && infeasibility_sum() > opts_.feas_tol) {
        bland_ = false;
        stall = 0;
        last_obj = kInf;
        for (;;) {
            if (infeasibility_sum() <= opts_.feas_tol) break;
            const Step s = primal_iterate(true);
            if (s == Step::Done) break;
            if (s == Step::Stuck)
                throw solver_error("phase-1 ray without blocking bound",
                                   "iterations=" + std::to_string(iters_));
            if (iters_ > cap)
                throw solver_error("phase-1 iteration limit",
                                   "iterations=" + std::to_string(iters_));
            track(infeasibility_sum());
        }
        if (infeasibility_sum() > opts_.feas_tol) status = Status::Infeasible;
    }

    bool unbounded = false;
    if (status == Status::Optimal) {
        bland_ = false;
        stall = 0;
        last_obj = kInf;
        for (;;) {
            const Step s = primal_iterate(false);
            if (s == Step::Done) break;
            if (s == Step::Unbounded) { unbounded = true; break; }
            if (iters_ > cap)
                throw solver_error("phase-2 iteration limit",
                                   "iterations=" + std::to_string(iters_));
            track(basic_objective());
        }
        if (!unbounded && infeasibility_sum() > 10 * opts_.feas_tol) {
            // numerical drift: refresh and clean up once more
            refactorize();
            while (infeasibility_sum() > opts_.feas_tol) {
                const Step s = primal_iterate(true);
                if (s != Step::Moved) break;
                if (iters_ > cap) throw solver_error("cleanup iteration limit", "");
            }
            if (infeasibility_sum() > opts_.feas_tol) status = Status::Infeasible;
            else
                while (primal_iterate(false) == Step::Moved)
                    if (iters_ > cap) throw solver_error("cleanup iteration limit", "");
        }
    }

    Solution sol;
    sol.status = unbounded ? Status::Unbounded : status;
    sol.iterations = iters_;
    sol.basis = current_basis();
    const int n = num_structural();
    sol.primal.assign(n, 0.0);
    int structural_seen = 0;
    // structural variables are every engine column that is not a logical
    std::vector<char> is_logical(cols_.size(), 0);
    for (int lg : logical_of_row_) is_logical[lg] = 1;
    std::vector<int> structural_ids;
    structural_ids.reserve(n);
    for (int j = 0; j < static_cast<int>(cols_.size()); ++j)
        if (!is_logical[j]) structural_ids.push_back(j);
    sol.primal.assign(structural_ids.size(), 0.0);
    sol.reduced_costs.assign(structural_ids.size(), 0.0);
    for (std::size_t k = 0; k < structural_ids.size(); ++k) {
        sol.primal[k] = value_of(structural_ids[k]);
        sol.reduced_costs[k] = d_[structural_ids[k]];
    }
    (void)structural_seen;
    double obj = 0.0;
    for (std::size_t k = 0; k < structural_ids.size(); ++k)
        obj += col_obj_[structural_ids[k]] * sol.primal[k];
    sol.objective = obj;
    sol.duals = y_;
    return sol;
}

Solution solve(const LinearProgram& prog, const std::optional<Basis>& warm,
               const SolverOptions& opts) {
    Simplex s(prog, opts);
    if (warm && !warm->empty()) s.load_basis(*warm);
    return s.solve();
}

void write_mps(const LinearProgram& prog, std::ostream& os, const std::string& name) {
    os << "NAME          " << name << "\n";
    os << "ROWS\n N  COST\n";
    char buf[160];
    for (int i = 0; i < prog.num_rows(); ++i) {
        const char rel = prog.rows[i].rel == Relation::LE   ? 'L'
                         : prog.rows[i].rel == Relation::EQ ? 'E'
                                                            : 'G';
        std::snprintf(buf, sizeof buf, " %c  R%d\n", rel, i);
        os << buf;
    }
    // column-major entry lists
    std::vector<std::vector<std::pair<int, double>>> entries(prog.num_vars());
    for (int i = 0; i < prog.num_rows(); ++i)
        for (const Term& t : prog.rows[i].terms)
            if (t.coef != 0.0) entries[t.var].push_back({i, t.coef});

    os << "COLUMNS\n";
    for (int j = 0; j < prog.num_vars(); ++j) {
        if (prog.obj[j] != 0.0) {
            std::snprintf(buf, sizeof buf, "    X%-8d  COST      %.12g\n", j, prog.obj[j]);
            os << buf;
        }
        for (const auto& [row, coef] : entries[j]) {
            std::snprintf(buf, sizeof buf, "    X%-8d  R%-8d %.12g\n", j, row, coef);
            os << buf;
        }
    }
    os << "RHS\n";
    for (int i = 0; i < prog.num_rows(); ++i) {
        if (prog.rows[i].rhs != 0.0) {
            std::snprintf(buf, sizeof buf, "    RHS       R%-8d %.12g\n", i, prog.rows[i].rhs);
            os << buf;
        }
    }
    os << "BOUNDS\n";
    for (int j = 0; j < prog.num_vars(); ++j) {
        if (prog.lo[j] != 0.0) {
            std::snprintf(buf, sizeof buf, " LO BND       X%-8d %.12g\n", j, prog.lo[j]);
            os << buf;
        }
        if (std::isfinite(prog.hi[j])) {
            std::snprintf(buf, sizeof buf, " UP BND       X%-8d %.12g\n", j, prog.hi[j]);
            os << buf;
        }
    }
    os << "ENDATA\n";
}

}  // namespace ddrc::lp
