#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace ddrc::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation : std::uint8_t { LE, EQ, GE };

enum class Status : std::uint8_t { Optimal, Infeasible, Unbounded, IterLimit };

struct Term {
    int var;
    double coef;
};

struct RowSpec {
    Relation rel;
    double rhs;
    std::vector<Term> terms;
};

// Minimization LP over bounded variables. Lower bounds must be finite;
// upper bounds may be +inf.
struct LinearProgram {
    std::vector<double> obj;
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<RowSpec> rows;

    int add_variable(double lower, double upper, double objective);
    int add_row(Relation rel, double rhs, std::vector<Term> terms);

    int num_vars() const { return static_cast<int>(obj.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }

    // throws input_error on malformed data (bad indices, lo > hi, non-finite lo)
    void validate() const;
};

// Uniform build surface for model pieces that are emitted either into a
// fresh program or staged into a running search.
class ModelSink {
public:
    virtual ~ModelSink() = default;
    virtual int add_variable(double lo, double hi, double obj) = 0;
    virtual int add_row(Relation rel, double rhs, std::vector<Term> terms) = 0;
};

class ProgramSink final : public ModelSink {
public:
    explicit ProgramSink(LinearProgram& prog) : prog_(prog) {}
    int add_variable(double lo, double hi, double obj) override {
        return prog_.add_variable(lo, hi, obj);
    }
    int add_row(Relation rel, double rhs, std::vector<Term> terms) override {
        return prog_.add_row(rel, rhs, std::move(terms));
    }

private:
    LinearProgram& prog_;
};

// Basis: for each row, the variable basic in that position. Variables are
// indexed engine-wide: structural variables in creation order, plus one
// logical per row appended as rows arrive. `at_upper` flags nonbasic
// variables resting at their upper bound.
struct Basis {
    std::vector<int> basic;
    std::vector<std::uint8_t> at_upper;

    bool empty() const { return basic.empty(); }
};

struct Solution {
    Status status = Status::Infeasible;
    double objective = 0.0;
    std::vector<double> primal;         // structural variables
    std::vector<double> duals;          // one per row
    std::vector<double> reduced_costs;  // structural variables
    Basis basis;
    std::int64_t iterations = 0;

    bool optimal() const { return status == Status::Optimal; }
};

struct SolverOptions {
    double feas_tol = 1e-7;
    double opt_tol = 1e-7;
    double pivot_tol = 1e-9;
    int refactor_interval = 100;
    std::int64_t max_iterations = -1;  // -1: scale with problem size
};

// Incremental simplex over one program: supports appending rows and columns
// after a solve and re-optimizing from the previous basis (dual simplex for
// new rows / changed bounds, primal for new columns).
class Simplex {
public:
    explicit Simplex(LinearProgram prog, SolverOptions opts = {});

    const LinearProgram& program() const { return prog_; }
    int num_rows() const { return m_; }
    int num_structural() const;

    // Appends rows; existing variable indexing is preserved and the current
    // basis (extended by the new logicals) stays dual-feasible.
    void add_rows(const std::vector<RowSpec>& rows);
    // Appends a column; returns its engine-wide index.
    int add_variable(double lower, double upper, double objective,
                     const std::vector<Term>& entries = {});

    void set_bounds(int var, double lower, double upper);
    double lower_bound(int var) const { return col_lo_[var]; }
    double upper_bound(int var) const { return col_hi_[var]; }
    double value_of(int var) const;
    int num_columns() const { return static_cast<int>(cols_.size()); }
    int logical_of_row(int row) const { return logical_of_row_[row]; }

    Solution solve();
    void load_basis(const Basis& basis);
    Basis current_basis() const;

private:
    enum class VStat : std::uint8_t { Basic, AtLower, AtUpper };
    enum class Step : std::uint8_t { Moved, Done, Unbounded, InfeasibleRay, Stuck };

    void ensure_basis();
    void refactorize();
    void compute_basic_values();
    void compute_duals_and_reduced();
    void update_inverse(int pivot_pos, const std::vector<double>& alpha);
    void ftran(int var, std::vector<double>& out) const;
    double nonbasic_value(int var) const;
    double infeasibility_sum() const;
    double basic_objective() const;
    int price_entering(const std::vector<double>& costs) const;
    void build_phase1_costs();
    Step primal_iterate(bool phase_one);
    Step dual_iterate();
    void after_pivot();

    LinearProgram prog_;
    SolverOptions opts_;

    int m_ = 0;  // rows
    std::vector<double> col_lo_, col_hi_, col_obj_;
    std::vector<std::vector<Term>> cols_;  // per-variable row entries
    std::vector<int> logical_of_row_;
    std::vector<double> rhs_;

    std::vector<VStat> stat_;
    std::vector<int> basic_;    // var basic in each row position
    std::vector<int> pos_of_;   // row position of basic var, -1 otherwise
    std::vector<double> binv_;  // dense m x m row-major basis inverse
    std::vector<double> xb_;
    std::vector<double> y_;
    std::vector<double> d_;
    std::vector<double> phase1_d_;
    bool factorized_ = false;
    int pivots_since_refactor_ = 0;
    bool bland_ = false;
    std::int64_t iters_ = 0;
};

// One-shot convenience wrapper.
Solution solve(const LinearProgram& prog, const std::optional<Basis>& warm = {},
               const SolverOptions& opts = {});

// Fixed-format MPS writer (objective row COST, rows R<i>, columns X<j> in
// declaration order).
void write_mps(const LinearProgram& prog, std::ostream& os,
               const std::string& name = "DDRC");

}  // namespace ddrc::lp
