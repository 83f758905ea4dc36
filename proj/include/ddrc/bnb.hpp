#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "ddrc/lp.hpp"

namespace ddrc::bnb {

struct Options {
    double gap_tol = 1e-6;
    double int_tol = 1e-6;
    double time_limit_s = 0.0;  // 0: no limit
    std::int64_t max_reject_streak = 100000;
};

enum class SolveStatus : std::uint8_t { Optimal, Infeasible, TimedOut, Unbounded };

struct TraceRow {
    double elapsed_s = 0.0;
    double incumbent = 0.0;
    double bound = 0.0;
    int open_nodes = 0;
    std::int64_t refinements = 0;
};

struct Result {
    SolveStatus status = SolveStatus::Infeasible;
    bool has_incumbent = false;
    std::vector<double> x;  // engine column values of the incumbent
    double objective = 0.0;
    double bound = 0.0;
    double gap = 0.0;
    std::int64_t nodes = 0;
    std::int64_t lp_iterations = 0;
    std::vector<TraceRow> trace;
};

class Engine;

// Edits staged inside a candidate callback; applied to the whole search only
// when the callback rejects. Staged variable/row ids are final on rejection.
class ModelEdit {
public:
    int add_variable(double lo, double hi, double obj, std::vector<lp::Term> entries = {});
    int add_row(lp::Relation rel, double rhs, std::vector<lp::Term> terms);
    bool empty() const { return vars_.empty() && rows_.empty(); }

private:
    friend class Engine;
    explicit ModelEdit(Engine& engine);
    struct StagedVar {
        double lo, hi, obj;
        std::vector<lp::Term> entries;
    };
    Engine& engine_;
    std::vector<StagedVar> vars_;
    std::vector<lp::RowSpec> rows_;
    int base_var_ = 0;
    int base_row_ = 0;
};

struct Candidate {
    double objective = 0.0;
    std::function<double(int)> value;  // by engine column id
    ModelEdit* edit = nullptr;
    std::int64_t* refinement_counter = nullptr;
};

// lets shared model builders write into a staged edit
class EditSink final : public lp::ModelSink {
public:
    explicit EditSink(ModelEdit& edit) : edit_(edit) {}
    int add_variable(double lo, double hi, double obj) override {
        return edit_.add_variable(lo, hi, obj);
    }
    int add_row(lp::Relation rel, double rhs, std::vector<lp::Term> terms) override {
        return edit_.add_row(rel, rhs, std::move(terms));
    }

private:
    ModelEdit& edit_;
};

enum class Verdict : std::uint8_t { Accept, Reject };

using CandidateCallback = std::function<Verdict(Candidate&)>;

// Best-bound branch and bound over the binary columns of a program. The
// callback screens every integral candidate and may reject it by staging
// globally valid rows (and fresh columns); rejected candidates force a
// re-solve of the producing node before any acceptance.
class Engine {
public:
    Engine(lp::LinearProgram model, std::vector<int> binaries, Options opts = {});

    void set_callback(CandidateCallback cb) { callback_ = std::move(cb); }
    Result solve();

    lp::Simplex& simplex() { return *simplex_; }
    int num_columns() const;

private:
    friend class ModelEdit;
    struct Node {
        std::vector<std::pair<int, int>> fixings;  // binary var -> value
        double parent_bound = -lp::kInf;
        int depth = 0;
        std::int64_t seq = 0;
        lp::Basis basis;
    };

    void apply_fixings(const std::vector<std::pair<int, int>>& fixings);
    void push_trace(double incumbent, double bound, int open);
    double queue_bound() const;

    std::unique_ptr<lp::Simplex> simplex_;
    std::vector<int> binaries_;
    Options opts_;
    CandidateCallback callback_;
    std::vector<double> root_lo_, root_hi_;
    std::vector<int> applied_;  // binaries currently overridden
    std::vector<Node> heap_;
    std::vector<TraceRow> trace_;
    std::int64_t refinements_ = 0;
    double start_time_ = 0.0;
};

void write_trace_csv(const std::vector<TraceRow>& trace, std::ostream& os);

}  // namespace ddrc::bnb
