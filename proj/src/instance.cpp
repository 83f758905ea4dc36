#include "ddrc/instance.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "json.hpp"

#include "ddrc/errors.hpp"

namespace ddrc {

using nlohmann::json;

bool StateProbabilityTable::degenerate(int i) const {
    return sure_state(i) >= 0;
}

int StateProbabilityTable::sure_state(int i) const {
    for (int k = 0; k <= K; ++k) {
        bool sure = true;
        for (int l = 0; l <= L && sure; ++l)
            if (std::fabs(prob(i, k, l) - 1.0) > 1e-12) sure = false;
        if (sure) return k;
    }
    return -1;
}

void StateProbabilityTable::validate() const {
    if (n < 0 || K < 0 || L < 0) throw input_error("table dimensions must be nonnegative");
    if (p.size() != static_cast<std::size_t>(n) * (K + 1) * (L + 1))
        throw input_error("probability tensor size mismatch");
    for (int i = 0; i < n; ++i) {
        for (int l = 0; l <= L; ++l) {
            double sum = 0.0;
            for (int k = 0; k <= K; ++k) {
                const double v = prob(i, k, l);
                if (v < -1e-15 || v > 1.0 + 1e-12)
                    throw input_error("probability outside [0,1] at component " + std::to_string(i));
                sum += v;
            }
            if (std::fabs(sum - 1.0) > 1e-12)
                throw input_error("state probabilities for component " + std::to_string(i) +
                                  " at level " + std::to_string(l) + " sum to " +
                                  std::to_string(sum));
        }
    }
}

double Instance::allocation_cost(const Allocation& x) const {
    double c = 0.0;
    for (int i = 0; i < n(); ++i) c += alloc_cost[i][x.level[i]];
    return c;
}

bool Instance::feasible(const Allocation& x) const {
    if (static_cast<int>(x.level.size()) != n()) return false;
    int spend = 0;
    for (int l : x.level) {
        if (l < 0 || l > L()) return false;
        spend += l;
    }
    return spend <= budget_rhs;
}

void Instance::refresh_varying() {
    varying.clear();
    for (int i = 0; i < n(); ++i)
        if (!table.degenerate(i)) varying.push_back(i);
}

void Instance::validate() const {
    table.validate();
    if (static_cast<int>(alloc_cost.size()) != n()) throw input_error("alloc_cost row count mismatch");
    for (const auto& row : alloc_cost)
        if (static_cast<int>(row.size()) != L() + 1)
            throw input_error("alloc_cost column count mismatch");
    if (budget_rhs < 0) throw input_error("budget must be nonnegative");

    if (is_snip()) {
        const SnipRecourse& r = snip_recourse();
        if (static_cast<int>(r.component_arc.size()) != n())
            throw input_error("component/arc map size mismatch");
        for (int arc : r.component_arc)
            if (arc < 0 || arc >= static_cast<int>(r.net.arcs.size()))
                throw input_error("component mapped to unknown arc");
        if (K() != 1) throw input_error("interdiction instances use binary states");
    } else {
        const GenericRecourse& r = generic_recourse();
        if (static_cast<int>(r.q.size()) != r.n_y) throw input_error("recourse cost size mismatch");
        if (static_cast<int>(r.capacity_var.size()) != n() ||
            static_cast<int>(r.u.size()) != n() || static_cast<int>(r.M.size()) != n())
            throw input_error("per-component recourse vectors must have length n");
        for (int i = 0; i < n(); ++i) {
            if (r.capacity_var[i] < 0 || r.capacity_var[i] >= r.n_y)
                throw input_error("capacity row references unknown second-stage variable");
            if (!(r.u[i] > 0.0)) throw input_error("capacity scale u must be positive");
            if (r.M[i] < 0.0) throw input_error("penalty bound M must be nonnegative");
        }
        for (const lp::RowSpec& row : r.rows)
            for (const lp::Term& t : row.terms)
                if (t.var < 0 || t.var >= r.n_y)
                    throw input_error("recourse row references unknown variable");
    }
}

double realization_probability(const Instance& inst, const Allocation& x,
                               const StateVector& state) {
    if (static_cast<int>(state.size()) != inst.n())
        throw input_error("state vector length mismatch");
    if (static_cast<int>(x.level.size()) != inst.n())
        throw input_error("allocation length mismatch");
    double prod = 1.0;
    for (int i = 0; i < inst.n(); ++i) {
        if (state[i] < 0 || state[i] > inst.K())
            throw input_error("state out of range for component " + std::to_string(i));
        prod *= inst.table.prob(i, state[i], x.level[i]);
    }
    return prod;
}

std::vector<double> expected_state(const Instance& inst, const Allocation& x,
                                   const std::vector<int>& fixed) {
    if (static_cast<int>(fixed.size()) != inst.n())
        throw input_error("fixed map length mismatch");
    std::vector<double> xbar(inst.n(), 0.0);
    for (int i = 0; i < inst.n(); ++i) {
        if (fixed[i] >= 0) {
            if (fixed[i] > inst.K()) throw input_error("fixed state out of range");
            xbar[i] = fixed[i];
            continue;
        }
        double mean = 0.0;
        for (int k = 1; k <= inst.K(); ++k)
            mean += static_cast<double>(k) * inst.table.prob(i, k, x.level[i]);
        xbar[i] = mean;
    }
    return xbar;
}

std::vector<Scenario> enumerate_scenarios(const Instance& inst, std::uint64_t cell_guard) {
    const int nv = static_cast<int>(inst.varying.size());
    const std::uint64_t base = inst.K() + 1;
    std::uint64_t cells = 1;
    for (int i = 0; i < nv; ++i) {
        if (cells > cell_guard / base)
            throw capacity_error("scenario enumeration too large", 0, cell_guard);
        cells *= base;
    }
    if (cells > cell_guard)
        throw capacity_error("scenario enumeration too large", cells, cell_guard);

    StateVector base_state(inst.n(), 0);
    for (int i = 0; i < inst.n(); ++i) {
        const int sure = inst.table.sure_state(i);
        base_state[i] = (sure >= 0) ? sure : 0;
    }

    std::vector<Scenario> out;
    out.reserve(cells);
    std::vector<int> odo(nv, 0);
    for (std::uint64_t c = 0; c < cells; ++c) {
        Scenario s;
        s.state = base_state;
        s.varying_state = odo;
        for (int i = 0; i < nv; ++i) s.state[inst.varying[i]] = odo[i];
        out.push_back(std::move(s));
        for (int i = nv - 1; i >= 0; --i) {
            if (++odo[i] <= inst.K()) break;
            odo[i] = 0;
        }
    }
    return out;
}

Instance make_grid_instance(int rows, int cols, std::uint64_t seed, const snip::AMode& mode,
                            int budget, int levels) {
    if (budget < 0 || levels < 1) throw input_error("budget must be >= 0 and levels >= 1");
    snip::GridNetwork net = snip::generate_grid(rows, cols, seed, mode, budget, levels);

    Instance inst;
    const int n = static_cast<int>(net.failable.size());
    inst.table = StateProbabilityTable::zeros(n, 1, levels);
    for (int i = 0; i < n; ++i) {
        const double a = net.arcs[net.failable[i]].a;
        for (int l = 0; l <= levels; ++l) {
            inst.table.prob(i, 1, l) = snip::interdiction_probability(a, 1, l);
            inst.table.prob(i, 0, l) = snip::interdiction_probability(a, 0, l);
        }
    }
    inst.alloc_cost.assign(n, std::vector<double>(levels + 1, 0.0));
    inst.budget_rhs = budget * levels;
    SnipRecourse rec;
    rec.component_arc = net.failable;
    rec.net = std::move(net);
    inst.recourse = std::move(rec);
    inst.generator = GeneratorSpec{rows, cols, seed, mode};
    inst.refresh_varying();
    inst.validate();
    return inst;
}

namespace {

json amode_to_json(const snip::AMode& mode) {
    json j;
    if (mode.kind == snip::AMode::Kind::Uniform) {
        j["kind"] = "uniform";
    } else {
        j["kind"] = "explicit";
        j["a"] = mode.a;
    }
    return j;
}

snip::AMode amode_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "uniform") return snip::AMode::uniform();
    if (kind == "explicit")
        return snip::AMode::explicit_values(j.at("a").get<std::vector<double>>());
    throw input_error("unknown a_mode kind: " + kind);
}

json rows_to_json(const std::vector<lp::RowSpec>& rows) {
    json out = json::array();
    for (const lp::RowSpec& r : rows) {
        json jr;
        jr["rel"] = r.rel == lp::Relation::LE ? "<=" : (r.rel == lp::Relation::EQ ? "==" : ">=");
        jr["rhs"] = r.rhs;
        json terms = json::array();
        for (const lp::Term& t : r.terms) terms.push_back(json::array({t.var, t.coef}));
        jr["terms"] = std::move(terms);
        out.push_back(std::move(jr));
    }
    return out;
}

std::vector<lp::RowSpec> rows_from_json(const json& j) {
    std::vector<lp::RowSpec> rows;
    for (const json& jr : j) {
        lp::RowSpec r;
        const std::string rel = jr.at("rel").get<std::string>();
        if (rel == "<=") r.rel = lp::Relation::LE;
        else if (rel == "==") r.rel = lp::Relation::EQ;
        else if (rel == ">=") r.rel = lp::Relation::GE;
        else throw input_error("unknown row relation: " + rel);
        r.rhs = jr.at("rhs").get<double>();
        for (const json& jt : jr.at("terms"))
            r.terms.push_back({jt.at(0).get<int>(), jt.at(1).get<double>()});
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace

std::string instance_to_json_text(const Instance& inst) {
    json j;
    j["n"] = inst.n();
    j["K"] = inst.K();
    j["L"] = inst.L();
    j["budget"] = inst.budget_rhs / std::max(1, inst.L());
    j["budget_rhs"] = inst.budget_rhs;
    j["alloc_cost"] = inst.alloc_cost;

    if (inst.generator) {
        json rec;
        rec["kind"] = "grid_maxflow";
        rec["rows"] = inst.generator->rows;
        rec["cols"] = inst.generator->cols;
        rec["seed"] = inst.generator->seed;
        rec["a_mode"] = amode_to_json(inst.generator->a_mode);
        j["recourse"] = rec;
        j["prob"] = {{"kind", "interdiction"}};
    } else if (inst.is_snip()) {
        throw input_error("interdiction instances without a generator spec cannot be saved");
    } else {
        const GenericRecourse& r = inst.generic_recourse();
        json rec;
        rec["kind"] = "explicit";
        rec["n_y"] = r.n_y;
        rec["q"] = r.q;
        rec["W"] = rows_to_json(r.rows);
        rec["capacity_var"] = r.capacity_var;
        rec["u"] = r.u;
        rec["M"] = r.M;
        j["recourse"] = rec;

        json tensor = json::array();
        for (int i = 0; i < inst.n(); ++i) {
            json by_state = json::array();
            for (int k = 0; k <= inst.K(); ++k) {
                json by_level = json::array();
                for (int l = 0; l <= inst.L(); ++l) by_level.push_back(inst.table.prob(i, k, l));
                by_state.push_back(std::move(by_level));
            }
            tensor.push_back(std::move(by_state));
        }
        j["prob"] = tensor;
    }
    return j.dump(2) + "\n";
}

Instance instance_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw input_error(std::string("instance file is not valid JSON: ") + e.what());
    }
    try {
        const json& rec = j.at("recourse");
        const std::string kind = rec.value("kind", "explicit");
        if (kind == "grid_maxflow") {
            const int L = j.at("L").get<int>();
            const int budget = j.at("budget").get<int>();
            Instance inst = make_grid_instance(
                rec.at("rows").get<int>(), rec.at("cols").get<int>(),
                rec.at("seed").get<std::uint64_t>(), amode_from_json(rec.at("a_mode")),
                budget, L);
            if (j.contains("alloc_cost")) {
                const auto costs = j.at("alloc_cost").get<std::vector<std::vector<double>>>();
                if (static_cast<int>(costs.size()) != inst.n())
                    throw input_error("alloc_cost row count mismatch");
                inst.alloc_cost = costs;
            }
            if (j.contains("budget_rhs")) inst.budget_rhs = j.at("budget_rhs").get<int>();
            inst.validate();
            return inst;
        }

        Instance inst;
        const int n = j.at("n").get<int>();
        const int K = j.at("K").get<int>();
        const int L = j.at("L").get<int>();
        inst.table = StateProbabilityTable::zeros(n, K, L);

        const json& prob = j.at("prob");
        if (prob.is_object()) {
            if (prob.value("kind", "") != "interdiction")
                throw input_error("unknown prob kind");
            if (K != 1) throw input_error("interdiction tables require K=1");
            const auto a = prob.at("a").get<std::vector<double>>();
            if (static_cast<int>(a.size()) != n) throw input_error("a vector length mismatch");
            for (int i = 0; i < n; ++i)
                for (int l = 0; l <= L; ++l) {
                    inst.table.prob(i, 1, l) = snip::interdiction_probability(a[i], 1, l);
                    inst.table.prob(i, 0, l) = snip::interdiction_probability(a[i], 0, l);
                }
        } else {
            for (int i = 0; i < n; ++i)
                for (int k = 0; k <= K; ++k)
                    for (int l = 0; l <= L; ++l)
                        inst.table.prob(i, k, l) = prob.at(i).at(k).at(l).get<double>();
        }

        inst.alloc_cost = j.at("alloc_cost").get<std::vector<std::vector<double>>>();
        inst.budget_rhs = j.contains("budget_rhs") ? j.at("budget_rhs").get<int>()
                                                   : j.at("budget").get<int>() * std::max(1, L);

        GenericRecourse r;
        r.n_y = rec.at("n_y").get<int>();
        r.q = rec.at("q").get<std::vector<double>>();
        r.rows = rows_from_json(rec.at("W"));
        r.capacity_var = rec.at("capacity_var").get<std::vector<int>>();
        r.u = rec.at("u").get<std::vector<double>>();
        r.M = rec.at("M").get<std::vector<double>>();
        inst.recourse = std::move(r);
        inst.refresh_varying();
        inst.validate();
        return inst;
    } catch (const json::exception& e) {
        throw input_error(std::string("instance file is missing fields: ") + e.what());
    }
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open instance file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return instance_from_json_text(ss.str());
}

void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write instance file: " + path);
    out << instance_to_json_text(inst);
}

}  // namespace ddrc
