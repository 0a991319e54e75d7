#include "qnsem/nmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace qnsem {
namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

std::string join_labels(const std::set<std::string>& s) {
    std::string out = "{";
    for (const auto& l : s) {
        if (out.size() > 1) out += ",";
        out += l;
    }
    return out + "}";
}

std::string join_tuple(const std::vector<std::string>& t) {
    std::string out;
    for (const auto& l : t) {
        if (!out.empty()) out += ",";
        out += l;
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Domain

std::shared_ptr<const Domain> Domain::closure_of(const std::vector<Formula>& formulas) {
    auto d = std::make_shared<Domain>();
    std::vector<Formula> atoms;
    std::vector<Formula> compounds;
    for (auto& f : subformula_closure(formulas)) (f.is_atom() ? atoms : compounds).push_back(f);
    std::sort(atoms.begin(), atoms.end(), [](const Formula& a, const Formula& b) { return a.name() < b.name(); });
    d->atom_count_ = atoms.size();
    d->formulas_ = std::move(atoms);
    d->formulas_.insert(d->formulas_.end(), compounds.begin(), compounds.end());
    for (std::size_t i = 0; i < d->formulas_.size(); ++i) {
        d->texts_.push_back(render(d->formulas_[i]));
        d->index_.emplace(d->texts_.back(), i);
    }
    d->operands_.resize(d->formulas_.size());
    for (std::size_t i = 0; i < d->formulas_.size(); ++i) {
        for (const auto& k : d->formulas_[i].children()) d->operands_[i].push_back(d->index_.at(render(k)));
    }
    return d;
}

std::optional<std::size_t> Domain::find(const Formula& f) const {
    auto it = index_.find(render(f));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t Domain::at(const Formula& f) const {
    auto i = find(f);
    if (!i) throw Error("formula '" + render(f) + "' is not in the valuation domain");
    return *i;
}

// ---------------------------------------------------------------------------
// Finite matrices

std::size_t arity(TableOp op) { return op == TableOp::Not ? 1 : 2; }

const char* op_name(TableOp op) {
    switch (op) {
        case TableOp::Not: return "not";
        case TableOp::And: return "and";
        case TableOp::Or: return "or";
        case TableOp::Implies: return "implies";
    }
    return "?";
}

std::optional<TableOp> op_from_name(const std::string& name) {
    for (auto op : {TableOp::Not, TableOp::And, TableOp::Or, TableOp::Implies})
        if (name == op_name(op)) return op;
    return std::nullopt;
}

TableOp table_op(Connective c) {
    switch (c) {
        case Connective::Not: return TableOp::Not;
        case Connective::And: return TableOp::And;
        case Connective::Or: return TableOp::Or;
        case Connective::Atom: break;
    }
    throw Error("atoms have no truth table");
}

FiniteNMatrix::FiniteNMatrix(std::vector<std::string> values, std::set<std::string> designated,
                             std::map<TableOp, LabelTable> tables)
    : values_(std::move(values)) {
    if (values_.empty()) throw Error("N-matrix needs at least one truth value");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!index_.emplace(values_[i], i).second) throw Error("duplicate truth value '" + values_[i] + "'");
    }
    designated_.assign(values_.size(), false);
    for (const auto& d : designated) designated_[index_of(d)] = true;
    if (designated.empty() || designated.size() == values_.size()) {
        throw Error("designated set must be a non-empty proper subset of the truth values");
    }
    const std::size_t n = values_.size();
    for (const auto& [op, table] : tables) {
        const std::size_t k = arity(op);
        std::vector<Cell> cells(k == 1 ? n : n * n);
        std::vector<bool> seen(cells.size(), false);
        for (const auto& [inputs, outputs] : table) {
            if (inputs.size() != k) {
                throw Error(std::string(op_name(op)) + " table key '" + join_tuple(inputs) + "' has wrong arity");
            }
            std::size_t slot = index_of(inputs[0]);
            if (k == 2) slot = slot * n + index_of(inputs[1]);
            if (outputs.empty()) {
                throw Error(std::string(op_name(op)) + " cell '" + join_tuple(inputs) + "' is empty");
            }
            Cell c;
            for (const auto& o : outputs) c.push_back(index_of(o));
            std::sort(c.begin(), c.end());
            cells[slot] = std::move(c);
            seen[slot] = true;
        }
        for (std::size_t s = 0; s < seen.size(); ++s) {
            if (!seen[s]) {
                std::vector<std::string> key = {values_[k == 1 ? s : s / n]};
                if (k == 2) key.push_back(values_[s % n]);
                throw Error(std::string(op_name(op)) + " table is missing cell '" + join_tuple(key) + "'");
            }
        }
        cells_.emplace(op, std::move(cells));
    }
}

std::size_t FiniteNMatrix::index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw Error("unknown truth value '" + label + "'");
    return it->second;
}

std::set<std::string> FiniteNMatrix::designated_labels() const {
    std::set<std::string> d;
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (designated_[i]) d.insert(values_[i]);
    return d;
}

std::vector<TableOp> FiniteNMatrix::ops() const {
    std::vector<TableOp> out;
    for (const auto& [op, cells] : cells_) out.push_back(op);
    return out;
}

const FiniteNMatrix::Cell& FiniteNMatrix::cell(TableOp op, std::size_t a, std::size_t b) const {
    auto it = cells_.find(op);
    if (it == cells_.end()) throw Error(std::string("matrix does not interpret '") + op_name(op) + "'");
    return it->second[arity(op) == 1 ? a : a * values_.size() + b];
}

std::set<std::string> FiniteNMatrix::cell_labels(TableOp op, const std::vector<std::string>& inputs) const {
    if (inputs.size() != arity(op)) throw Error("wrong number of inputs for " + std::string(op_name(op)));
    const auto& c = cell(op, index_of(inputs[0]), inputs.size() == 2 ? index_of(inputs[1]) : 0);
    std::set<std::string> out;
    for (auto i : c) out.insert(values_[i]);
    return out;
}

LabelTable FiniteNMatrix::table(TableOp op) const {
    LabelTable t;
    const std::size_t n = values_.size();
    if (arity(op) == 1) {
        for (std::size_t a = 0; a < n; ++a) t[{values_[a]}] = cell_labels(op, {values_[a]});
    } else {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) t[{values_[a], values_[b]}] = cell_labels(op, {values_[a], values_[b]});
    }
    return t;
}

bool FiniteNMatrix::is_deterministic() const {
    for (const auto& [op, cells] : cells_)
        for (const auto& c : cells)
            if (c.size() != 1) return false;
    return true;
}

std::string FiniteNMatrix::format_cell(const Cell& c) const {
    std::set<std::string> s;
    for (auto i : c) s.insert(values_[i]);
    return join_labels(s);
}

bool operator==(const FiniteNMatrix& a, const FiniteNMatrix& b) {
    if (a.values() != b.values() || a.designated_labels() != b.designated_labels() || a.ops() != b.ops()) return false;
    for (auto op : a.ops())
        if (a.table(op) != b.table(op)) return false;
    return true;
}

FiniteNMatrix classical_matrix() {
    std::map<TableOp, LabelTable> t;
    t[TableOp::Not] = {{{"t"}, {"F"}}, {{"F"}, {"t"}}};
    t[TableOp::And] = {{{"t", "t"}, {"t"}}, {{"t", "F"}, {"F"}}, {{"F", "t"}, {"F"}}, {{"F", "F"}, {"F"}}};
    t[TableOp::Or] = {{{"t", "t"}, {"t"}}, {{"t", "F"}, {"t"}}, {{"F", "t"}, {"t"}}, {{"F", "F"}, {"F"}}};
    t[TableOp::Implies] = {{{"t", "t"}, {"t"}}, {{"t", "F"}, {"F"}}, {{"F", "t"}, {"t"}}, {{"F", "F"}, {"t"}}};
    return FiniteNMatrix({"t", "F"}, {"t"}, std::move(t));
}

FiniteNMatrix three_valued_matrix() {
    std::map<TableOp, LabelTable> t;
    t[TableOp::Or] = {
        {{"t", "t"}, {"t"}},      {{"t", "T"}, {"t"}},      {{"t", "F"}, {"t"}},
        {{"T", "t"}, {"t"}},      {{"T", "T"}, {"t", "T"}}, {{"T", "F"}, {"t", "T"}},
        {{"F", "t"}, {"t"}},      {{"F", "T"}, {"t", "T"}}, {{"F", "F"}, {"t", "T", "F"}},
    };
    t[TableOp::And] = {
        {{"t", "t"}, {"t", "T", "F"}}, {{"t", "T"}, {"F", "T"}}, {{"t", "F"}, {"F"}},
        {{"T", "t"}, {"T", "F"}},      {{"T", "T"}, {"T", "F"}}, {{"T", "F"}, {"F"}},
        {{"F", "t"}, {"F"}},           {{"F", "T"}, {"F"}},      {{"F", "F"}, {"F"}},
    };
    t[TableOp::Not] = {{{"t"}, {"F"}}, {{"T"}, {"T"}}, {{"F"}, {"t"}}};
    return FiniteNMatrix({"t", "T", "F"}, {"t"}, std::move(t));
}

FiniteNMatrix two_valued_matrix() {
    std::map<TableOp, LabelTable> t;
    t[TableOp::Or] = {{{"t", "t"}, {"t"}}, {{"t", "F"}, {"t"}}, {{"F", "t"}, {"t"}}, {{"F", "F"}, {"t", "F"}}};
    t[TableOp::And] = {{{"t", "t"}, {"t", "F"}}, {{"t", "F"}, {"F"}}, {{"F", "t"}, {"F"}}, {{"F", "F"}, {"F"}}};
    t[TableOp::Not] = {{{"t"}, {"F"}}, {{"F"}, {"t", "F"}}};
    return FiniteNMatrix({"t", "F"}, {"t"}, std::move(t));
}

// ---------------------------------------------------------------------------
// Interval matrices

const char* relation_name(Relation r) { return r == Relation::Orthogonal ? "orthogonal" : "non-orthogonal"; }

IntervalNMatrix::IntervalNMatrix(std::string name, double alpha, UnaryRule negation, BinaryRule conjunction,
                                 BinaryRule disjunction)
    : name_(std::move(name)),
      alpha_(alpha),
      negation_(std::move(negation)),
      conjunction_(std::move(conjunction)),
      disjunction_(std::move(disjunction)) {
    if (!(alpha_ > 0.0 && alpha_ <= 1.0)) throw Error("designated threshold alpha must lie in (0,1], got " + fmt(alpha_));
}

const BinaryRule& IntervalNMatrix::binary(TableOp op) const {
    if (op == TableOp::And) return conjunction_;
    if (op == TableOp::Or) return disjunction_;
    throw Error(std::string("interval matrix has no binary rule for '") + op_name(op) + "'");
}

std::vector<std::string> IntervalNMatrix::describe() const {
    return {"V = [0,1], D = [" + fmt(alpha_) + ", 1]", "not: " + negation_.description,
            "and: " + conjunction_.description, "or: " + disjunction_.description};
}

// ---------------------------------------------------------------------------
// Legality and staticity

LegalityReport is_dynamic_legal(const FiniteValuation& v, const FiniteNMatrix& m) {
    LegalityReport r;
    const Domain& d = v.domain();
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (v[i] >= m.size()) throw Error("valuation value out of range for '" + d.text(i) + "'");
        if (d.formulas()[i].is_atom()) continue;
        const auto op = table_op(d.formulas()[i].kind());
        const auto& ops = d.operands(i);
        const auto& c = m.cell(op, v[ops[0]], ops.size() > 1 ? v[ops[1]] : 0);
        if (!std::binary_search(c.begin(), c.end(), v[i])) {
            r.violations.push_back({d.text(i), m.label(v[i]), m.format_cell(c), {}});
        }
    }
    return r;
}

LegalityReport is_dynamic_legal(const RealValuation& v, const IntervalNMatrix& m, const RelationOracle& oracle,
                                double tol) {
    LegalityReport r;
    const Domain& d = v.domain();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const Formula& f = d.formulas()[i];
        const double x = v[i];
        if (!(x >= -tol && x <= 1.0 + tol)) {
            r.violations.push_back({d.text(i), fmt(x), "[0, 1]", "value outside [0,1]"});
            continue;
        }
        if (f.is_atom()) continue;
        const auto& ops = d.operands(i);
        if (f.kind() == Connective::Not) {
            const auto expected = m.negation().apply(v[ops[0]]);
            if (!expected.contains(x, tol)) r.violations.push_back({d.text(i), fmt(x), expected.to_string(), {}});
            continue;
        }
        if (!oracle) throw Error("interval matrix legality needs a relation oracle");
        const auto& rule = m.binary(table_op(f.kind()));
        const double a = v[ops[0]];
        const double b = v[ops[1]];
        const RelationVerdict verdict = oracle(f.left(), f.right());
        IntervalUnion expected = IntervalUnion::point(0.0);
        std::string note;
        if (verdict == RelationVerdict::Ambiguous) {
            expected = rule.apply(Relation::Orthogonal, a, b).unite(rule.apply(Relation::NonOrthogonal, a, b));
            note = "relation ambiguous; both cases accepted";
            r.ambiguous.push_back(render(f.left()) + " , " + render(f.right()));
        } else {
            const Relation rel = verdict == RelationVerdict::Orthogonal ? Relation::Orthogonal : Relation::NonOrthogonal;
            expected = rule.apply(rel, a, b);
            note = relation_name(rel);
            if (rel == Relation::Orthogonal && a + b > 1.0 + tol) {
                r.violations.push_back({d.text(i), fmt(x), expected.to_string(),
                                        "orthogonal operands with values summing to " + fmt(a + b) + " > 1"});
                continue;
            }
        }
        if (!expected.contains(x, tol)) r.violations.push_back({d.text(i), fmt(x), expected.to_string(), note});
    }
    return r;
}

namespace {

template <class T, class Eq, class Show>
StaticReport static_scan(const Valuation<T>& v, Eq eq, Show show) {
    StaticReport r;
    const Domain& d = v.domain();
    for (std::size_t i = d.atom_count(); i < d.size(); ++i) {
        for (std::size_t j = i + 1; j < d.size(); ++j) {
            if (d.formulas()[i].kind() != d.formulas()[j].kind()) continue;
            const auto& oi = d.operands(i);
            const auto& oj = d.operands(j);
            bool same_inputs = true;
            for (std::size_t k = 0; k < oi.size(); ++k) same_inputs = same_inputs && eq(v[oi[k]], v[oj[k]]);
            if (same_inputs && !eq(v[i], v[j])) {
                r.violations.push_back({d.text(i), d.text(j), show(v[i]), show(v[j])});
            }
        }
    }
    return r;
}

}  // namespace

StaticReport is_static(const FiniteValuation& v, const FiniteNMatrix& m) {
    return static_scan(
        v, [](std::size_t a, std::size_t b) { return a == b; }, [&m](std::size_t a) { return m.label(a); });
}

StaticReport is_static(const RealValuation& v, double tol) {
    return static_scan(
        v, [tol](double a, double b) { return std::abs(a - b) <= tol; }, [](double a) { return fmt(a); });
}

// ---------------------------------------------------------------------------
// Enumeration and consequence

namespace {

// Depth-first walk over the legal dynamic valuations in domain order.
// prune(i, value) returning true cuts the branch after assigning formula i.
class Enumerator {
public:
    Enumerator(const FiniteNMatrix& m, std::shared_ptr<const Domain> d) : m_(m), v_(std::move(d)) {}

    template <class Prune, class Leaf>
    bool run(Prune&& prune, Leaf&& leaf) {
        return step(0, prune, leaf);
    }

private:
    template <class Prune, class Leaf>
    bool step(std::size_t i, Prune& prune, Leaf& leaf) {
        const Domain& d = v_.domain();
        if (i == d.size()) return leaf(v_);
        auto try_value = [&](std::size_t x) {
            v_[i] = x;
            if (prune(i, x)) return true;
            return step(i + 1, prune, leaf);
        };
        if (i < d.atom_count()) {
            for (std::size_t x = 0; x < m_.size(); ++x)
                if (!try_value(x)) return false;
            return true;
        }
        const auto& ops = d.operands(i);
        const auto op = table_op(d.formulas()[i].kind());
        const auto& c = m_.cell(op, v_[ops[0]], ops.size() > 1 ? v_[ops[1]] : 0);
        for (auto x : c)
            if (!try_value(x)) return false;
        return true;
    }

    const FiniteNMatrix& m_;
    FiniteValuation v_;
};

std::vector<bool> membership(const Domain& d, const std::vector<Formula>& fs) {
    std::vector<bool> in(d.size(), false);
    for (const auto& f : fs) in[d.at(f)] = true;
    return in;
}

std::vector<Formula> concat(const std::vector<Formula>& a, const std::vector<Formula>& b) {
    auto out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace

std::size_t enumerate_dynamic_valuations(const FiniteNMatrix& m, const std::vector<Formula>& formulas,
                                         const std::function<bool(const FiniteValuation&)>& visit) {
    std::size_t count = 0;
    Enumerator e(m, Domain::closure_of(formulas));
    e.run([](std::size_t, std::size_t) { return false; },
          [&](const FiniteValuation& v) {
              ++count;
              return visit(v);
          });
    return count;
}

ConsequenceResult dynamic_consequence(const FiniteNMatrix& m, const std::vector<Formula>& gamma,
                                      const std::vector<Formula>& delta) {
    auto domain = Domain::closure_of(concat(gamma, delta));
    const auto in_gamma = membership(*domain, gamma);
    const auto in_delta = membership(*domain, delta);
    ConsequenceResult result{true, std::nullopt};
    Enumerator e(m, domain);
    e.run(
        [&](std::size_t i, std::size_t x) {
            // a non-designated premise or a designated conclusion closes the branch
            return (in_gamma[i] && !m.is_designated(x)) || (in_delta[i] && m.is_designated(x));
        },
        [&](const FiniteValuation& v) {
            result.holds = false;
            result.countermodel = v;
            return false;
        });
    return result;
}

ConsequenceResult static_consequence(const FiniteNMatrix& m, const std::vector<Formula>& gamma,
                                     const std::vector<Formula>& delta) {
    auto domain = Domain::closure_of(concat(gamma, delta));
    const auto in_gamma = membership(*domain, gamma);
    const auto in_delta = membership(*domain, delta);
    ConsequenceResult result{true, std::nullopt};
    enumerate_dynamic_valuations(m, concat(gamma, delta), [&](const FiniteValuation& v) {
        for (std::size_t i = 0; i < v.domain().size(); ++i) {
            if (in_gamma[i] && !m.is_designated(v[i])) return true;
            if (in_delta[i] && m.is_designated(v[i])) return true;
        }
        if (!is_static(v, m).is_static()) return true;
        result.holds = false;
        result.countermodel = v;
        return false;
    });
    return result;
}

bool is_dynamically_valid(const FiniteNMatrix& m, const Formula& psi) {
    return dynamic_consequence(m, {}, {psi}).holds;
}

std::string format_valuation(const FiniteValuation& v, const FiniteNMatrix& m) {
    std::string out;
    for (std::size_t i = 0; i < v.domain().size(); ++i) {
        if (!out.empty()) out += ", ";
        out += "v(" + v.domain().text(i) + ")=" + m.label(v[i]);
    }
    return out;
}

std::string format_valuation(const RealValuation& v) {
    std::string out;
    for (std::size_t i = 0; i < v.domain().size(); ++i) {
        if (!out.empty()) out += ", ";
        out += "v(" + v.domain().text(i) + ")=" + fmt(v[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Adequacy

AdequacyReport adequacy_check(const FiniteNMatrix& m) {
    AdequacyReport r;
    const std::size_t n = m.size();
    auto all_in = [&](const FiniteNMatrix::Cell& c, bool designated) {
        return std::all_of(c.begin(), c.end(), [&](std::size_t x) { return m.is_designated(x) == designated; });
    };
    struct Clause {
        TableOp op;
        const char* text;
        std::function<bool(bool, bool)> applies;  // (a in D, b in D)
        bool target;                               // true: subset of D; false: subset of V\D
    };
    const std::vector<Clause> clauses = {
        {TableOp::And, "if a in D and b in D then a&b is a subset of D", [](bool a, bool b) { return a && b; }, true},
        {TableOp::And, "if a not in D then a&b is a subset of V\\D", [](bool a, bool) { return !a; }, false},
        {TableOp::And, "if b not in D then a&b is a subset of V\\D", [](bool, bool b) { return !b; }, false},
        {TableOp::Or, "if a in D then a|b is a subset of D", [](bool a, bool) { return a; }, true},
        {TableOp::Or, "if b in D then a|b is a subset of D", [](bool, bool b) { return b; }, true},
        {TableOp::Or, "if a, b not in D then a|b is a subset of V\\D", [](bool a, bool b) { return !a && !b; }, false},
        {TableOp::Implies, "if a not in D then a>b is a subset of D", [](bool a, bool) { return !a; }, true},
        {TableOp::Implies, "if b in D then a>b is a subset of D", [](bool, bool b) { return b; }, true},
        {TableOp::Implies, "if a in D and b not in D then a>b is a subset of V\\D",
         [](bool a, bool b) { return a && !b; }, false},
    };
    for (const auto& cl : clauses) {
        if (!m.has(cl.op)) continue;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                if (!cl.applies(m.is_designated(a), m.is_designated(b))) continue;
                const auto& c = m.cell(cl.op, a, b);
                if (!all_in(c, cl.target)) {
                    r.violations.push_back({op_name(cl.op), cl.text, "a=" + m.label(a) + ", b=" + m.label(b),
                                            m.format_cell(c)});
                }
            }
    }
    return r;
}

namespace {

std::vector<double> candidate_points(const Region& r) {
    std::vector<double> pts;
    auto add = [&](double x) {
        if (r.contains(x) && std::find(pts.begin(), pts.end(), x) == pts.end()) pts.push_back(x);
    };
    add(0.5);
    add(0.5 * (r.lo + r.hi));
    add(r.lo);
    add(r.hi);
    add(r.lo + 0.25 * (r.hi - r.lo));
    add(r.lo + 0.75 * (r.hi - r.lo));
    return pts;
}

bool escapes(const IntervalUnion& out, bool target_designated, double alpha) {
    return target_designated ? out.lower() < alpha : out.upper() >= alpha;
}

}  // namespace

AdequacyReport adequacy_check(const IntervalNMatrix& m) {
    AdequacyReport r;
    const Region all = Region::closed(0.0, 1.0);
    const Region d = m.designated_region();
    const Region nd = m.undesignated_region();
    struct Clause {
        TableOp op;
        const char* text;
        Region a, b;
        bool target;
    };
    std::vector<Clause> clauses = {
        {TableOp::And, "if a in D and b in D then a&b is a subset of D", d, d, true},
        {TableOp::And, "if a not in D then a&b is a subset of V\\D", nd, all, false},
        {TableOp::And, "if b not in D then a&b is a subset of V\\D", all, nd, false},
        {TableOp::Or, "if a in D then a|b is a subset of D", d, all, true},
        {TableOp::Or, "if b in D then a|b is a subset of D", all, d, true},
        {TableOp::Or, "if a, b not in D then a|b is a subset of V\\D", nd, nd, false},
    };
    for (const auto& cl : clauses) {
        if (cl.a.empty() || cl.b.empty()) continue;
        const auto& rule = m.binary(cl.op);
        for (auto rel : {Relation::Orthogonal, Relation::NonOrthogonal}) {
            const RegionUnion image = rule.image(rel, cl.a, cl.b);
            if (region_subset(image, cl.target ? d : nd)) continue;
            AdequacyViolation v{op_name(cl.op), cl.text,
                                "a in " + cl.a.to_string() + ", b in " + cl.b.to_string() + ", " + relation_name(rel),
                                to_string(image)};
            bool found = false;
            for (double x : candidate_points(cl.a)) {
                for (double y : candidate_points(cl.b)) {
                    const auto out = rule.apply(rel, x, y);
                    if (escapes(out, cl.target, m.alpha())) {
                        v.witness = "a=" + fmt(x) + ", b=" + fmt(y) + ", " + relation_name(rel);
                        v.output = out.to_string();
                        found = true;
                        break;
                    }
                }
                if (found) break;
            }
            r.violations.push_back(std::move(v));
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Expansions, refinements, rexpansions

FiniteNMatrix f_expansion(const FiniteNMatrix& m1, const ExpansionFunction& F) {
    std::vector<std::string> values;
    std::set<std::string> designated;
    std::map<std::string, std::string> origin;
    for (const auto& x : m1.values()) {
        auto it = F.find(x);
        if (it == F.end() || it->second.empty()) throw Error("expansion function has no image for '" + x + "'");
        for (const auto& y : it->second) {
            if (!origin.emplace(y, x).second) {
                throw Error("expansion images overlap on '" + y + "'");
            }
            values.push_back(y);
            if (m1.is_designated(m1.index_of(x))) designated.insert(y);
        }
    }
    auto image_of = [&](const std::set<std::string>& zs) {
        std::set<std::string> out;
        for (const auto& z : zs) out.insert(F.at(z).begin(), F.at(z).end());
        return out;
    };
    std::map<TableOp, LabelTable> tables;
    for (auto op : m1.ops()) {
        LabelTable t;
        for (const auto& y1 : values) {
            if (arity(op) == 1) {
                t[{y1}] = image_of(m1.cell_labels(op, {origin[y1]}));
                continue;
            }
            for (const auto& y2 : values) t[{y1, y2}] = image_of(m1.cell_labels(op, {origin[y1], origin[y2]}));
        }
        tables[op] = std::move(t);
    }
    return FiniteNMatrix(std::move(values), std::move(designated), std::move(tables));
}

bool is_refinement(const FiniteNMatrix& m1, const FiniteNMatrix& m2) {
    for (const auto& x : m1.values()) {
        if (!m2.has_label(x)) return false;
        if (m1.is_designated(m1.index_of(x)) != m2.is_designated(m2.index_of(x))) return false;
    }
    for (auto op : m1.ops()) {
        if (!m2.has(op)) return false;
        for (const auto& [inputs, outputs] : m1.table(op)) {
            const auto bigger = m2.cell_labels(op, inputs);
            if (!std::includes(bigger.begin(), bigger.end(), outputs.begin(), outputs.end())) return false;
        }
    }
    return true;
}

ThresholdMap::ThresholdMap(std::vector<std::pair<Region, std::string>> pieces) : pieces_(std::move(pieces)) {
    auto sorted = pieces_;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.first.lo != b.first.lo) return a.first.lo < b.first.lo;
        return !a.first.lo_open && b.first.lo_open;
    });
    double cursor = 0.0;
    bool cursor_covered = false;  // is the point `cursor` already covered?
    for (const auto& [r, label] : sorted) {
        if (r.empty()) throw Error("threshold map region for '" + label + "' is empty");
        const bool continues = r.lo == cursor && r.lo_open == cursor_covered;
        if (!continues) {
            throw Error("threshold map is partial or overlapping near " + fmt(cursor) + " (region " + r.to_string() +
                        " for '" + label + "')");
        }
        cursor = r.hi;
        cursor_covered = !r.hi_open;
    }
    if (sorted.empty() || cursor != 1.0 || !cursor_covered) throw Error("threshold map does not cover [0,1]");
}

const std::string& ThresholdMap::operator()(double x) const {
    for (const auto& [r, label] : pieces_)
        if (r.contains(x)) return label;
    throw Error("threshold map is undefined at " + fmt(x));
}

ThresholdMap three_valued_map() {
    return ThresholdMap({{Region::point(1.0), "t"}, {Region{0.0, 1.0, true, true}, "T"}, {Region::point(0.0), "F"}});
}

ThresholdMap two_valued_map() {
    return ThresholdMap({{Region::point(1.0), "t"}, {Region{0.0, 1.0, false, true}, "F"}});
}

RexpansionReport verify_rexpansion(const FiniteNMatrix& m1, const FiniteNMatrix& m2,
                                   const std::map<std::string, std::string>& f) {
    RexpansionReport r;
    auto fx = [&](const std::string& x) -> const std::string& {
        auto it = f.find(x);
        if (it == f.end()) throw Error("rexpansion map is partial: no image for '" + x + "'");
        return it->second;
    };
    for (const auto& x : m2.values()) {
        const bool d2 = m2.is_designated(m2.index_of(x));
        const bool d1 = m1.is_designated(m1.index_of(fx(x)));
        if (d1 != d2) r.condition1.push_back("f(" + x + ")=" + fx(x) + " but " + x + (d2 ? " is" : " is not") + " designated");
    }
    for (auto op : m2.ops()) {
        if (!m1.has(op)) {
            r.condition2.push_back(std::string("M1 does not interpret ") + op_name(op));
            continue;
        }
        for (const auto& [inputs, outputs] : m2.table(op)) {
            ++r.symbolic_cases;
            std::vector<std::string> mapped;
            for (const auto& x : inputs) mapped.push_back(fx(x));
            const auto allowed = m1.cell_labels(op, mapped);
            for (const auto& y : outputs) {
                if (!allowed.count(fx(y))) {
                    r.condition2.push_back(std::string(op_name(op)) + "(" + join_tuple(inputs) + ") contains " + y +
                                           " but f(" + y + ")=" + fx(y) + " is not in " + join_labels(allowed));
                }
            }
        }
    }
    return r;
}

namespace {

std::set<std::string> labels_hit(const RegionUnion& image, const ThresholdMap& f) {
    std::set<std::string> out;
    for (const auto& [r, label] : f.pieces())
        if (intersects(image, r)) out.insert(label);
    return out;
}

}  // namespace

RexpansionReport verify_rexpansion(const FiniteNMatrix& m1, const IntervalNMatrix& m2, const ThresholdMap& f,
                                   std::size_t samples, std::uint64_t seed) {
    RexpansionReport r;
    const Region d2 = m2.designated_region();
    for (const auto& [region, label] : f.pieces()) {
        if (!m1.has_label(label)) throw Error("rexpansion map targets unknown value '" + label + "'");
        const Region in = region.intersect(d2);
        const bool inside = region_subset({region}, d2);
        const bool outside = in.empty();
        const bool d1 = m1.is_designated(m1.index_of(label));
        if (!inside && !outside) {
            r.condition1.push_back("region " + region.to_string() + " mixes designated and undesignated values");
        } else if (inside != d1) {
            r.condition1.push_back("f maps " + region.to_string() + (inside ? " (designated)" : " (undesignated)") +
                                   " to " + label + (d1 ? " (designated)" : " (undesignated)"));
        }
    }

    auto check = [&](const std::string& where, const std::set<std::string>& allowed, const std::set<std::string>& got) {
        for (const auto& y : got) {
            if (!allowed.count(y)) r.condition2.push_back(where + " reaches " + y + " outside " + join_labels(allowed));
        }
    };
    for (const auto& [ra, la] : f.pieces()) {
        ++r.symbolic_cases;
        check("not on " + ra.to_string(), m1.cell_labels(TableOp::Not, {la}), labels_hit(m2.negation().image(ra), f));
        for (const auto& [rb, lb] : f.pieces()) {
            for (auto op : {TableOp::And, TableOp::Or}) {
                for (auto rel : {Relation::Orthogonal, Relation::NonOrthogonal}) {
                    ++r.symbolic_cases;
                    const auto image = m2.binary(op).image(rel, ra, rb);
                    check(std::string(op_name(op)) + " (" + relation_name(rel) + ") on " + ra.to_string() + " x " +
                              rb.to_string(),
                          m1.cell_labels(op, {la, lb}), labels_hit(image, f));
                }
            }
        }
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, 3);
    auto draw = [&]() {
        switch (pick(rng)) {
            case 0: return 0.0;
            case 1: return 1.0;
            default: return unit(rng);
        }
    };
    auto probe = [&](const IntervalUnion& out) {
        std::vector<double> ys;
        for (const auto& s : out.segments()) {
            ys.push_back(s.lo);
            ys.push_back(s.hi);
            ys.push_back(s.lo + unit(rng) * (s.hi - s.lo));
        }
        return ys;
    };
    for (std::size_t k = 0; k < samples; ++k) {
        const double a = draw();
        const double b = draw();
        const int which = static_cast<int>(k % 3);
        std::set<std::string> allowed;
        IntervalUnion out = IntervalUnion::point(0.0);
        std::string where;
        if (which == 0) {
            out = m2.negation().apply(a);
            allowed = m1.cell_labels(TableOp::Not, {f(a)});
            where = "not(" + fmt(a) + ")";
        } else {
            const auto op = which == 1 ? TableOp::And : TableOp::Or;
            const auto rel = unit(rng) < 0.5 ? Relation::Orthogonal : Relation::NonOrthogonal;
            out = m2.binary(op).apply(rel, a, b);
            allowed = m1.cell_labels(op, {f(a), f(b)});
            where = std::string(op_name(op)) + "(" + fmt(a) + ", " + fmt(b) + ", " + relation_name(rel) + ")";
        }
        ++r.samples_checked;
        for (double y : probe(out)) {
            if (!allowed.count(f(y))) {
                // symbolic cases already name the region; keep a few samples
                if (++r.sample_failures > 10) break;
                r.condition2.push_back("sample " + where + " yields " + fmt(y) + " -> " + f(y) + " outside " +
                                       join_labels(allowed));
                break;
            }
        }
    }
    return r;
}

FiniteNMatrix induced_finite_matrix(const IntervalNMatrix& m2, const ThresholdMap& f,
                                    const std::vector<std::string>& labels, const std::set<std::string>& designated) {
    auto preimage = [&](const std::string& l) {
        std::vector<Region> rs;
        for (const auto& [r, label] : f.pieces())
            if (label == l) rs.push_back(r);
        return rs;
    };
    std::map<TableOp, LabelTable> tables;
    for (const auto& a : labels) {
        std::set<std::string> out;
        for (const auto& ra : preimage(a)) {
            const auto hit = labels_hit(m2.negation().image(ra), f);
            out.insert(hit.begin(), hit.end());
        }
        tables[TableOp::Not][{a}] = out;
        for (const auto& b : labels) {
            for (auto op : {TableOp::And, TableOp::Or}) {
                std::set<std::string> cell;
                for (const auto& ra : preimage(a))
                    for (const auto& rb : preimage(b))
                        for (auto rel : {Relation::Orthogonal, Relation::NonOrthogonal}) {
                            const auto hit = labels_hit(m2.binary(op).image(rel, ra, rb), f);
                            cell.insert(hit.begin(), hit.end());
                        }
                tables[op][{a, b}] = cell;
            }
        }
    }
    return FiniteNMatrix(labels, designated, std::move(tables));
}

}  // namespace qnsem
