#include "qnsem/demo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <sstream>

namespace qnsem {
namespace {

// Worked examples are exact fractions; floating evaluation must land this close.
constexpr double kExactTol = 1e-12;

std::string num(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

class SectionBuilder {
public:
    SectionBuilder(std::string name, std::string claim) {
        s_.name = std::move(name);
        s_.claim = std::move(claim);
    }

    void value(const std::string& name, double expected, double computed, double threshold = kExactTol) {
        s_.checks.push_back({name, num(expected), num(computed), std::abs(expected - computed), threshold});
    }
    void flag(const std::string& name, bool expected, bool computed) {
        s_.checks.push_back({name, yes_no(expected), yes_no(computed), expected == computed ? 0.0 : 1.0, 0.0});
    }
    void count(const std::string& name, std::size_t expected, std::size_t computed) {
        s_.checks.push_back({name, std::to_string(expected), std::to_string(computed),
                             std::abs(static_cast<double>(expected) - static_cast<double>(computed)), 0.0});
    }
    void text(const std::string& name, const std::string& expected, const std::string& computed, double residual,
              double threshold) {
        s_.checks.push_back({name, expected, computed, residual, threshold});
    }
    DemoSection done() { return std::move(s_); }

private:
    DemoSection s_;
};

// Distance between a value set and a closed interval [lo, hi] given by its ends.
double set_residual(const IntervalUnion& u, double lo, double hi) {
    const double gaps = u.segments().size() == 1 ? 0.0 : 1.0;
    return std::max({std::abs(u.lower() - lo), std::abs(u.upper() - hi), gaps});
}

void static_section(std::vector<DemoSection>& out) {
    SectionBuilder s("static-violation", "three-dimensional state |b>: equal inputs, unequal disjunctions");
    const auto w = static_violation_witness();
    s.value("v(P)", 0.0, w.v.at(Formula::atom("P")));
    s.value("v(Q)", 0.5, w.v.at(Formula::atom("Q")));
    s.value("v(P | Q)", 1.0, w.v.at(parse("P | Q")));
    s.value("v(P')", 0.0, w.v.at(Formula::atom("P2")));
    s.value("v(Q')", 0.5, w.v.at(Formula::atom("Q2")));
    s.value("v(P' | Q')", 0.5, w.v.at(parse("P2 | Q2")));
    s.count("static violations", 1, w.report.violations.size());
    out.push_back(s.done());
}

void dynamic_section(std::vector<DemoSection>& out, double tol) {
    SectionBuilder s("dynamic-witness", "two four-dimensional states agree on P, Q and differ on P & Q, P | Q");
    const auto w = dynamic_witness();
    const auto P = Formula::atom("P"), Q = Formula::atom("Q");
    s.value("v(P)", 0.5, w.v.at(P));
    s.value("v_eps(P)", 0.5, w.v_eps.at(P));
    s.value("v(Q)", 0.5, w.v.at(Q));
    s.value("v_eps(Q)", 0.5, w.v_eps.at(Q));
    s.value("v(P & Q)", 0.25, w.v.at(P & Q));
    s.value("v_eps(P & Q)", 0.125, w.v_eps.at(P & Q));
    s.value("v(P | Q)", 0.75, w.v.at(P | Q));
    s.value("v_eps(P | Q)", 0.875, w.v_eps.at(P | Q));
    const auto m = quantum_nmatrix();
    const auto oracle = projector_oracle(std::make_shared<Denotation>(w.bindings, tol));
    s.count("illegal cells in v", 0, is_dynamic_legal(w.v, m, oracle, tol).violations.size());
    s.count("illegal cells in v_eps", 0, is_dynamic_legal(w.v_eps, m, oracle, tol).violations.size());
    out.push_back(s.done());
}

void tables_section(std::vector<DemoSection>& out) {
    SectionBuilder s("quantum-tables", "cells of the disjunction, conjunction and negation tables");
    const auto m = quantum_nmatrix();
    const auto orth_or = m.disjunction().apply(Relation::Orthogonal, 0.3, 0.2);
    s.text("or(0.3, 0.2), orthogonal", "{0.5}", orth_or.to_string(), set_residual(orth_or, 0.5, 0.5), kExactTol);
    const auto and_cell = m.conjunction().apply(Relation::NonOrthogonal, 0.6, 0.4);
    s.text("and(0.6, 0.4), non-orthogonal", "[0, 0.4]", and_cell.to_string(), set_residual(and_cell, 0.0, 0.4),
           kExactTol);
    const auto neg = m.negation().apply(0.3);
    s.text("not(0.3)", "{0.7}", neg.to_string(), set_residual(neg, 0.7, 0.7), kExactTol);
    out.push_back(s.done());
}

void legality_section(std::vector<DemoSection>& out, const DemoOptions& o) {
    SectionBuilder s("state-legality", "Born valuations of random states are legal for the quantum tables");
    std::mt19937_64 rng(o.seed);
    const auto m = quantum_nmatrix();
    const auto P = Formula::atom("P"), Q = Formula::atom("Q");
    const std::vector<Formula> formulas = {P, Q, !P, !Q, P & Q, P | Q};
    for (std::size_t dim = 2; dim <= 5; ++dim) {
        std::size_t bad = 0;
        for (std::size_t t = 0; t < o.sweep_trials; ++t) {
            auto denote = std::make_shared<Denotation>(
                Bindings{{"P", random_projector(dim, rng)}, {"Q", random_projector(dim, rng)}}, o.tol);
            const auto v = evaluate_state(random_state(dim, rng), *denote, formulas);
            if (!is_dynamic_legal(v, m, projector_oracle(denote), o.tol).legal()) ++bad;
        }
        s.count("illegal valuations, dim " + std::to_string(dim) + " (" + std::to_string(o.sweep_trials) + " trials)",
                0, bad);
    }
    std::size_t order_bad = 0;
    for (std::size_t t = 0; t < o.sweep_trials; ++t) {
        const std::size_t dim = 2 + t % 4;
        const auto p = random_projector(dim, rng);
        Denotation denote({{"P", p}, {"Q", join(p, random_projector(dim, rng), o.tol)}}, o.tol);
        const auto v = evaluate_state(random_state(dim, rng), denote, formulas);
        if (!order_preservation_check(v, denote, o.tol).ok()) ++order_bad;
    }
    s.count("order violations for nested P <= Q", 0, order_bad);
    out.push_back(s.done());
}

void adequacy_section(std::vector<DemoSection>& out) {
    SectionBuilder s("adequacy", "the quantum matrix with D = {1} breaks the disjunction clause at a = b = 1/2");
    const auto q = adequacy_check(quantum_nmatrix());
    const bool superposition = std::any_of(q.violations.begin(), q.violations.end(), [](const AdequacyViolation& v) {
        return v.connective == "or" && v.witness == "a=0.5, b=0.5, orthogonal";
    });
    s.flag("or violation at a=b=1/2, orthogonal", true, superposition);
    s.flag("quantum matrix adequate", false, q.adequate());
    s.flag("classical matrix adequate", true, adequacy_check(classical_matrix()).adequate());
    // the restricted tables keep [max(a,b), 1] for two undesignated inputs, so
    // only that disjunction clause may fail
    const auto restricted = adequacy_check(adequate_restricted_tables(0.9));
    const auto other = std::count_if(restricted.violations.begin(), restricted.violations.end(),
                                     [](const AdequacyViolation& v) { return v.connective != "or"; });
    s.count("restricted tables (alpha=0.9): violations outside or", 0, static_cast<std::size_t>(other));
    s.flag("restricted tables (alpha=0.9): or keeps the undesignated case open", true, !restricted.adequate());
    out.push_back(s.done());
}

void negation_section(std::vector<DemoSection>& out, const DemoOptions& o) {
    SectionBuilder s("double-negation", "ordering of values under two applications of the first negation");
    const auto cell = quantum_nmatrix(0.9, NegationVariant::neg1()).negation().apply(0.8);
    s.text("neg1(0.8) with alpha=0.9", "[0.2, 1]", cell.to_string(), set_residual(cell, 0.2, 1.0), kExactTol);
    const auto r = double_negation_chain(0.9, 0.95, 0.02);
    s.flag("chain for alpha=0.9, a=0.95, b=0.02", true, r.chain_holds && r.second_above_start);
    std::mt19937_64 rng(o.seed + 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t bad = 0, neg2_bad = 0;
    for (int t = 0; t < 1000; ++t) {
        const double alpha = 0.5 + 0.5 * (1.0 - u(rng));  // (1/2, 1]
        const double a = alpha + (1.0 - alpha) * u(rng);
        const double b = (1.0 - a) * u(rng);
        const auto c = double_negation_chain(alpha, a, b);
        if (!c.chain_holds || !c.second_above_start) ++bad;
        const double alpha2 = std::min(0.5 + 0.5 * (1.0 - u(rng)), 1.0 - 1e-6);
        const auto m2 = quantum_nmatrix(alpha2, NegationVariant::neg2());
        for (double x : {u(rng), alpha2, 0.0, 1.0}) {
            const auto n = m2.negation().apply(x);
            if (n.lower() < 0.0 || n.upper() > 1.0 || n.lower() > n.upper()) ++neg2_bad;
        }
    }
    s.count("broken chains in 1000 samples", 0, bad);
    s.count("ill-formed neg2 cells in 4000 samples", 0, neg2_bad);
    out.push_back(s.done());
}

void rexpansion_section(std::vector<DemoSection>& out, const DemoOptions& o) {
    SectionBuilder s("rexpansion", "the quantum matrix is a rexpansion of the {t,T,F} and {t,F} matrices");
    const auto q = quantum_nmatrix();
    const auto three = verify_rexpansion(three_valued_matrix(), q, three_valued_map(), o.rexpansion_samples, o.seed);
    s.flag("three-valued rexpansion holds", true, three.passed());
    const auto two = verify_rexpansion(two_valued_matrix(), q, two_valued_map(), o.rexpansion_samples, o.seed);
    s.flag("two-valued rexpansion holds", true, two.passed());
    const ThresholdMap corrupted({{Region::point(0.0), "F"}, {{0.0, 1.0, true, true}, "T"}, {Region::point(1.0), "F"}});
    const auto bad = verify_rexpansion(three_valued_matrix(), q, corrupted, o.rexpansion_samples, o.seed);
    s.flag("f(1)=F breaks designation", true, !bad.condition1.empty());
    s.flag("induced {t,T,F} tables match", true,
           induced_finite_matrix(q, three_valued_map(), {"t", "T", "F"}, {"t"}) == three_valued_matrix());
    s.flag("induced {t,F} tables match", true,
           induced_finite_matrix(q, two_valued_map(), {"t", "F"}, {"t"}) == two_valued_matrix());
    out.push_back(s.done());
}

// Plain enumeration of all 0/1 assignments, independent of the solver.
std::size_t brute_force_ks(const VectorContextFamily& f, double tol) {
    const auto orth = f.orthogonality(tol);
    const std::size_t n = f.size();
    std::size_t found = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        bool ok = true;
        for (const auto& ctx : f.contexts()) {
            int ones = 0;
            for (auto i : ctx) ones += static_cast<int>(mask >> i & 1u);
            if (ones != 1) {
                ok = false;
                break;
            }
        }
        for (std::size_t i = 0; ok && i < n; ++i)
            for (std::size_t j = i + 1; ok && j < n; ++j)
                if (orth[i][j] && (mask >> i & 1u) && (mask >> j & 1u)) ok = false;
        found += ok;
    }
    return found;
}

void ks_section(std::vector<DemoSection>& out, double tol) {
    SectionBuilder s("kochen-specker", "no classically truth-valued function on 18 vectors in dimension 4");
    const auto f = cabello_family();
    s.flag("contexts are orthonormal bases", true, verify_contexts(f, tol).ok());
    s.flag("backtracking finds an assignment", false, search_classical_valuation(f, tol).sat());
    s.count("assignments by exhaustive enumeration", 0, brute_force_ks(f, tol));
    out.push_back(s.done());
}

void cav_section(std::vector<DemoSection>& out) {
    SectionBuilder s("cav", "classical models admit global two-valued valuations, quantum ones do not");
    for (std::size_t n = 2; n <= 4; ++n) {
        s.count("two-valued valuations on Boolean 2^" + std::to_string(n), n,
                find_two_valued_valuation(boolean_algebra(n), true).count);
    }
    s.count("two-valued valuations on MO2", 0, find_two_valued_valuation(mo2(), true).count);
    s.count("two-valued valuations on the no-state lattice", 0,
            find_two_valued_valuation(no_state_lattice(), true).count);
    out.push_back(s.done());
}

void states_section(std::vector<DemoSection>& out, double tol) {
    SectionBuilder s("states", "generalized states exist on Boolean and MO2 lattices but not on every OML");
    const auto check = [&](const std::string& label, const FiniteOML& l) {
        const auto r = find_state(l);
        s.flag(label + " feasible", true, r.lp.feasible);
        if (r.state) s.value(label + " state residual", 0.0, verify_general_state(l, *r.state).max_residual(), tol);
    };
    check("Boolean 2^3", boolean_algebra(3));
    check("MO2", mo2());
    const auto ns = no_state_lattice();
    s.flag("no-state lattice is orthomodular", true, verify_oml(ns).ok());
    const auto r = find_state(ns);
    s.flag("no-state lattice feasible", false, r.lp.feasible);
    s.flag("infeasibility certificate verified", true, r.lp.certificate_verified);
    out.push_back(s.done());
}

void gap_section(std::vector<DemoSection>& out, double tol) {
    SectionBuilder s("valuation-gap", "table-legal partial valuations need not extend to states");
    const auto l = boolean_algebra(3);
    const auto t = general_quantum_tables(l, 1.0);
    const std::map<std::string, std::size_t> bind = {{"a", l.index_of("a")}, {"b", l.index_of("b")},
                                                      {"c", l.index_of("c")}};
    const std::map<std::size_t, double> pins = {{bind.at("a"), 0.4}, {bind.at("b"), 0.4}, {bind.at("c"), 0.4}};
    const auto scope = instances_from_formulas(l, bind, {parse("a | b"), parse("b | c"), parse("a | c")});
    const auto local = legal_valuation_search(t, pins, scope);
    s.flag("legal on a | b, b | c, a | c with a=b=c=0.4", true, local.valuation.has_value());
    if (local.valuation) s.flag("that valuation is a state", false, verify_general_state(l, *local.valuation).ok(tol));
    s.flag("legal on every table instance", false, legal_valuation_search(t, pins).valuation.has_value());
    out.push_back(s.done());
}

Formula random_formula(std::mt19937_64& rng, int depth) {
    static const char* const atoms[] = {"p", "q", "r", "s"};
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 0 : 3);
    switch (pick(rng)) {
        case 1: return !random_formula(rng, depth - 1);
        case 2: return random_formula(rng, depth - 1) & random_formula(rng, depth - 1);
        case 3: return random_formula(rng, depth - 1) | random_formula(rng, depth - 1);
        default: return Formula::atom(atoms[std::uniform_int_distribution<int>(0, 3)(rng)]);
    }
}

void parser_section(std::vector<DemoSection>& out, const DemoOptions& o) {
    SectionBuilder s("parser", "render then parse is the identity");
    std::mt19937_64 rng(o.seed + 2);
    std::size_t bad = 0;
    for (int i = 0; i < 10000; ++i) {
        const auto f = random_formula(rng, 5);
        const auto text = render(f);
        const auto g = parse(text);
        if (!(g == f) || render(g) != text) ++bad;
    }
    s.count("round-trip failures in 10000 formulas", 0, bad);
    out.push_back(s.done());
}

// Enumerates every assignment of matrix values to the closure and keeps the
// cell-legal ones.
bool oracle_consequence(const FiniteNMatrix& m, const std::vector<Formula>& gamma, const std::vector<Formula>& delta) {
    std::vector<Formula> all = gamma;
    all.insert(all.end(), delta.begin(), delta.end());
    const auto dom = Domain::closure_of(all);
    FiniteValuation v(dom, 0);
    std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
        if (i == dom->size()) {
            for (const auto& g : gamma)
                if (!m.is_designated(v.at(g))) return true;
            for (const auto& d : delta)
                if (m.is_designated(v.at(d))) return true;
            return false;
        }
        const auto& f = dom->formulas()[i];
        const auto& ops = dom->operands(i);
        for (std::size_t x = 0; x < m.size(); ++x) {
            if (!f.is_atom()) {
                const auto& c = m.cell(table_op(f.kind()), v[ops[0]], ops.size() > 1 ? v[ops[1]] : 0);
                if (!std::binary_search(c.begin(), c.end(), x)) continue;
            }
            v[i] = x;
            if (!go(i + 1)) return false;
        }
        return true;
    };
    return go(0);
}

void consequence_section(std::vector<DemoSection>& out) {
    SectionBuilder s("consequence", "dynamic consequence over {t,T,F} agrees with plain enumeration");
    const auto m = three_valued_matrix();
    std::vector<Formula> pool;
    for (const char* a : {"p", "q"}) pool.push_back(Formula::atom(a));
    for (const char* a : {"p", "q"}) pool.push_back(!Formula::atom(a));
    for (const char* a : {"p", "q"})
        for (const char* b : {"p", "q"}) {
            pool.push_back(Formula::atom(a) & Formula::atom(b));
            pool.push_back(Formula::atom(a) | Formula::atom(b));
        }
    std::size_t checked = 0, bad = 0;
    for (std::size_t g = 0; g <= pool.size(); ++g)
        for (const auto& d : pool) {
            std::vector<Formula> gamma;
            if (g < pool.size()) gamma.push_back(pool[g]);
            ++checked;
            if (dynamic_consequence(m, gamma, {d}).holds != oracle_consequence(m, gamma, {d})) ++bad;
        }
    s.count("disagreements in " + std::to_string(checked) + " sequents", 0, bad);
    out.push_back(s.done());
}

}  // namespace

bool DemoSection::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const DemoCheck& c) { return c.ok(); });
}

bool DemoReport::ok() const { return failed_checks() == 0; }

std::size_t DemoReport::failed_checks() const {
    std::size_t n = 0;
    for (const auto& s : sections)
        for (const auto& c : s.checks) n += !c.ok();
    return n;
}

DemoReport run_paper_demo(const DemoOptions& o) {
    DemoReport r;
    r.tol = o.tol;
    r.seed = o.seed;
    static_section(r.sections);
    dynamic_section(r.sections, o.tol);
    tables_section(r.sections);
    legality_section(r.sections, o);
    adequacy_section(r.sections);
    negation_section(r.sections, o);
    rexpansion_section(r.sections, o);
    ks_section(r.sections, o.tol);
    cav_section(r.sections);
    states_section(r.sections, o.tol);
    gap_section(r.sections, o.tol);
    parser_section(r.sections, o);
    consequence_section(r.sections);
    return r;
}

Json to_json(const DemoReport& r) {
    Json sections = Json::array();
    for (const auto& s : r.sections) {
        Json checks = Json::array();
        for (const auto& c : s.checks) {
            checks.push_back({{"name", c.name},
                              {"expected", c.expected},
                              {"computed", c.computed},
                              {"residual", c.residual},
                              {"threshold", c.threshold},
                              {"ok", c.ok()}});
        }
        sections.push_back({{"name", s.name}, {"claim", s.claim}, {"ok", s.ok()}, {"checks", checks}});
    }
    return {{"tolerance", r.tol}, {"seed", r.seed}, {"ok", r.ok()}, {"failed", r.failed_checks()},
            {"sections", sections}};
}

std::string to_text(const DemoReport& r) {
    std::ostringstream os;
    for (const auto& s : r.sections) {
        os << (s.ok() ? "PASS " : "FAIL ") << s.name << ": " << s.claim << "\n";
        for (const auto& c : s.checks) {
            os << "  " << (c.ok() ? "ok  " : "BAD ") << c.name << ": expected " << c.expected << ", computed "
               << c.computed;
            if (c.residual != 0.0) os << " (residual " << num(c.residual) << ")";
            os << "\n";
        }
    }
    os << (r.ok() ? "all checks passed" : std::to_string(r.failed_checks()) + " check(s) failed") << " (seed "
       << r.seed << ", tolerance " << num(r.tol) << ")\n";
    return os.str();
}

}  // namespace qnsem
