#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "qnsem/demo.hpp"
#include "qnsem/json_io.hpp"

using namespace qnsem;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kNegative = 3 };

struct Options {
    bool json = false;
    std::uint64_t seed = 0;
    double tol = kDefaultTol;
};

std::string num(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

// Small-denominator fractions print as p/q, anything else as a decimal.
std::string fraction(double x) {
    for (int q = 1; q <= 16; ++q) {
        const double p = std::round(x * q);
        if (std::abs(x * q - p) < 1e-9) return q == 1 ? num(p) : num(p) + "/" + std::to_string(q);
    }
    return num(x);
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

Json valuation_json(const RealValuation& v) {
    Json out = Json::object();
    for (std::size_t i = 0; i < v.domain().size(); ++i) out[v.domain().text(i)] = v[i];
    return out;
}

Json valuation_json(const FiniteValuation& v, const FiniteNMatrix& m) {
    Json out = Json::object();
    for (std::size_t i = 0; i < v.domain().size(); ++i) out[v.domain().text(i)] = m.label(v[i]);
    return out;
}

Json legality_json(const LegalityReport& r) {
    Json vs = Json::array();
    for (const auto& v : r.violations)
        vs.push_back({{"formula", v.formula}, {"value", v.value}, {"expected", v.expected}, {"note", v.note}});
    return {{"legal", r.legal()}, {"violations", vs}, {"ambiguous", r.ambiguous}};
}

Json static_json(const StaticReport& r) {
    Json vs = Json::array();
    for (const auto& v : r.violations)
        vs.push_back({{"first", v.first}, {"second", v.second}, {"first_value", v.first_value},
                      {"second_value", v.second_value}});
    return {{"static", r.is_static()}, {"violations", vs}};
}

Json tree_json(const Formula& f) {
    if (f.is_atom()) return {{"atom", f.name()}};
    Json kids = Json::array();
    for (const auto& c : f.children()) kids.push_back(tree_json(c));
    return {{"op", connective_name(f.kind())}, {"args", kids}};
}

Json certificate_json(const FeasibilityResult& r) {
    Json terms = Json::array();
    for (const auto& t : r.certificate)
        terms.push_back({{"constraint", t.constraint}, {"multiplier", t.multiplier}, {"value", t.value}});
    return {{"verified", r.certificate_verified}, {"terms", terms}};
}

void print_valuation_table(const RealValuation& v) {
    std::size_t w = 0;
    for (std::size_t i = 0; i < v.domain().size(); ++i) w = std::max(w, v.domain().text(i).size());
    for (std::size_t i = 0; i < v.domain().size(); ++i) {
        const auto& t = v.domain().text(i);
        std::cout << "  v(" << t << ")" << std::string(w - t.size(), ' ') << " = " << num(v[i]) << "\n";
    }
}

NegationVariant negation_option(const std::string& name) {
    try {
        return variant_from_name(name);
    } catch (const Error&) {
        throw CLI::ValidationError("--negation", "expected deterministic, neg1 or neg2");
    }
}

// ---------------------------------------------------------------------------

int cmd_parse(const Options& o, const std::string& text) {
    const auto f = parse(text);
    if (o.json) {
        emit({{"formula", render(f)}, {"depth", f.depth()}, {"tree", tree_json(f)}});
    } else {
        std::cout << render(f) << "\n" << render_tree(f);
    }
    return kOk;
}

int cmd_eval(const Options& o, const std::string& state, const std::string& bind, const std::string& text) {
    const auto rho = density_from_json(load_json_file(state), o.tol);
    const auto bindings = bindings_from_json(load_json_file(bind), o.tol);
    const auto v = evaluate_state(rho, bindings, {parse(text)}, o.tol);
    if (o.json) {
        emit({{"values", valuation_json(v)}});
    } else {
        print_valuation_table(v);
    }
    return kOk;
}

int cmd_legal(const Options& o, const std::string& state, const std::string& bind, const std::string& formulas,
              double alpha, const std::string& negation) {
    const auto rho = density_from_json(load_json_file(state), o.tol);
    auto denote = std::make_shared<Denotation>(bindings_from_json(load_json_file(bind), o.tol), o.tol);
    const auto v = evaluate_state(rho, *denote, load_formulas(formulas));
    const auto m = quantum_nmatrix(alpha, negation_option(negation));
    const auto r = is_dynamic_legal(v, m, projector_oracle(denote), o.tol);
    const auto st = is_static(v, o.tol);
    if (o.json) {
        Json j = legality_json(r);
        j["values"] = valuation_json(v);
        j["static"] = static_json(st);
        emit(j);
    } else {
        print_valuation_table(v);
        for (const auto& a : r.ambiguous) std::cout << "ambiguous relation: " << a << "\n";
        for (const auto& x : r.violations) {
            std::cout << "illegal: v(" << x.formula << ") = " << x.value << " not in " << x.expected;
            if (!x.note.empty()) std::cout << " (" << x.note << ")";
            std::cout << "\n";
        }
        std::cout << (r.legal() ? "legal" : "illegal") << " for " << m.name() << "; "
                  << (st.is_static() ? "static" : std::to_string(st.violations.size()) + " static violation(s)")
                  << "\n";
    }
    return r.legal() ? kOk : kNegative;
}

int cmd_witness_dynamic(const Options& o) {
    const auto w = dynamic_witness();
    const auto oracle = projector_oracle(std::make_shared<Denotation>(w.bindings, o.tol));
    const auto m = quantum_nmatrix();
    const auto r1 = is_dynamic_legal(w.v, m, oracle, o.tol);
    const auto r2 = is_dynamic_legal(w.v_eps, m, oracle, o.tol);
    if (o.json) {
        emit({{"parameters",
               {{"alpha", w.alpha}, {"beta", w.beta}, {"gamma", w.gamma}, {"delta", w.delta}, {"epsilon", w.epsilon}}},
              {"psi", to_json(w.psi)},
              {"psi_eps", to_json(w.psi_eps)},
              {"v", valuation_json(w.v)},
              {"v_eps", valuation_json(w.v_eps)},
              {"legal", r1.legal() && r2.legal()}});
    } else {
        std::cout << "alpha=beta=gamma=delta=" << num(w.alpha) << ", epsilon=" << num(w.epsilon) << "\n";
        std::cout << "psi:\n";
        print_valuation_table(w.v);
        std::cout << "psi_eps:\n";
        print_valuation_table(w.v_eps);
        std::cout << "both legal: " << (r1.legal() && r2.legal() ? "yes" : "no") << "\n";
        const auto P = Formula::atom("P"), Q = Formula::atom("Q");
        std::cout << "v(P & Q) = " << num(w.v.at(P & Q)) << " != " << num(w.v_eps.at(P & Q)) << " = v_eps(P & Q)\n";
        std::cout << "v(P | Q) = " << num(w.v.at(P | Q)) << " != " << num(w.v_eps.at(P | Q)) << " = v_eps(P | Q)\n";
    }
    return r1.legal() && r2.legal() ? kOk : kNegative;
}

int cmd_witness_static(const Options& o) {
    const auto w = static_violation_witness();
    if (o.json) {
        emit({{"state", to_json(w.state)}, {"values", valuation_json(w.v)}, {"report", static_json(w.report)}});
    } else {
        // P2, Q2 stand for the primed projectors
        for (const char* t : {"P", "Q", "P | Q", "P2", "Q2", "P2 | Q2"})
            std::cout << "  v(" << t << ") = " << num(w.v.at(parse(t))) << "\n";
        for (const auto& v : w.report.violations)
            std::cout << "static violation: v(" << v.first << ") = " << v.first_value << " but v(" << v.second
                      << ") = " << v.second_value << "\n";
        std::cout << "v(P | Q) vs v(P2 | Q2): " << fraction(w.v.at(parse("P | Q"))) << " ≠ "
                  << fraction(w.v.at(parse("P2 | Q2"))) << "\n";
    }
    return kOk;
}

int cmd_consequence(const Options& o, const std::string& matrix, const std::string& gamma, const std::string& delta,
                    bool static_only) {
    const auto m = finite_nmatrix_from_json(load_json_file(matrix));
    const auto g = load_formulas(gamma);
    const auto d = load_formulas(delta);
    const auto r = static_only ? static_consequence(m, g, d) : dynamic_consequence(m, g, d);
    if (o.json) {
        Json j = {{"holds", r.holds}, {"mode", static_only ? "static" : "dynamic"}};
        j["countermodel"] = r.countermodel ? valuation_json(*r.countermodel, m) : Json();
        emit(j);
    } else {
        std::cout << (r.holds ? "holds" : "fails") << " (" << (static_only ? "static" : "dynamic") << ")\n";
        if (r.countermodel) std::cout << "countermodel: " << format_valuation(*r.countermodel, m) << "\n";
    }
    return r.holds ? kOk : kNegative;
}

int report_adequacy(const Options& o, const AdequacyReport& r, const std::string& name) {
    if (o.json) {
        Json vs = Json::array();
        for (const auto& v : r.violations)
            vs.push_back({{"connective", v.connective}, {"clause", v.clause}, {"witness", v.witness},
                          {"output", v.output}});
        emit({{"matrix", name}, {"adequate", r.adequate()}, {"violations", vs}});
    } else {
        for (const auto& v : r.violations)
            std::cout << v.connective << ": " << v.clause << "; witness " << v.witness << " gives " << v.output << "\n";
        std::cout << name << (r.adequate() ? " is adequate" : " is not adequate") << "\n";
    }
    return r.adequate() ? kOk : kNegative;
}

int cmd_rexpansion(const Options& o, const std::string& m1_path, const std::string& m2_path, bool quantum,
                   const std::string& map_path, double alpha, std::size_t samples) {
    const auto m1 = finite_nmatrix_from_json(load_json_file(m1_path));
    RexpansionReport r;
    if (quantum) {
        if (map_path.empty()) throw CLI::ValidationError("--map", "required with --quantum");
        r = verify_rexpansion(m1, quantum_nmatrix(alpha), threshold_map_from_json(load_json_file(map_path)), samples,
                              o.seed);
    } else {
        if (m2_path.empty() || map_path.empty()) throw CLI::ValidationError("--m2", "need --quantum or --m2 with --map");
        const auto j = load_json_file(map_path);
        if (!j.is_object()) throw Error("label map must be an object");
        std::map<std::string, std::string> f;
        for (const auto& [k, v] : j.items()) f[k] = v.get<std::string>();
        r = verify_rexpansion(m1, finite_nmatrix_from_json(load_json_file(m2_path)), f);
    }
    if (o.json) {
        emit({{"passed", r.passed()},
              {"condition1", r.condition1},
              {"condition2", r.condition2},
              {"symbolic_cases", r.symbolic_cases},
              {"samples_checked", r.samples_checked},
              {"sample_failures", r.sample_failures},
              {"seed", o.seed}});
    } else {
        for (const auto& s : r.condition1) std::cout << "condition 1: " << s << "\n";
        for (const auto& s : r.condition2) std::cout << "condition 2: " << s << "\n";
        std::cout << (r.passed() ? "rexpansion verified" : "not a rexpansion") << " (" << r.symbolic_cases
                  << " symbolic cases, " << r.samples_checked << " samples, " << r.sample_failures
                  << " failing)\n";
    }
    return r.passed() ? kOk : kNegative;
}

int cmd_ks(const Options& o, bool count, const std::string& path, std::size_t cap) {
    const auto f = family_from_json(load_json_file(path));
    const auto ctx = verify_contexts(f, o.tol);
    if (!ctx.ok()) {
        std::string msg = "contexts are not orthonormal bases:";
        for (const auto& s : ctx.failures) msg += "\n  " + s;
        throw Error(msg);
    }
    const auto r = count ? count_solutions(f, cap, o.tol) : search_classical_valuation(f, o.tol);
    if (r.assignment && !satisfies_contexts(f, *r.assignment, o.tol)) throw Error("internal check rejected assignment");
    if (o.json) {
        Json j = {{"sat", r.sat()}, {"nodes", r.nodes}};
        if (count) {
            j["count"] = r.count;
            j["capped"] = r.capped;
        }
        if (r.assignment) {
            Json a = Json::object();
            for (std::size_t i = 0; i < f.size(); ++i) a[f.ids()[i]] = (*r.assignment)[i];
            j["assignment"] = a;
        }
        emit(j);
    } else if (count) {
        std::cout << r.count << (r.capped ? "+" : "") << " classical valuation(s)\n";
    } else if (r.assignment) {
        std::cout << "SAT:";
        for (std::size_t i = 0; i < f.size(); ++i)
            if ((*r.assignment)[i] == 1) std::cout << " " << f.ids()[i];
        std::cout << " valued 1\n";
    } else {
        std::cout << "UNSAT: no classical valuation (" << r.nodes << " search nodes)\n";
    }
    if (count) return kOk;
    return r.sat() ? kOk : kNegative;
}

int cmd_oml(const Options& o, const std::string& action, const std::string& path, bool count_all, double alpha) {
    const auto l = lattice_from_json(load_json_file(path));
    if (action == "verify") {
        const auto r = verify_oml(l);
        if (o.json) {
            emit({{"elements", l.size()}, {"oml", r.ok()}, {"failure_count", r.failure_count}, {"failures", r.failures}});
        } else {
            for (const auto& s : r.failures) std::cout << s << "\n";
            std::cout << l.size() << " elements: "
                      << (r.ok() ? "orthomodular lattice" : std::to_string(r.failure_count) + " law failure(s)") << "\n";
        }
        return r.ok() ? kOk : kNegative;
    }
    if (action == "find-state") {
        const auto r = find_state(l);
        if (o.json) {
            Json j = {{"feasible", r.lp.feasible}, {"exact", r.lp.exact}, {"residual", r.lp.residual}};
            if (r.state) {
                Json s = Json::object();
                for (std::size_t i = 0; i < l.size(); ++i)
                    s[l.name(i)] = r.lp.exact ? Json(r.lp.exact_point[i]) : Json((*r.state)[i]);
                j["state"] = s;
            } else {
                j["certificate"] = certificate_json(r.lp);
            }
            emit(j);
        } else if (r.state) {
            for (std::size_t i = 0; i < l.size(); ++i)
                std::cout << "  mu(" << l.name(i) << ") = " << (r.lp.exact ? r.lp.exact_point[i] : num((*r.state)[i]))
                          << "\n";
            std::cout << "state found (" << (r.lp.exact ? "exact" : "floating") << ", residual " << num(r.lp.residual)
                      << ")\n";
        } else {
            std::cout << "no state; certificate (" << (r.lp.certificate_verified ? "verified" : "unverified") << "):\n";
            for (const auto& t : r.lp.certificate) std::cout << "  " << t.multiplier << " * [" << t.constraint << "]\n";
        }
        return r.state ? kOk : kNegative;
    }
    if (action == "cav") {
        const auto r = find_two_valued_valuation(l, count_all);
        if (o.json) {
            Json sols = Json::array();
            for (const auto& s : r.solutions) {
                Json a = Json::object();
                for (std::size_t i = 0; i < l.size(); ++i) a[l.name(i)] = s[i];
                sols.push_back(a);
            }
            emit({{"sat", r.sat()}, {"count", r.count}, {"exhausted", r.exhausted}, {"solutions", sols}});
        } else {
            for (const auto& s : r.solutions) {
                std::cout << "  valued 1:";
                for (std::size_t i = 0; i < l.size(); ++i)
                    if (s[i] == 1) std::cout << " " << l.name(i);
                std::cout << "\n";
            }
            std::cout << (r.sat() ? "SAT" : "UNSAT");
            if (count_all) std::cout << ", " << r.count << (r.exhausted ? "" : "+") << " valuation(s)";
            std::cout << "\n";
        }
        return r.sat() ? kOk : kNegative;
    }
    // tables
    const auto t = general_quantum_tables(l, alpha);
    Json pairs = Json::array();
    for (std::size_t x = 0; x < l.size(); ++x)
        for (std::size_t y = x + 1; y < l.size(); ++y)
            if (t.relation(x, y) == Relation::Orthogonal) pairs.push_back({l.name(x), l.name(y)});
    if (o.json) {
        emit({{"alpha", alpha}, {"rules", t.matrix.describe()}, {"orthogonal_pairs", pairs}});
    } else {
        for (const auto& d : t.matrix.describe()) std::cout << d << "\n";
        std::cout << pairs.size() << " orthogonal pair(s) of distinct elements:\n";
        for (const auto& p : pairs)
            std::cout << "  " << p[0].get<std::string>() << " _|_ " << p[1].get<std::string>() << "\n";
    }
    return kOk;
}

int cmd_demo(const Options& o, std::size_t samples, std::size_t trials) {
    DemoOptions d;
    d.tol = o.tol;
    d.seed = o.seed;
    d.rexpansion_samples = samples;
    d.sweep_trials = trials;
    const auto r = run_paper_demo(d);
    if (o.json) {
        emit(to_json(r));
    } else {
        std::cout << to_text(r);
    }
    return r.ok() ? kOk : kNegative;
}

double tolerance_from_env() {
    const char* s = std::getenv("QNSEM_TOL");
    if (!s || !*s) return kDefaultTol;
    char* end = nullptr;
    const double t = std::strtod(s, &end);
    if (*end != '\0' || !(t > 0.0) || t >= 1.0) throw Error(std::string("QNSEM_TOL must be a number in (0, 1), got '") + s + "'");
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    try {
        o.tol = tolerance_from_env();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    }

    CLI::App app{"qnsem: non-deterministic semantics of quantum states"};
    app.require_subcommand(1);
    app.add_flag("--json", o.json, "Machine-readable output")->configurable(false);
    app.add_option("--seed", o.seed, "Seed for randomized checks")->capture_default_str();
    app.add_option("--tol", o.tol, "Numerical tolerance (overrides QNSEM_TOL)")->check(CLI::Range(1e-300, 1.0 - 1e-12));
    app.fallthrough();

    std::function<int()> run;

    auto* parse_cmd = app.add_subcommand("parse", "Parse a formula and print its tree");
    std::string formula_text;
    parse_cmd->add_option("formula", formula_text)->required();
    parse_cmd->callback([&] { run = [&] { return cmd_parse(o, formula_text); }; });

    std::string state_path, bind_path, formulas_path, negation = "deterministic";
    double alpha = 1.0;
    auto* eval_cmd = app.add_subcommand("eval", "Born values of a formula and its subformulas");
    eval_cmd->add_option("--state", state_path, "Density operator JSON")->required();
    eval_cmd->add_option("--bind", bind_path, "Atom to projector JSON")->required();
    eval_cmd->add_option("formula", formula_text)->required();
    eval_cmd->callback([&] { run = [&] { return cmd_eval(o, state_path, bind_path, formula_text); }; });

    auto* legal_cmd = app.add_subcommand("legal", "Check a state valuation against the quantum tables");
    legal_cmd->add_option("--state", state_path)->required();
    legal_cmd->add_option("--bind", bind_path)->required();
    legal_cmd->add_option("--formulas", formulas_path)->required();
    legal_cmd->add_option("--alpha", alpha)->check(CLI::Range(0.0, 1.0));
    legal_cmd->add_option("--negation", negation, "deterministic | neg1 | neg2");
    legal_cmd->callback([&] {
        run = [&] { return cmd_legal(o, state_path, bind_path, formulas_path, alpha, negation); };
    });

    auto* witness_cmd = app.add_subcommand("witness", "Reproduce the dynamic or static counterexample");
    witness_cmd->require_subcommand(1);
    witness_cmd->add_subcommand("dynamic")->callback([&] { run = [&] { return cmd_witness_dynamic(o); }; });
    witness_cmd->add_subcommand("static")->callback([&] { run = [&] { return cmd_witness_static(o); }; });

    std::string matrix_path, gamma_path, delta_path;
    bool static_only = false;
    auto* cons_cmd = app.add_subcommand("consequence", "Decide Gamma |- Delta over a finite N-matrix");
    cons_cmd->add_option("--matrix", matrix_path)->required();
    cons_cmd->add_option("--gamma", gamma_path)->required();
    cons_cmd->add_option("--delta", delta_path)->required();
    cons_cmd->add_flag("--static", static_only, "Restrict to static valuations");
    cons_cmd->callback([&] {
        run = [&] { return cmd_consequence(o, matrix_path, gamma_path, delta_path, static_only); };
    });

    bool quantum = false, restricted = false;
    auto* adeq_cmd = app.add_subcommand("adequacy", "Check the adequacy clauses of a matrix");
    auto* adeq_matrix = adeq_cmd->add_option("--matrix", matrix_path);
    auto* adeq_quantum = adeq_cmd->add_flag("--quantum", quantum, "Use the quantum matrix");
    adeq_cmd->add_flag("--restricted", restricted, "With --quantum: the restricted case-split tables");
    adeq_cmd->add_option("--alpha", alpha)->check(CLI::Range(0.0, 1.0));
    adeq_cmd->add_option("--negation", negation);
    adeq_matrix->excludes(adeq_quantum);
    adeq_cmd->callback([&] {
        if (matrix_path.empty() && !quantum) throw CLI::ValidationError("adequacy", "need --matrix or --quantum");
        run = [&] {
            if (quantum) {
                const auto m = restricted ? adequate_restricted_tables(alpha)
                                          : quantum_nmatrix(alpha, negation_option(negation));
                return report_adequacy(o, adequacy_check(m), m.name());
            }
            return report_adequacy(o, adequacy_check(finite_nmatrix_from_json(load_json_file(matrix_path))),
                                   matrix_path);
        };
    });

    std::string m1_path, m2_path, map_path;
    std::size_t samples = 10000;
    auto* rex_cmd = app.add_subcommand("rexpansion", "Rexpansion checks");
    rex_cmd->require_subcommand(1);
    auto* rex_verify = rex_cmd->add_subcommand("verify", "Verify that M2 is a rexpansion of M1 via f");
    rex_verify->add_option("--m1", m1_path)->required();
    rex_verify->add_option("--m2", m2_path, "Finite M2 (with a label map)");
    rex_verify->add_flag("--quantum", quantum, "M2 is the quantum matrix (with a threshold map)");
    rex_verify->add_option("--map", map_path);
    rex_verify->add_option("--alpha", alpha)->check(CLI::Range(0.0, 1.0));
    rex_verify->add_option("--samples", samples)->capture_default_str();
    rex_verify->callback([&] {
        run = [&] { return cmd_rexpansion(o, m1_path, m2_path, quantum, map_path, alpha, samples); };
    });

    std::string family_path;
    std::size_t cap = 1000000;
    auto* ks_cmd = app.add_subcommand("ks", "Classical valuations of vector contexts");
    ks_cmd->require_subcommand(1);
    auto* ks_search = ks_cmd->add_subcommand("search", "Find a classical valuation (exit 3 when none)");
    ks_search->add_option("family", family_path)->required();
    ks_search->callback([&] { run = [&] { return cmd_ks(o, false, family_path, cap); }; });
    auto* ks_count = ks_cmd->add_subcommand("count", "Count classical valuations");
    ks_count->add_option("family", family_path)->required();
    ks_count->add_option("--cap", cap)->capture_default_str()->check(CLI::PositiveNumber);
    ks_count->callback([&] { run = [&] { return cmd_ks(o, true, family_path, cap); }; });

    std::string lattice_path;
    bool count_all = false;
    auto* oml_cmd = app.add_subcommand("oml", "Finite orthomodular lattices");
    oml_cmd->require_subcommand(1);
    for (const char* action : {"verify", "find-state", "cav", "tables"}) {
        auto* sub = oml_cmd->add_subcommand(action);
        sub->add_option("lattice", lattice_path)->required();
        if (std::string(action) == "cav") sub->add_flag("--count", count_all, "Enumerate every valuation");
        if (std::string(action) == "tables") sub->add_option("--alpha", alpha)->check(CLI::Range(0.0, 1.0));
        const std::string a = action;
        sub->callback([&, a] { run = [&, a] { return cmd_oml(o, a, lattice_path, count_all, alpha); }; });
    }

    std::size_t trials = 1000;
    auto* demo_cmd = app.add_subcommand("demo", "Reproduction report");
    demo_cmd->require_subcommand(1);
    auto* demo_paper = demo_cmd->add_subcommand("paper", "Run every worked example and property sweep");
    demo_paper->add_option("--samples", samples, "Rexpansion samples")->capture_default_str();
    demo_paper->add_option("--trials", trials, "Legality sweep trials per dimension")->capture_default_str();
    demo_paper->callback([&] { run = [&] { return cmd_demo(o, samples, trials); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        return run();
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kInput;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        return kInput;
    }
}
