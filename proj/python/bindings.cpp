#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qnsem/demo.hpp"
#include "qnsem/json_io.hpp"
#include "qnsem/ks.hpp"
#include "qnsem/oml.hpp"
#include "qnsem/quantum.hpp"

namespace py = pybind11;
using namespace qnsem;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const CArray& a) {
    if (a.ndim() != 2) throw Error("expected a two-dimensional array");
    const auto r = static_cast<std::size_t>(a.shape(0)), c = static_cast<std::size_t>(a.shape(1));
    return ComplexMatrix(r, c, std::vector<Complex>(a.data(), a.data() + r * c));
}

CArray to_array(const ComplexMatrix& m) {
    CArray out({m.rows(), m.cols()});
    std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
    return out;
}

std::vector<std::pair<double, double>> segments(const IntervalUnion& u) {
    std::vector<std::pair<double, double>> out;
    for (const auto& s : u.segments()) out.emplace_back(s.lo, s.hi);
    return out;
}

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

std::vector<Formula> parse_all(const std::vector<std::string>& texts) {
    std::vector<Formula> out;
    for (const auto& t : texts) out.push_back(parse(t));
    return out;
}

std::map<std::string, double> real_values(const RealValuation& v) {
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < v.domain().size(); ++i) out[v.domain().text(i)] = v[i];
    return out;
}

Bindings bindings_of(const std::map<std::string, CArray>& b, double tol) {
    Bindings out;
    for (const auto& [k, a] : b) out.emplace(k, Projector::from_matrix(to_matrix(a), tol));
    return out;
}

FiniteNMatrix matrix_named(const std::string& name) {
    if (name == "classical") return classical_matrix();
    if (name == "three-valued") return three_valued_matrix();
    if (name == "two-valued") return two_valued_matrix();
    return finite_nmatrix_from_json(load_json_file(name));
}

}  // namespace

PYBIND11_MODULE(_qnsem, m) {
    m.doc() = "Quantum non-deterministic semantics: projector lattices, N-matrices and finite OMLs";

    // later registrations are tried first, so the subclass goes last
    auto base = py::register_exception<Error>(m, "QnsemError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());

    m.attr("DEFAULT_TOL") = kDefaultTol;

    m.def("render", [](const std::string& s) { return render(parse(s)); }, "Canonical text of a formula");
    m.def("render_tree", [](const std::string& s) { return render_tree(parse(s)); });
    m.def("atoms", [](const std::string& s) { return atoms_of({parse(s)}); });

    // projectors
    m.def("meet", [](const CArray& p, const CArray& q, double tol) {
        return to_array(meet(Projector::from_matrix(to_matrix(p), tol), Projector::from_matrix(to_matrix(q), tol), tol).matrix());
    }, py::arg("p"), py::arg("q"), py::arg("tol") = kDefaultTol);
    m.def("join", [](const CArray& p, const CArray& q, double tol) {
        return to_array(join(Projector::from_matrix(to_matrix(p), tol), Projector::from_matrix(to_matrix(q), tol), tol).matrix());
    }, py::arg("p"), py::arg("q"), py::arg("tol") = kDefaultTol);
    m.def("ortho", [](const CArray& p, double tol) {
        return to_array(ortho(Projector::from_matrix(to_matrix(p), tol)).matrix());
    }, py::arg("p"), py::arg("tol") = kDefaultTol);
    m.def("born", [](const CArray& rho, const CArray& p, double tol) {
        return born(DensityOperator::from_matrix(to_matrix(rho), tol), Projector::from_matrix(to_matrix(p), tol), tol);
    }, py::arg("rho"), py::arg("p"), py::arg("tol") = kDefaultTol);
    m.def("evaluate", [](const CArray& rho, const std::map<std::string, CArray>& b, const std::vector<std::string>& fs,
                         double tol) {
        return real_values(evaluate_state(DensityOperator::from_matrix(to_matrix(rho), tol), bindings_of(b, tol),
                                          parse_all(fs), tol));
    }, py::arg("rho"), py::arg("bindings"), py::arg("formulas"), py::arg("tol") = kDefaultTol,
       "Born values of every subformula");
    m.def("is_legal", [](const CArray& rho, const std::map<std::string, CArray>& b, const std::vector<std::string>& fs,
                         double alpha, const std::string& negation, double tol) {
        auto denote = std::make_shared<Denotation>(bindings_of(b, tol), tol);
        const auto v = evaluate_state(DensityOperator::from_matrix(to_matrix(rho), tol), *denote, parse_all(fs));
        return is_dynamic_legal(v, quantum_nmatrix(alpha, variant_from_name(negation)), projector_oracle(denote), tol)
            .legal();
    }, py::arg("rho"), py::arg("bindings"), py::arg("formulas"), py::arg("alpha") = 1.0,
       py::arg("negation") = "deterministic", py::arg("tol") = kDefaultTol);

    // tables
    m.def("quantum_or", [](double a, double b, bool orthogonal) {
        return segments(quantum_nmatrix().disjunction().apply(orthogonal ? Relation::Orthogonal : Relation::NonOrthogonal, a, b));
    }, py::arg("a"), py::arg("b"), py::arg("orthogonal"));
    m.def("quantum_and", [](double a, double b, bool orthogonal) {
        return segments(quantum_nmatrix().conjunction().apply(orthogonal ? Relation::Orthogonal : Relation::NonOrthogonal, a, b));
    }, py::arg("a"), py::arg("b"), py::arg("orthogonal"));
    m.def("quantum_not", [](double a, double alpha, const std::string& negation) {
        return segments(quantum_nmatrix(alpha, variant_from_name(negation)).negation().apply(a));
    }, py::arg("a"), py::arg("alpha") = 1.0, py::arg("negation") = "deterministic");

    m.def("static_witness", [] {
        const auto w = static_violation_witness();
        return py::make_tuple(real_values(w.v), w.report.violations.size());
    }, "Values of the static counterexample and its number of static violations");
    m.def("dynamic_witness", [](double epsilon) {
        const auto w = dynamic_witness(0.25, 0.25, 0.25, 0.25, epsilon);
        return py::make_tuple(real_values(w.v), real_values(w.v_eps));
    }, py::arg("epsilon") = 0.125);

    // finite matrices
    m.def("consequence", [](const std::vector<std::string>& gamma, const std::vector<std::string>& delta,
                            const std::string& matrix, bool static_only) {
        const auto nm = matrix_named(matrix);
        return static_only ? static_consequence(nm, parse_all(gamma), parse_all(delta)).holds
                           : dynamic_consequence(nm, parse_all(gamma), parse_all(delta)).holds;
    }, py::arg("gamma"), py::arg("delta"), py::arg("matrix") = "three-valued", py::arg("static") = false,
       "matrix is classical, three-valued, two-valued or a JSON path");
    m.def("is_adequate", [](const std::string& matrix) { return adequacy_check(matrix_named(matrix)).adequate(); });
    m.def("verify_quantum_rexpansion", [](const std::string& target, std::size_t samples, std::uint64_t seed) {
        const bool three = target == "three-valued";
        if (!three && target != "two-valued") throw Error("target must be three-valued or two-valued");
        return verify_rexpansion(three ? three_valued_matrix() : two_valued_matrix(), quantum_nmatrix(),
                                 three ? three_valued_map() : two_valued_map(), samples, seed)
            .passed();
    }, py::arg("target") = "three-valued", py::arg("samples") = 10000, py::arg("seed") = 0);

    // Kochen-Specker and lattices
    m.def("ks_count", [](const std::string& path, std::size_t cap) {
        const auto f = path.empty() ? cabello_family() : family_from_json(load_json_file(path));
        return count_solutions(f, cap).count;
    }, py::arg("path") = "", py::arg("cap") = 1000, "Empty path means the built-in 18-vector family");
    m.def("oml_verify", [](const std::string& path) { return verify_oml(lattice_from_json(load_json_file(path))).ok(); });
    m.def("find_state", [](const std::string& path) -> py::object {
        const auto l = lattice_from_json(load_json_file(path));
        const auto r = find_state(l);
        if (!r.state) return py::none();
        std::map<std::string, double> out;
        for (std::size_t i = 0; i < l.size(); ++i) out[l.name(i)] = (*r.state)[i];
        return py::cast(out);
    });
    m.def("cav_count", [](const std::string& path) {
        return find_two_valued_valuation(lattice_from_json(load_json_file(path)), true).count;
    });

    m.def("demo", [](std::uint64_t seed, double tol) {
        DemoOptions o;
        o.seed = seed;
        o.tol = tol;
        return to_py(to_json(run_paper_demo(o)));
    }, py::arg("seed") = 0, py::arg("tol") = kDefaultTol, "Worked examples and property sweeps as a dict");
}
