#include <doctest.h>

#include <functional>

#include "qnsem/json_io.hpp"
#include "qnsem/nmatrix.hpp"
#include "support.hpp"

using namespace qnsem;

namespace {

// All cell-legal assignments to the closure, by plain enumeration.
std::vector<std::vector<std::size_t>> all_legal(const FiniteNMatrix& m, const Domain& d) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> v(d.size(), 0);
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == d.size()) {
            out.push_back(v);
            return;
        }
        for (std::size_t x = 0; x < m.size(); ++x) {
            const auto& f = d.formulas()[i];
            if (!f.is_atom()) {
                const auto& ops = d.operands(i);
                const auto& c = m.cell(table_op(f.kind()), v[ops[0]], ops.size() > 1 ? v[ops[1]] : 0);
                if (std::find(c.begin(), c.end(), x) == c.end()) continue;
            }
            v[i] = x;
            go(i + 1);
        }
    };
    go(0);
    return out;
}

bool oracle_consequence(const FiniteNMatrix& m, const std::vector<Formula>& gamma, const std::vector<Formula>& delta,
                        bool static_only) {
    auto all = gamma;
    all.insert(all.end(), delta.begin(), delta.end());
    const auto d = Domain::closure_of(all);
    for (const auto& v : all_legal(m, *d)) {
        if (static_only) {
            bool ok = true;
            for (std::size_t i = 0; i < d->size() && ok; ++i)
                for (std::size_t j = 0; j < d->size() && ok; ++j) {
                    const auto& fi = d->formulas()[i];
                    const auto& fj = d->formulas()[j];
                    if (fi.is_atom() || fi.kind() != fj.kind()) continue;
                    bool same = true;
                    for (std::size_t k = 0; k < d->operands(i).size(); ++k)
                        same = same && v[d->operands(i)[k]] == v[d->operands(j)[k]];
                    if (same && v[i] != v[j]) ok = false;
                }
            if (!ok) continue;
        }
        bool premises = true;
        for (const auto& g : gamma) premises = premises && m.is_designated(v[d->at(g)]);
        if (!premises) continue;
        bool some = false;
        for (const auto& x : delta) some = some || m.is_designated(v[d->at(x)]);
        if (!some) return false;
    }
    return true;
}

std::vector<Formula> pool_up_to_depth_one() {
    std::vector<Formula> pool;
    const auto p = Formula::atom("p"), q = Formula::atom("q");
    for (const auto& a : {p, q}) {
        pool.push_back(a);
        pool.push_back(!a);
        for (const auto& b : {p, q}) {
            pool.push_back(a & b);
            pool.push_back(a | b);
        }
    }
    return pool;
}

}  // namespace

TEST_SUITE("nmatrix") {

TEST_CASE("matrix validation") {
    LabelTable neg = {{{"t"}, {"F"}}, {{"F"}, {"t"}}};
    CHECK_NOTHROW(FiniteNMatrix({"t", "F"}, {"t"}, {{TableOp::Not, neg}}));
    CHECK_THROWS_AS(FiniteNMatrix({"t", "F"}, {}, {{TableOp::Not, neg}}), Error);
    CHECK_THROWS_AS(FiniteNMatrix({"t", "F"}, {"t", "F"}, {{TableOp::Not, neg}}), Error);
    CHECK_THROWS_AS(FiniteNMatrix({"t", "F"}, {"t"}, {{TableOp::Not, {{{"t"}, {"F"}}}}}), Error);  // partial
    CHECK_THROWS_AS(FiniteNMatrix({"t", "F"}, {"t"}, {{TableOp::Not, {{{"t"}, {}}, {{"F"}, {"t"}}}}}), Error);
    CHECK_THROWS_AS(FiniteNMatrix({"t", "F"}, {"t"}, {{TableOp::Not, {{{"t"}, {"X"}}, {{"F"}, {"t"}}}}}), Error);
    CHECK_THROWS_AS(FiniteNMatrix({"t", "t"}, {"t"}, {{TableOp::Not, neg}}), Error);
}

TEST_CASE("bundled matrices equal the built-in ones") {
    using test_support::data;
    CHECK(finite_nmatrix_from_json(load_json_file(data("three_valued.json"))) == three_valued_matrix());
    CHECK(finite_nmatrix_from_json(load_json_file(data("two_valued.json"))) == two_valued_matrix());
    CHECK(finite_nmatrix_from_json(load_json_file(data("classical.json"))) == classical_matrix());
    CHECK(classical_matrix().is_deterministic());
    CHECK_FALSE(three_valued_matrix().is_deterministic());
}

TEST_CASE("three-valued cells") {
    const auto m = three_valued_matrix();
    CHECK(m.cell_labels(TableOp::And, {"t", "t"}) == std::set<std::string>{"t", "T", "F"});
    CHECK(m.cell_labels(TableOp::Or, {"F", "F"}) == std::set<std::string>{"t", "T", "F"});
    CHECK(m.cell_labels(TableOp::Or, {"T", "F"}) == std::set<std::string>{"t", "T"});
    CHECK(m.cell_labels(TableOp::Not, {"T"}) == std::set<std::string>{"T"});
}

TEST_CASE("enumeration matches plain enumeration") {
    for (const auto& m : {classical_matrix(), three_valued_matrix(), two_valued_matrix()}) {
        for (const auto& text : {"p", "p & q", "!(p | q) & p", "p | !p", "(p & q) | (q & p)"}) {
            const std::vector<Formula> fs = {parse(text)};
            const auto d = Domain::closure_of(fs);
            std::set<std::vector<std::size_t>> seen;
            const auto n = enumerate_dynamic_valuations(m, fs, [&](const FiniteValuation& v) {
                CHECK(is_dynamic_legal(v, m).legal());
                seen.insert(v.values());
                return true;
            });
            const auto expected = all_legal(m, *d);
            CHECK(n == expected.size());
            CHECK(seen == std::set<std::vector<std::size_t>>(expected.begin(), expected.end()));
        }
    }
}

TEST_CASE("enumeration stops early") {
    std::size_t calls = 0;
    enumerate_dynamic_valuations(three_valued_matrix(), {parse("p | q")}, [&](const FiniteValuation&) {
        return ++calls < 3;
    });
    CHECK(calls == 3);
}

TEST_CASE("dynamic and static consequence agree with the oracle") {
    const auto pool = pool_up_to_depth_one();
    for (const auto& m : {three_valued_matrix(), two_valued_matrix()}) {
        for (std::size_t g = 0; g <= pool.size(); ++g)
            for (const auto& d : pool) {
                std::vector<Formula> gamma;
                if (g < pool.size()) gamma.push_back(pool[g]);
                const auto dyn = dynamic_consequence(m, gamma, {d});
                CHECK(dyn.holds == oracle_consequence(m, gamma, {d}, false));
                if (!dyn.holds) {
                    REQUIRE(dyn.countermodel);
                    CHECK(is_dynamic_legal(*dyn.countermodel, m).legal());
                    CHECK_FALSE(m.is_designated(dyn.countermodel->at(d)));
                }
                CHECK(static_consequence(m, gamma, {d}).holds == oracle_consequence(m, gamma, {d}, true));
            }
    }
}

TEST_CASE("known sequents") {
    const auto m = three_valued_matrix();
    CHECK(dynamic_consequence(m, {parse("p & q")}, {parse("p")}).holds);
    CHECK_FALSE(dynamic_consequence(m, {}, {parse("p | !p")}).holds);
    CHECK(is_dynamically_valid(classical_matrix(), parse("p | !p")));
    CHECK_FALSE(is_dynamically_valid(m, parse("p | !p")));
    // empty delta: gamma has no model
    CHECK(dynamic_consequence(classical_matrix(), {parse("p"), parse("!p")}, {}).holds);
    CHECK_FALSE(dynamic_consequence(classical_matrix(), {parse("p")}, {}).holds);
}

TEST_CASE("static valuations respect composability") {
    const auto m = three_valued_matrix();
    const auto d = Domain::closure_of({parse("p | q"), parse("r | q")});
    FiniteValuation v(d, m.index_of("T"));
    v.set(parse("p | q"), m.index_of("t"));
    v.set(parse("r | q"), m.index_of("T"));
    CHECK(is_dynamic_legal(v, m).legal());
    CHECK(is_static(v, m).violations.size() == 1);
    v.set(parse("r | q"), m.index_of("t"));
    CHECK(is_static(v, m).is_static());
}

TEST_CASE("illegal finite valuation is reported") {
    const auto m = classical_matrix();
    const auto d = Domain::closure_of({parse("!p")});
    FiniteValuation v(d, m.index_of("t"));
    const auto r = is_dynamic_legal(v, m);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].formula == "!p");
}

TEST_CASE("finite adequacy") {
    CHECK(adequacy_check(classical_matrix()).adequate());
    const auto r = adequacy_check(three_valued_matrix());
    CHECK_FALSE(r.adequate());
    CHECK(std::any_of(r.violations.begin(), r.violations.end(),
                      [](const AdequacyViolation& v) { return v.connective == "and"; }));
}

TEST_CASE("expansion, refinement and finite rexpansion") {
    const auto c = classical_matrix();
    const auto e = f_expansion(c, {{"t", {"t1", "t2"}}, {"F", {"F"}}});
    CHECK(e.size() == 3);
    CHECK(e.is_designated(e.index_of("t2")));
    CHECK(e.cell_labels(TableOp::Not, {"F"}) == std::set<std::string>{"t1", "t2"});
    CHECK(e.cell_labels(TableOp::And, {"t1", "t2"}) == std::set<std::string>{"t1", "t2"});
    CHECK_THROWS_AS(f_expansion(c, {{"t", {"x"}}, {"F", {"x"}}}), Error);
    CHECK_THROWS_AS(f_expansion(c, {{"t", {"x"}}}), Error);

    // the classical matrix refines the two-valued N-matrix
    const FiniteNMatrix boolean(c.values(), c.designated_labels(),
                                {{TableOp::Not, c.table(TableOp::Not)},
                                 {TableOp::And, c.table(TableOp::And)},
                                 {TableOp::Or, c.table(TableOp::Or)}});
    CHECK(is_refinement(boolean, two_valued_matrix()));
    CHECK_FALSE(is_refinement(c, two_valued_matrix()));  // implies is missing there
    CHECK_FALSE(is_refinement(two_valued_matrix(), boolean));

    // an expansion is a rexpansion through the collapsing map
    const std::map<std::string, std::string> collapse = {{"t1", "t"}, {"t2", "t"}, {"F", "F"}};
    CHECK(verify_rexpansion(c, e, collapse).passed());
    CHECK_FALSE(verify_rexpansion(c, e, {{"t1", "F"}, {"t2", "t"}, {"F", "F"}}).passed());
    CHECK_THROWS_AS(verify_rexpansion(c, e, {{"t1", "t"}}), Error);
}

TEST_CASE("threshold maps must partition [0,1]") {
    CHECK_NOTHROW(three_valued_map());
    CHECK(three_valued_map()(0.0) == "F");
    CHECK(three_valued_map()(0.3) == "T");
    CHECK(three_valued_map()(1.0) == "t");
    CHECK(two_valued_map()(0.999) == "F");
    CHECK_THROWS_AS(ThresholdMap({{Region::closed(0.0, 0.5), "F"}}), Error);
    CHECK_THROWS_AS(ThresholdMap({{Region::closed(0.0, 0.5), "F"}, {Region::closed(0.5, 1.0), "t"}}), Error);
    CHECK_THROWS_AS(ThresholdMap({{Region{0.0, 0.5, false, true}, "F"}, {Region{0.5, 1.0, true, false}, "t"}}), Error);
}

}
