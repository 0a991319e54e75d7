#include <doctest.h>

#include <random>

#include "qnsem/json_io.hpp"
#include "qnsem/oml.hpp"
#include "qnsem/quantum.hpp"
#include "support.hpp"

using namespace qnsem;
using test_support::data;

namespace {

// Brute force over every map L -> {0,1}.
std::size_t exhaustive_two_valued(const FiniteOML& l) {
    const std::size_t n = l.size();
    std::size_t count = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        auto v = [&](std::size_t i) { return int((mask >> i) & 1); };
        if (v(l.top()) != 1) continue;
        bool ok = true;
        for (std::size_t x = 0; x < n && ok; ++x) {
            ok = v(l.ortho(x)) == 1 - v(x);
            for (std::size_t y = 0; y < n && ok; ++y)
                ok = v(meet_oml(l, x, y)) == std::min(v(x), v(y)) && v(join_oml(l, x, y)) == std::max(v(x), v(y));
        }
        count += ok;
    }
    return count;
}

bool same_lattice(const FiniteOML& a, const FiniteOML& b) {
    if (a.names() != b.names()) return false;
    for (std::size_t x = 0; x < a.size(); ++x) {
        if (a.ortho(x) != b.ortho(x)) return false;
        for (std::size_t y = 0; y < a.size(); ++y)
            if (a.leq(x, y) != b.leq(x, y)) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("oml") {

TEST_CASE("Boolean algebras and MO2 are orthomodular") {
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto b = boolean_algebra(n);
        CHECK(b.size() == (std::size_t{1} << n));
        CHECK(verify_oml(b).ok());
    }
    const auto m = mo2();
    CHECK(m.size() == 6);
    CHECK(verify_oml(m).ok());
    const auto a = m.index_of("a"), b = m.index_of("b");
    CHECK(meet_oml(m, a, b) == m.bottom());
    CHECK(join_oml(m, a, b) == m.top());
    CHECK_FALSE(m.orthogonal(a, b));
}

TEST_CASE("fixtures load to the built-in lattices") {
    CHECK(same_lattice(lattice_from_json(load_json_file(data("boolean3.json"))), boolean_algebra(3)));
    CHECK(same_lattice(lattice_from_json(load_json_file(data("mo2.json"))), mo2()));
    CHECK(same_lattice(lattice_from_json(load_json_file(data("no_state_ag23.json"))), no_state_lattice()));
    CHECK(verify_oml(lattice_from_json(load_json_file(data("mo2_explicit.json")))).ok());
}

TEST_CASE("a non-orthomodular lattice is rejected") {
    const auto l = lattice_from_json(load_json_file(data("not_orthomodular.json")));
    const auto r = verify_oml(l);
    CHECK_FALSE(r.ok());
    CHECK_FALSE(r.failures.empty());
}

TEST_CASE("malformed lattices throw") {
    CHECK_THROWS_AS(FiniteOML({"0", "1"}, {{0, 1}}, {1}, 0, 1), Error);
    CHECK_THROWS_AS(FiniteOML({"0", "1"}, {{0, 5}}, {1, 0}, 0, 1), Error);
    CHECK_THROWS_AS(from_greechie({"a", "b"}, {{"a", "c"}}), Error);
    CHECK_THROWS_AS(boolean_algebra(27), Error);
}

TEST_CASE("no-state lattice") {
    const auto l = no_state_lattice();
    CHECK(l.size() == 128);
    CHECK(verify_oml(l).ok());
    const auto r = find_state(l);
    CHECK_FALSE(r.lp.feasible);
    CHECK(r.lp.exact);
    CHECK(r.lp.certificate_verified);
    CHECK_FALSE(r.state);
}

TEST_CASE("states on small lattices") {
    for (const auto& l : {boolean_algebra(2), boolean_algebra(3), mo2()}) {
        const auto r = find_state(l);
        REQUIRE(r.state);
        CHECK(verify_general_state(l, *r.state).max_residual() == 0.0);
    }
    const auto b = boolean_algebra(2);
    std::vector<double> bad(b.size(), 0.5);
    CHECK_FALSE(verify_general_state(b, bad).ok(1e-9));
    CHECK_THROWS_AS(verify_general_state(b, {0.0}), Error);
}

TEST_CASE("two-valued valuations match exhaustive enumeration") {
    for (std::size_t n = 2; n <= 4; ++n) {
        const auto l = boolean_algebra(n);
        const auto r = find_two_valued_valuation(l, true);
        CHECK(r.count == n);
        CHECK(r.exhausted);
        CHECK(exhaustive_two_valued(l) == n);
    }
    CHECK(exhaustive_two_valued(mo2()) == 0);
    CHECK_FALSE(find_two_valued_valuation(mo2()).sat());
    CHECK_FALSE(find_two_valued_valuation(no_state_lattice()).sat());
    const auto capped = find_two_valued_valuation(boolean_algebra(4), true, 2);
    CHECK(capped.count == 2);
    CHECK_FALSE(capped.exhausted);
}

TEST_CASE("projector fragments") {
    const double s = 1.0 / std::sqrt(2.0);
    const auto e0 = Projector::from_orthonormal({{1, 0}}, 2);
    const auto d = Projector::from_orthonormal({{s, s}}, 2);
    const auto frag = close_projector_fragment({e0, d});
    CHECK(frag.lattice.size() == 6);
    CHECK(verify_oml(frag.lattice).ok());
    CHECK(find_two_valued_valuation(frag.lattice).count == 0);

    std::mt19937_64 rng(4);
    const auto basis = orthonormalize({random_vector(3, rng), random_vector(3, rng), random_vector(3, rng)});
    const auto b = close_projector_fragment({Projector::from_orthonormal({basis[0]}, 3),
                                             Projector::from_orthonormal({basis[1]}, 3)});
    CHECK(b.lattice.size() == 8);
    CHECK(find_two_valued_valuation(b.lattice, true).count == 3);
    CHECK_THROWS_AS(close_projector_fragment({e0, d}, kDefaultTol, 4), Error);
}

TEST_CASE("denotation and legality on a lattice") {
    const auto l = boolean_algebra(3);
    const std::map<std::string, std::size_t> bind = {{"a", l.index_of("a")}, {"b", l.index_of("b")}};
    CHECK(denote_oml(l, bind, parse("a | b")) == join_oml(l, bind.at("a"), bind.at("b")));
    CHECK(denote_oml(l, bind, parse("!a & a")) == l.bottom());
    CHECK_THROWS_AS(denote_oml(l, bind, parse("z")), Error);

    const auto t = general_quantum_tables(l);
    const auto st = find_state(l);
    REQUIRE(st.state);
    CHECK(lattice_legality(t, *st.state, all_instances(l)).legal());
}

TEST_CASE("legal partial valuations need not extend to states") {
    const auto l = boolean_algebra(3);
    const auto t = general_quantum_tables(l, 1.0);
    const std::map<std::string, std::size_t> bind = {{"a", l.index_of("a")}, {"b", l.index_of("b")},
                                                      {"c", l.index_of("c")}};
    const std::map<std::size_t, double> pins = {{bind.at("a"), 0.4}, {bind.at("b"), 0.4}, {bind.at("c"), 0.4}};
    const auto scope = instances_from_formulas(l, bind, {parse("a | b"), parse("b | c"), parse("a | c")});
    const auto local = legal_valuation_search(t, pins, scope);
    REQUIRE(local.valuation);
    CHECK(lattice_legality(t, *local.valuation, scope).legal());
    CHECK_FALSE(verify_general_state(l, *local.valuation).ok(1e-9));
    const auto global = legal_valuation_search(t, pins);
    CHECK_FALSE(global.valuation);
    CHECK(global.lp.certificate_verified);
}

}
