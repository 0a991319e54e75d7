#include <doctest.h>

#include <random>

#include "qnsem/quantum.hpp"
#include "support.hpp"

using namespace qnsem;
using test_support::max_diff;

namespace {

bool same_set(const IntervalUnion& u, double lo, double hi, double tol = 1e-12) {
    return u.segments().size() == 1 && std::abs(u.lower() - lo) <= tol && std::abs(u.upper() - hi) <= tol;
}

// Join via De Morgan over the alternating-projection meet.
ComplexMatrix oracle_join(const Projector& p, const Projector& q) {
    const auto n = p.dim();
    const auto m = test_support::von_neumann_meet(ortho(p), ortho(q));
    return ComplexMatrix::identity(n) - m;
}

double oracle_born(const DensityOperator& rho, const ComplexMatrix& p) {
    return trace(multiply(rho.matrix(), p)).real();
}

bool region_contains_all(const RegionUnion& image, const IntervalUnion& u) {
    for (const auto& s : u.segments())
        for (double x : {s.lo, 0.5 * (s.lo + s.hi), s.hi}) {
            bool in = false;
            for (const auto& r : image) in = in || r.contains(x) || std::abs(x - r.lo) < 1e-9 || std::abs(x - r.hi) < 1e-9;
            if (!in) return false;
        }
    return true;
}

}  // namespace

TEST_SUITE("quantum") {

TEST_CASE("table cells") {
    const auto m = quantum_nmatrix();
    CHECK(same_set(m.disjunction().apply(Relation::Orthogonal, 0.3, 0.2), 0.5, 0.5));
    CHECK(same_set(m.disjunction().apply(Relation::Orthogonal, 0.7, 0.6), 1.0, 1.0));
    CHECK(same_set(m.disjunction().apply(Relation::NonOrthogonal, 0.3, 0.2), 0.3, 1.0));
    CHECK(same_set(m.conjunction().apply(Relation::Orthogonal, 0.3, 0.2), 0.0, 0.0));
    CHECK(same_set(m.conjunction().apply(Relation::NonOrthogonal, 0.6, 0.4), 0.0, 0.4));
    CHECK(same_set(m.negation().apply(0.3), 0.7, 0.7));
    CHECK(m.is_designated(1.0));
    CHECK_FALSE(m.is_designated(0.99));
    CHECK_THROWS_AS(quantum_nmatrix(0.0), Error);
    CHECK_THROWS_AS(quantum_nmatrix(1.5), Error);
}

TEST_CASE("neg1 and neg2") {
    const auto m1 = quantum_nmatrix(0.9, NegationVariant::neg1());
    CHECK(same_set(m1.negation().apply(0.95), 0.0, 0.05));
    CHECK(same_set(m1.negation().apply(0.8), 0.2, 1.0));

    const auto m2 = quantum_nmatrix(0.8, NegationVariant::neg2());
    const double k = 0.25;
    const auto d = m2.negation().apply(0.9);
    CHECK(std::abs(d.lower() - (0.8 - 0.45 * k)) < 1e-12);
    CHECK(d.upper() < 0.8);
    CHECK_FALSE(m2.is_designated(d.upper(), 0.0));  // half-open at alpha
    const auto n = m2.negation().apply(0.4);
    CHECK(same_set(n, 0.8, 0.8 + 0.2 * k));
    CHECK(m2.is_designated(n.lower()));
    CHECK_THROWS_AS(quantum_nmatrix(0.4, NegationVariant::neg2()), Error);
    CHECK_THROWS_AS(quantum_nmatrix(1.0, NegationVariant::neg2()), Error);
    CHECK(variant_name(variant_from_name("neg2")) == std::string("neg2"));
    CHECK_THROWS_AS(variant_from_name("neg3"), Error);
}

TEST_CASE("rule images cover pointwise outputs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto variant : {NegationVariant::deterministic(), NegationVariant::neg1(), NegationVariant::neg2()}) {
        const auto m = quantum_nmatrix(0.75, variant);
        for (int t = 0; t < 300; ++t) {
            double lo = u(rng), hi = u(rng);
            if (lo > hi) std::swap(lo, hi);
            const Region r = Region::closed(lo, hi);
            const double a = lo + (hi - lo) * u(rng);
            CHECK(region_contains_all(m.negation().image(r), m.negation().apply(a)));
            double lo2 = u(rng), hi2 = u(rng);
            if (lo2 > hi2) std::swap(lo2, hi2);
            const Region r2 = Region::closed(lo2, hi2);
            const double b = lo2 + (hi2 - lo2) * u(rng);
            for (auto rel : {Relation::Orthogonal, Relation::NonOrthogonal}) {
                CHECK(region_contains_all(m.disjunction().image(rel, r, r2), m.disjunction().apply(rel, a, b)));
                CHECK(region_contains_all(m.conjunction().image(rel, r, r2), m.conjunction().apply(rel, a, b)));
            }
        }
    }
}

TEST_CASE("relation classification") {
    const auto e0 = Projector::from_orthonormal({{1, 0, 0}}, 3);
    const auto e1 = Projector::from_orthonormal({{0, 1, 0}}, 3);
    const double s = 1.0 / std::sqrt(2.0);
    const auto d = Projector::from_orthonormal({{s, s, 0}}, 3);
    CHECK(classify_relation(e0, e1) == RelationVerdict::Orthogonal);
    CHECK(classify_relation(e0, d) == RelationVerdict::NonOrthogonal);
    CHECK(classify_relation(Projector::zero(3), Projector::identity(3)) == RelationVerdict::Orthogonal);
    const double eps = 5 * kDefaultTol;
    const double c = std::sqrt(1 - eps * eps);
    const auto near = Projector::from_orthonormal({{eps, c, 0}}, 3);
    CHECK(classify_relation(e0, near) == RelationVerdict::Ambiguous);
}

TEST_CASE("static violation witness") {
    const auto w = static_violation_witness();
    const auto& B = w.bindings;
    const double tol = 1e-12;
    CHECK(std::abs(w.v.at(Formula::atom("P")) - 0.0) < tol);
    CHECK(std::abs(w.v.at(Formula::atom("Q")) - 0.5) < tol);
    CHECK(std::abs(w.v.at(parse("P | Q")) - 1.0) < tol);
    CHECK(std::abs(w.v.at(Formula::atom("P2")) - 0.0) < tol);
    CHECK(std::abs(w.v.at(Formula::atom("Q2")) - 0.5) < tol);
    CHECK(std::abs(w.v.at(parse("P2 | Q2")) - 0.5) < tol);
    CHECK(w.report.violations.size() == 1);
    // independent evaluation of both disjunctions
    CHECK(std::abs(oracle_born(w.state, oracle_join(B.at("P"), B.at("Q"))) - 1.0) < 1e-9);
    CHECK(std::abs(oracle_born(w.state, oracle_join(B.at("P2"), B.at("Q2"))) - 0.5) < 1e-9);
    CHECK(max_diff(B.at("Q").matrix(), B.at("Q2").matrix()) < 1e-12);
}

TEST_CASE("dynamic witness") {
    const auto w = dynamic_witness();
    const auto P = Formula::atom("P"), Q = Formula::atom("Q");
    CHECK(std::abs(w.v.at(P) - 0.5) < 1e-12);
    CHECK(std::abs(w.v_eps.at(P) - 0.5) < 1e-12);
    CHECK(std::abs(w.v.at(Q) - 0.5) < 1e-12);
    CHECK(std::abs(w.v_eps.at(Q) - 0.5) < 1e-12);
    CHECK(std::abs(w.v.at(P & Q) - 0.25) < 1e-12);
    CHECK(std::abs(w.v_eps.at(P & Q) - 0.125) < 1e-12);
    CHECK(std::abs(w.v.at(P | Q) - 0.75) < 1e-12);
    CHECK(std::abs(w.v_eps.at(P | Q) - 0.875) < 1e-12);
    const auto meet = test_support::von_neumann_meet(w.bindings.at("P"), w.bindings.at("Q"));
    CHECK(std::abs(oracle_born(w.psi, meet) - 0.25) < 1e-9);
    CHECK(std::abs(oracle_born(w.psi_eps, meet) - 0.125) < 1e-9);
    const auto m = quantum_nmatrix();
    const auto oracle = projector_oracle(std::make_shared<Denotation>(w.bindings));
    CHECK(is_dynamic_legal(w.v, m, oracle).legal());
    CHECK(is_dynamic_legal(w.v_eps, m, oracle).legal());
    CHECK_THROWS_AS(dynamic_witness(0.25, 0.25, 0.25, 0.25, 0.3), Error);
}

TEST_CASE("random states give legal valuations") {
    std::mt19937_64 rng(5);
    const std::vector<Formula> fs = {parse("!(P & Q) | (P & !Q)"), parse("(P | Q) & !P")};
    const auto m = quantum_nmatrix();
    for (std::size_t dim = 2; dim <= 5; ++dim)
        for (int t = 0; t < 60; ++t) {
            Bindings b = {{"P", random_projector(dim, rng)}, {"Q", random_projector(dim, rng)}};
            auto denote = std::make_shared<Denotation>(b);
            const auto v = evaluate_state(random_state(dim, rng), *denote, fs);
            const auto r = is_dynamic_legal(v, m, projector_oracle(denote));
            CHECK(r.legal());
            CHECK(order_preservation_check(v, *denote).ok());
        }
}

TEST_CASE("order preservation on nested projectors") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 50; ++t) {
        const auto u = random_vector(4, rng);
        const auto w = random_vector(4, rng);
        const auto basis = orthonormalize({u, w});
        const Bindings b = {{"P", Projector::from_orthonormal({basis[0]}, 4)},
                            {"Q", Projector::from_orthonormal(basis, 4)}};
        Denotation denote(b);
        const auto v = evaluate_state(random_state(4, rng), denote, {parse("P | !Q")});
        const auto r = order_preservation_check(v, denote);
        CHECK(r.ok());
        CHECK(r.ordered_pairs > 0);
        CHECK(v.at(Formula::atom("P")) <= v.at(Formula::atom("Q")) + 1e-12);
    }
}

TEST_CASE("order check flags a tampered valuation") {
    const auto e0 = Projector::from_orthonormal({{1, 0}}, 2);
    Denotation denote({{"P", e0}, {"Q", Projector::identity(2)}});
    auto v = evaluate_state(DensityOperator::maximally_mixed(2), denote, {parse("P | Q")});
    v.set(Formula::atom("P"), 0.9);
    v.set(Formula::atom("Q"), 0.4);
    CHECK_FALSE(order_preservation_check(v, denote).ok());
}

TEST_CASE("adequacy of the quantum tables") {
    const auto r = adequacy_check(quantum_nmatrix());
    CHECK_FALSE(r.adequate());
    CHECK(std::any_of(r.violations.begin(), r.violations.end(),
                      [](const AdequacyViolation& v) { return v.connective == "or"; }));
    const auto restricted = adequacy_check(adequate_restricted_tables(0.9));
    for (const auto& v : restricted.violations) CHECK(v.connective == "or");
    const auto c = adequate_restricted_tables(0.9).conjunction().apply(Relation::NonOrthogonal, 0.95, 0.92);
    CHECK(same_set(c, 0.9, 0.92));
}

TEST_CASE("double negation chain") {
    const auto r = double_negation_chain(0.9, 0.95, 0.02);
    CHECK(r.chain_holds);
    CHECK(r.second_above_start);
    CHECK(same_set(r.first, 0.0, 0.05));
    CHECK(same_set(r.second, 0.98, 1.0));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 1000; ++t) {
        const double alpha = 0.5 + 0.5 * u(rng) + 1e-9;
        const double a = std::min(1.0, alpha + (1.0 - alpha) * u(rng));
        const double b = (1.0 - a) * u(rng);
        const auto s = double_negation_chain(std::min(alpha, 1.0), a, b);
        CHECK(s.chain_holds);
        CHECK(s.second_above_start);
    }
    CHECK_THROWS_AS(double_negation_chain(0.9, 0.8, 0.1), Error);
    CHECK_THROWS_AS(double_negation_chain(0.9, 0.95, 0.1), Error);
    CHECK_THROWS_AS(double_negation_chain(0.4, 0.95, 0.01), Error);
}

TEST_CASE("denotation follows the lattice") {
    std::mt19937_64 rng(21);
    const Bindings b = {{"P", random_projector(3, rng)}, {"Q", random_projector(3, rng)}};
    Denotation d(b);
    CHECK(max_diff(d(parse("!P")).matrix(), ortho(b.at("P")).matrix()) < 1e-12);
    CHECK(max_diff(d(parse("P | Q")).matrix(), oracle_join(b.at("P"), b.at("Q"))) < 1e-6);
    CHECK_THROWS_AS(d(parse("R")), Error);
    CHECK_THROWS_AS(Denotation({{"P", Projector::zero(2)}, {"Q", Projector::zero(3)}}), Error);
}

}
