#include <doctest.h>

#include <cmath>

#include "qnsem/hilbert.hpp"
#include "support.hpp"

using namespace qnsem;
using test_support::max_diff;

namespace {

Projector ray(const CVector& v) { return projector_from_span({v}, v.size()); }

}  // namespace

TEST_SUITE("hilbert") {

TEST_CASE("projector validation reports residuals") {
    CHECK_NOTHROW(Projector::from_matrix(ComplexMatrix::diagonal(std::vector<double>{1, 0, 1})));
    CHECK_THROWS_AS(Projector::from_matrix(ComplexMatrix::diagonal(std::vector<double>{0.5, 0})), Error);
    CHECK_THROWS_AS(Projector::from_matrix(ComplexMatrix(2, 2, {0.0, 1.0, 0.0, 0.0})), Error);
    CHECK_THROWS_AS(Projector::from_matrix(ComplexMatrix(2, 3)), Error);
}

TEST_CASE("density validation") {
    CHECK_NOTHROW(DensityOperator::maximally_mixed(3));
    CHECK_THROWS_AS(DensityOperator::from_matrix(ComplexMatrix::diagonal(std::vector<double>{1.5, -0.5})), Error);
    CHECK_THROWS_AS(DensityOperator::from_matrix(ComplexMatrix::diagonal(std::vector<double>{0.5, 0.4})), Error);
}

TEST_CASE("span, rank and orthocomplement") {
    const auto p = projector_from_span({{1.0, 0.0, 0.0}, {1.0, 1.0, 0.0}, {2.0, 1.0, 0.0}}, 3);
    CHECK(p.rank() == 2);
    CHECK(max_diff(p.matrix(), ComplexMatrix::diagonal(std::vector<double>{1, 1, 0})) < 1e-12);
    const auto c = ortho(p);
    CHECK(c.rank() == 1);
    CHECK(max_diff(ortho(c).matrix(), p.matrix()) < 1e-12);
    CHECK(projector_from_span({}, 2).rank() == 0);
}

TEST_CASE("meet against a constructed intersection") {
    std::mt19937_64 rng(11);
    for (std::size_t dim = 4; dim <= 6; ++dim) {
        for (int t = 0; t < 20; ++t) {
            const auto u = random_vector(dim, rng), v = random_vector(dim, rng), w = random_vector(dim, rng);
            const auto p = projector_from_span({u, w}, dim);
            const auto q = projector_from_span({v, w}, dim);
            CHECK(max_diff(meet(p, q).matrix(), ray(w).matrix()) < 1e-8);
            CHECK(max_diff(join(p, q).matrix(), projector_from_span({u, v, w}, dim).matrix()) < 1e-8);
        }
    }
}

TEST_CASE("meet agrees with alternating projections") {
    std::mt19937_64 rng(12);
    const std::size_t dim = 4;
    for (int t = 0; t < 10; ++t) {
        const auto w = random_vector(dim, rng);
        const auto p = projector_from_span({w, random_vector(dim, rng)}, dim);
        const auto q = projector_from_span({w, random_vector(dim, rng), random_vector(dim, rng)}, dim);
        CHECK(max_diff(meet(p, q).matrix(), test_support::von_neumann_meet(p, q)) < 1e-6);
    }
}

TEST_CASE("order and orthogonality") {
    const auto a = ray({1.0, 0.0, 0.0});
    const auto ab = projector_from_span({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}, 3);
    const auto c = ray({0.0, 0.0, 1.0});
    CHECK(leq(a, ab));
    CHECK_FALSE(leq(ab, a));
    CHECK(is_orthogonal(a, c));
    CHECK(is_orthogonal(ab, c));
    CHECK_FALSE(is_orthogonal(a, ab));
    CHECK(leq(Projector::zero(3), a));
    CHECK(leq(a, Projector::identity(3)));
    CHECK(approx_equal(meet(a, c), Projector::zero(3)));
}

TEST_CASE("born rule") {
    const CVector psi = {1.0, 1.0, 0.0};
    const auto rho = DensityOperator::pure(psi);
    CHECK(born(rho, ray({1.0, 0.0, 0.0})) == doctest::Approx(0.5));
    CHECK(born(rho, Projector::identity(3)) == doctest::Approx(1.0));
    CHECK(born(rho, Projector::zero(3)) == 0.0);
    CHECK(born(DensityOperator::maximally_mixed(4), projector_from_span({{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}}, 4)) ==
          doctest::Approx(0.5));
    CHECK_THROWS_AS(born(rho, Projector::identity(2)), Error);
}

TEST_CASE("state axioms on a resolution of the identity") {
    std::mt19937_64 rng(13);
    const auto rho = random_state(3, rng);
    const std::vector<Projector> family = {ray({1.0, 0.0, 0.0}), ray({0.0, 1.0, 1.0}), ray({0.0, 1.0, -1.0})};
    CHECK(verify_state_axioms(rho, family).ok(1e-10));
    CHECK_THROWS_AS(verify_state_axioms(rho, {ray({1.0, 0.0, 0.0}), ray({1.0, 1.0, 0.0})}), Error);
}

TEST_CASE("state reconstruction round trip") {
    std::mt19937_64 rng(14);
    // informationally complete family in dimension 3: 9 random rank-one projectors
    std::vector<Projector> family;
    for (int i = 0; i < 9; ++i) family.push_back(ray(random_vector(3, rng)));
    for (int t = 0; t < 5; ++t) {
        const auto rho0 = random_state(3, rng);
        std::vector<double> values;
        for (const auto& p : family) values.push_back(born(rho0, p));
        const auto r = state_reconstruction(family, values);
        CHECK(max_diff(r.rho.matrix(), rho0.matrix()) < 1e-8);
        CHECK(r.residual < 1e-9);
    }
    CHECK_THROWS_AS(state_reconstruction({ray({1.0, 0.0})}, {0.5}), Error);
}

TEST_CASE("random helpers produce valid objects") {
    std::mt19937_64 rng(15);
    for (std::size_t dim = 1; dim <= 5; ++dim) {
        const auto p = random_projector(dim, rng);
        CHECK(projector_residuals(p.matrix()).idempotence < 1e-10);
        const auto rho = random_state(dim, rng);
        CHECK(density_residuals(rho.matrix()).trace_error < 1e-12);
        CHECK(density_residuals(rho.matrix()).min_eigenvalue > -1e-12);
        CHECK(random_projector_of_rank(dim, dim, rng).rank() == dim);
    }
}

}
