#include <doctest.h>

#include "qnsem/json_io.hpp"
#include "qnsem/ks.hpp"
#include "support.hpp"

using namespace qnsem;
using test_support::data;

namespace {

// Every 0/1 assignment with exactly one 1 per context and no two orthogonal ones.
std::size_t brute_force_count(const VectorContextFamily& f) {
    std::size_t count = 0;
    const auto n = f.size();
    Assignment01 v(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        for (std::size_t i = 0; i < n; ++i) v[i] = int((mask >> i) & 1);
        count += satisfies_contexts(f, v);
    }
    return count;
}

}  // namespace

TEST_SUITE("ks") {

TEST_CASE("the eighteen-vector family") {
    const auto f = cabello_family();
    CHECK(f.dim() == 4);
    CHECK(f.size() == 18);
    CHECK(f.contexts().size() == 9);
    CHECK(verify_contexts(f).failures.empty());
    std::vector<int> uses(f.size(), 0);
    for (const auto& c : f.contexts())
        for (auto i : c) ++uses[i];
    for (int u : uses) CHECK(u == 2);  // the parity argument
    const auto r = search_classical_valuation(f);
    CHECK_FALSE(r.assignment);
    CHECK(r.count == 0);
    CHECK(brute_force_count(f) == 0);
}

TEST_CASE("the fixture matches the built-in family") {
    const auto a = family_from_json(load_json_file(data("ks_cabello18.json")));
    const auto b = cabello_family();
    REQUIRE(a.size() == b.size());
    CHECK(a.ids() == b.ids());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(std::abs(inner(a.vector(i), b.vector(i))) - 1.0) < 1e-12);
    CHECK_FALSE(search_classical_valuation(a).assignment);
}

TEST_CASE("a single context") {
    const auto f = family_from_json(load_json_file(data("ks_single_context.json")));
    const auto r = search_classical_valuation(f);
    REQUIRE(r.assignment);
    CHECK(satisfies_contexts(f, *r.assignment));
    CHECK(count_solutions(f, 1000).count == 3);
    CHECK(brute_force_count(f) == 3);
    const auto capped = count_solutions(f, 2);
    CHECK(capped.count == 2);
    CHECK(capped.capped);
    CHECK_THROWS_AS(count_solutions(f, 0), Error);
}

TEST_CASE("counts agree with brute force on dropped contexts") {
    const auto full = cabello_family();
    for (std::size_t drop = 0; drop < 9; ++drop) {
        std::map<std::string, CVector> vectors;
        for (std::size_t i = 0; i < full.size(); ++i) vectors[full.ids()[i]] = full.vector(i);
        std::vector<std::vector<std::string>> contexts;
        for (std::size_t c = 0; c < 9; ++c) {
            if (c == drop) continue;
            contexts.emplace_back();
            for (auto i : full.contexts()[c]) contexts.back().push_back(full.ids()[i]);
        }
        const VectorContextFamily f(4, vectors, contexts);
        CHECK(count_solutions(f, 1u << 20).count == brute_force_count(f));
    }
}

TEST_CASE("context validation") {
    CHECK_THROWS_AS(VectorContextFamily(2, {{"x", {1, 0, 0}}}, {}), Error);
    CHECK_THROWS_AS(VectorContextFamily(2, {{"x", {0, 0}}}, {}), Error);
    CHECK_THROWS_AS(VectorContextFamily(2, {{"x", {1, 0}}}, {{"x", "y"}}), Error);
    CHECK_THROWS_AS(VectorContextFamily(2, {{"x", {1, 0}}}, {{"x", "x"}}), Error);
    const VectorContextFamily bad(2, {{"x", {1, 0}}, {"y", {1, 1}}}, {{"x", "y"}});
    CHECK_FALSE(verify_contexts(bad).failures.empty());
}

TEST_CASE("S3 conditions on a projector fragment") {
    const auto x = Projector::from_orthonormal({{1, 0, 0}}, 3);
    const auto yz = ortho(x);
    const std::vector<Projector> frag = {Projector::zero(3), x, yz, Projector::identity(3)};
    const std::vector<std::vector<std::size_t>> ctx = {{1, 2}};
    auto r = s3_check(frag, {0, 1, 0, 1}, ctx);
    CHECK(r.s3);
    CHECK(r.ns3);
    CHECK(r.rs3);
    r = s3_check(frag, {0, 0, 1, 1}, ctx);
    CHECK(r.s3);
    CHECK_FALSE(r.ns3);
    r = s3_check(frag, {0, 1, 1, 1}, ctx);
    CHECK_FALSE(r.s3);
    CHECK_THROWS_AS(s3_check(frag, {0, 1}, ctx), Error);
    CHECK_THROWS_AS(s3_check({x}, {1}, {}), Error);
}

}
