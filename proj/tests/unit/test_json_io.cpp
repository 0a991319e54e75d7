#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "qnsem/json_io.hpp"
#include "support.hpp"

using namespace qnsem;
using test_support::data;

TEST_SUITE("json_io") {

TEST_CASE("matrix round trip") {
    std::mt19937_64 rng(1);
    const auto m = test_support::random_matrix(3, 2, rng);
    const auto back = matrix_from_json(Json::parse(to_json(m).dump()));
    CHECK(test_support::max_diff(m, back) == 0.0);
}

TEST_CASE("projector and density round trip") {
    std::mt19937_64 rng(2);
    const auto p = random_projector(3, rng);
    CHECK(approx_equal(projector_from_json(to_json(p)), p, 1e-12));
    const auto rho = random_state(3, rng);
    CHECK(test_support::max_diff(density_from_json(to_json(rho)).matrix(), rho.matrix()) < 1e-12);
    CHECK_THROWS_AS(density_from_json(to_json(p)), Error);  // wrong kind
}

TEST_CASE("malformed matrices") {
    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows":2,"cols":2,"entries":[[1,0]]})")), Error);
    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows":0,"cols":2,"entries":[]})")), Error);
    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"cols":1,"entries":[[1,0]]})")), Error);
    CHECK_THROWS_AS(projector_from_json(Json::parse(R"({"rows":1,"cols":1,"entries":[[0.5,0]]})")), Error);
}

TEST_CASE("bindings fixture") {
    const auto b = bindings_from_json(load_json_file(data("static_bindings.json")));
    CHECK(b.size() == 4);
    CHECK(b.count("P2") == 1);
    CHECK(b.at("P").dim() == 3);
}

TEST_CASE("N-matrix round trip") {
    for (const auto& m : {classical_matrix(), three_valued_matrix(), two_valued_matrix()})
        CHECK(finite_nmatrix_from_json(Json::parse(to_json(m).dump())) == m);
    CHECK_THROWS_AS(finite_nmatrix_from_json(Json::parse(R"({"values":["t"],"designated":["t"],"tables":{}})")), Error);
    CHECK_THROWS_AS(finite_nmatrix_from_json(Json::parse(
                        R"({"values":["t","F"],"designated":["t"],"tables":{"xor":{"t,t":["t"]}}})")),
                    Error);
}

TEST_CASE("lattice round trip") {
    for (const auto& l : {boolean_algebra(3), mo2()}) {
        const auto back = lattice_from_json(Json::parse(to_json(l).dump()));
        CHECK(back.names() == l.names());
        for (std::size_t x = 0; x < l.size(); ++x)
            for (std::size_t y = 0; y < l.size(); ++y) CHECK(back.leq(x, y) == l.leq(x, y));
    }
}

TEST_CASE("threshold maps") {
    const auto f = threshold_map_from_json(load_json_file(data("three_valued_map.json")));
    CHECK(f(0.0) == "F");
    CHECK(f(0.5) == "T");
    CHECK(f(1.0) == "t");
    CHECK_THROWS_AS(threshold_map_from_json(Json::parse(R"({"pieces":[{"lo":0,"hi":0.5,"label":"F"}]})")), Error);
}

TEST_CASE("formula files") {
    CHECK(load_formulas(data("gamma_pq.txt")) == std::vector<Formula>{parse("p & q")});
    CHECK(load_formulas(data("empty.txt")).empty());
    const std::string path = "qnsem_json_io_formulas.json";
    {
        std::ofstream out(path);
        out << R"(["P | Q", "!P"])";
    }
    CHECK(load_formulas(path).size() == 2);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_json_file(data("does_not_exist.json")), Error);
}

}
