#include <doctest.h>

#include <random>

#include "qnsem/formula.hpp"

using namespace qnsem;

namespace {

Formula gen(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> op(0, depth > 0 ? 3 : 0);
    std::uniform_int_distribution<int> atom(0, 5);
    static const char* names[] = {"P", "Q", "R", "x1", "long_name", "P2"};
    switch (op(rng)) {
        case 1: return !gen(rng, depth - 1);
        case 2: return gen(rng, depth - 1) & gen(rng, depth - 1);
        case 3: return gen(rng, depth - 1) | gen(rng, depth - 1);
        default: return Formula::atom(names[atom(rng)]);
    }
}

}  // namespace

TEST_SUITE("formula") {

TEST_CASE("precedence: not binds tighter than and, and tighter than or") {
    const auto f = parse("P | Q & !R");
    REQUIRE(f.kind() == Connective::Or);
    CHECK(f.left() == Formula::atom("P"));
    CHECK(f.right() == (Formula::atom("Q") & !Formula::atom("R")));
}

TEST_CASE("binary connectives associate to the left") {
    CHECK(parse("a & b & c") == ((Formula::atom("a") & Formula::atom("b")) & Formula::atom("c")));
    CHECK(parse("a | b | c") == ((Formula::atom("a") | Formula::atom("b")) | Formula::atom("c")));
}

TEST_CASE("render uses the fewest parentheses") {
    CHECK(render(parse("((P))")) == "P");
    CHECK(render(parse("(P | Q) & R")) == "(P | Q) & R");
    CHECK(render(parse("P | (Q & R)")) == "P | Q & R");
    CHECK(render(parse("a & (b & c)")) == "a & (b & c)");
    CHECK(render(parse("!!P")) == "!!P");
    CHECK(render(parse("!(P & Q)")) == "!(P & Q)");
}

TEST_CASE("unicode aliases") {
    CHECK(parse("¬P ∧ Q ∨ R") == parse("!P & Q | R"));
}

TEST_CASE("parse errors carry an offset and the expected tokens") {
    try {
        parse("P & ");
        FAIL("no error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
        CHECK(e.expected().count("atom") == 1);
    }
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("(P"), ParseError);
    CHECK_THROWS_AS(parse("P Q"), ParseError);
    CHECK_THROWS_AS(parse("P $ Q"), ParseError);
    CHECK_THROWS_AS(parse(")"), ParseError);
}

TEST_CASE("identifiers") {
    CHECK(is_identifier("P2"));
    CHECK(is_identifier("_x"));
    CHECK_FALSE(is_identifier("2P"));
    CHECK_FALSE(is_identifier(""));
    CHECK_THROWS_AS(Formula::atom("a b"), Error);
}

TEST_CASE("round trip on seeded random formulas") {
    std::mt19937_64 rng(0);
    for (int i = 0; i < 2000; ++i) {
        const auto f = gen(rng, 4);
        const auto text = render(f);
        CHECK(parse(text) == f);
    }
}

TEST_CASE("subformula closure is deduplicated with children first") {
    const auto c = subformula_closure({parse("P & Q"), parse("!(P & Q)"), parse("P")});
    REQUIRE(c.size() == 4);
    for (std::size_t i = 0; i < c.size(); ++i)
        for (const auto& k : c[i].children()) {
            auto pos = std::find(c.begin(), c.end(), k);
            REQUIRE(pos != c.end());
            CHECK(static_cast<std::size_t>(pos - c.begin()) < i);
        }
    CHECK(atoms_of({parse("Q | P & Q")}) == std::vector<std::string>{"P", "Q"});
}

TEST_CASE("syntactic identity") {
    CHECK_FALSE(parse("P & Q") == parse("Q & P"));
    CHECK(parse("P & Q").depth() == 1);
    CHECK(parse("!(P & Q)").depth() == 2);
    CHECK(Formula::atom("P").depth() == 0);
}

TEST_CASE("tree dump") {
    CHECK(render_tree(parse("!P")) == "Not\n  Atom(P)\n");
}

}
