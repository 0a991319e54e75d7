#include <doctest.h>

#include <map>
#include <random>

#include "qnsem/error.hpp"
#include "qnsem/lp.hpp"

using namespace qnsem;

namespace {

double rational(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return std::stod(s);
    return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
}

// Rebuilds sum y a + sum z g and sum y b + sum z h from the labelled terms.
bool certificate_checks(const LinearProblem& p, const FeasibilityResult& r, bool use_text) {
    std::vector<double> combo(p.names.size(), 0.0);
    double rhs = 0.0;
    for (const auto& t : r.certificate) {
        const double m = use_text ? rational(t.multiplier) : t.value;
        bool found = false;
        for (const auto& c : p.constraints) {
            if (c.label != t.constraint) continue;
            if (c.sense == LinearConstraint::Sense::Le && m < 0) return false;
            for (const auto& [v, a] : c.terms) combo[v] += m * a;
            rhs += m * c.rhs;
            found = true;
        }
        for (std::size_t v = 0; v < p.names.size() && !found; ++v) {
            if (t.constraint == p.names[v] + " <= 1") {
                combo[v] += m;
                rhs += m;
                found = true;
            } else if (t.constraint == p.names[v] + " >= 0") {
                combo[v] -= m;
                found = true;
            }
            if (found && m < 0) return false;
        }
        if (!found) return false;
    }
    for (double c : combo)
        if (std::abs(c) > 1e-9) return false;
    return rhs < -1e-12;
}

LinearConstraint row(std::vector<std::pair<std::size_t, double>> terms, LinearConstraint::Sense s, double rhs,
                     std::string label) {
    return {std::move(terms), s, rhs, std::move(label)};
}

}  // namespace

TEST_SUITE("lp") {

TEST_CASE("feasible system") {
    LinearProblem p;
    const auto x = p.add_variable("x"), y = p.add_variable("y");
    p.add(row({{x, 1}, {y, 1}}, LinearConstraint::Sense::Eq, 1, "sum"));
    p.add(row({{x, 1}, {y, -1}}, LinearConstraint::Sense::Eq, 0.5, "diff"));
    for (bool exact : {true, false}) {
        const auto r = solve_feasibility(p, exact);
        REQUIRE(r.feasible);
        CHECK(r.exact == exact);
        CHECK(std::abs(r.point[x] - 0.75) < 1e-9);
        CHECK(std::abs(r.point[y] - 0.25) < 1e-9);
        CHECK(max_violation(p, r.point) < 1e-9);
    }
    CHECK(solve_feasibility(p, true).exact_point == std::vector<std::string>{"3/4", "1/4"});
}

TEST_CASE("box bounds make a system infeasible") {
    LinearProblem p;
    const auto x = p.add_variable("x"), y = p.add_variable("y");
    p.add(row({{x, 1}, {y, 1}}, LinearConstraint::Sense::Eq, 3, "too big"));
    for (bool exact : {true, false}) {
        const auto r = solve_feasibility(p, exact);
        CHECK_FALSE(r.feasible);
        CHECK(r.certificate_verified);
        CHECK(certificate_checks(p, r, false));
    }
    CHECK(certificate_checks(p, solve_feasibility(p, true), true));
}

TEST_CASE("inequalities and redundant rows") {
    LinearProblem p;
    const auto a = p.add_variable("a"), b = p.add_variable("b"), c = p.add_variable("c");
    p.add(row({{a, 1}, {b, 1}, {c, 1}}, LinearConstraint::Sense::Eq, 1, "r1"));
    p.add(row({{a, 2}, {b, 2}, {c, 2}}, LinearConstraint::Sense::Eq, 2, "r2"));
    p.add(row({{a, 1}}, LinearConstraint::Sense::Le, 0.2, "cap a"));
    p.add(row({{b, -1}}, LinearConstraint::Sense::Le, -0.7, "b floor"));
    p.add(row({{a, 1}, {b, 1}, {c, 1}}, LinearConstraint::Sense::Eq, 1, "r1 again"));
    const auto r = solve_feasibility(p, true);
    REQUIRE(r.feasible);
    CHECK(r.residual == 0.0);
    CHECK(r.distinct_rows == 4);  // exact repeats only; scaled rows stay

    p.add(row({{c, -1}}, LinearConstraint::Sense::Le, -0.4, "c floor"));
    const auto bad = solve_feasibility(p, true);
    CHECK_FALSE(bad.feasible);
    CHECK(bad.certificate_verified);
    CHECK(certificate_checks(p, bad, true));
}

TEST_CASE("random systems agree between exact and floating paths") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> rhs(-2, 4);
    for (int t = 0; t < 200; ++t) {
        LinearProblem p;
        for (int v = 0; v < 4; ++v) p.add_variable("x" + std::to_string(v));
        for (int k = 0; k < 3; ++k) {
            LinearConstraint c;
            for (std::size_t v = 0; v < 4; ++v) c.terms.push_back({v, double(coef(rng))});
            c.sense = k == 0 ? LinearConstraint::Sense::Eq : LinearConstraint::Sense::Le;
            c.rhs = rhs(rng) / 2.0;
            c.label = "c" + std::to_string(k);
            p.add(c);
        }
        const auto e = solve_feasibility(p, true);
        const auto f = solve_feasibility(p, false);
        CHECK(e.feasible == f.feasible);
        if (e.feasible) {
            CHECK(max_violation(p, e.point) < 1e-12);
        } else {
            CHECK(certificate_checks(p, e, true));
        }
    }
}

TEST_CASE("unknown variable is rejected") {
    LinearProblem p;
    p.add_variable("x");
    p.add(row({{3, 1}}, LinearConstraint::Sense::Eq, 1, "bad"));
    CHECK_THROWS_AS(solve_feasibility(p, true), Error);
}

}
