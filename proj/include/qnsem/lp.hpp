#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace qnsem {

/// One linear row over the problem variables. Coefficients are read as exact
/// binary rationals on the exact path.
struct LinearConstraint {
    enum class Sense { Eq, Le };
    std::vector<std::pair<std::size_t, double>> terms;
    Sense sense = Sense::Eq;
    double rhs = 0.0;
    std::string label;
};

/// Feasibility of the constraints with every variable boxed in [0,1].
struct LinearProblem {
    std::vector<std::string> names;
    std::vector<LinearConstraint> constraints;

    std::size_t add_variable(std::string name);
    void add(LinearConstraint c) { constraints.push_back(std::move(c)); }
};

struct CertificateTerm {
    std::string constraint;
    std::string multiplier;  // exact rational text on the exact path
    double value = 0.0;
};

/// Infeasible results carry a Farkas certificate: multipliers y on the
/// equalities (any sign) and z >= 0 on the inequalities, including the box
/// bounds, such that sum y a + sum z g = 0 and sum y b + sum z h < 0.
struct FeasibilityResult {
    bool feasible = false;
    bool exact = false;
    std::vector<double> point;
    std::vector<std::string> exact_point;  // rationals, exact path only
    double residual = 0.0;                 // max constraint violation of point
    std::vector<CertificateTerm> certificate;
    bool certificate_verified = false;
    std::size_t distinct_rows = 0;
};

/// Exact rational elimination and Bland-rule phase-1 simplex when exact is
/// set, the same algorithm in doubles with tolerance tol otherwise.
FeasibilityResult solve_feasibility(const LinearProblem& problem, bool exact, double tol = 1e-9);

/// Largest violation of any constraint or box bound at x.
double max_violation(const LinearProblem& problem, const std::vector<double>& x);

}  // namespace qnsem
