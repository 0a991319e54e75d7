#pragma once

#include <map>
#include <string>
#include <vector>

#include "qnsem/hilbert.hpp"
#include "qnsem/nmatrix.hpp"

namespace qnsem {

struct NegationVariant {
    enum class Kind { Deterministic, Neg1, Neg2 };
    Kind kind = Kind::Deterministic;

    static NegationVariant deterministic() { return {Kind::Deterministic}; }
    static NegationVariant neg1() { return {Kind::Neg1}; }
    /// Uses the matrix threshold alpha, which must lie in (1/2, 1).
    static NegationVariant neg2() { return {Kind::Neg2}; }
};
const char* variant_name(NegationVariant v);
NegationVariant variant_from_name(const std::string& name);  // deterministic | neg1 | neg2

/// Upper end used for the half-open neg2 interval [., alpha).
inline constexpr double kOpenEndGap = 1e-12;

/// The quantum matrix on [0,1] with D = [alpha, 1]:
///   or,  orthogonal     {min(a+b, 1)}
///   or,  non-orthogonal [max(a,b), 1]
///   and, orthogonal     {0}
///   and, non-orthogonal [0, min(a,b)]
/// and the chosen negation.
IntervalNMatrix quantum_nmatrix(double alpha = 1.0, NegationVariant negation = NegationVariant::deterministic());

/// Adequate case-split tables: and gives [alpha, min(a,b)] on two designated
/// inputs and [0, min(a,b)] otherwise; or keeps [max(a,b), 1]. The relation
/// flag is ignored. Negation is neg1.
IntervalNMatrix adequate_restricted_tables(double alpha);

using Bindings = std::map<std::string, Projector>;

/// Projector denoted by a formula: atoms by binding, connectives by the
/// lattice operations of L(H). Caches compound results.
class Denotation {
public:
    explicit Denotation(Bindings bindings, double tol = kDefaultTol);
    const Projector& operator()(const Formula& f);
    const Bindings& bindings() const { return bindings_; }
    double tol() const { return tol_; }

private:
    Bindings bindings_;
    double tol_;
    std::size_t dim_ = 0;
    std::map<std::string, Projector> cache_;
};

/// Orthogonal when ||pq|| <= tol or either side is the zero projector,
/// ambiguous up to 10 tol, non-orthogonal beyond.
RelationVerdict classify_relation(const Projector& p, const Projector& q, double tol = kDefaultTol);

/// Relation oracle backed by a denotation; shares its cache.
RelationOracle projector_oracle(std::shared_ptr<Denotation> denote);

/// v(phi) = tr(rho denote(phi)) on the subformula closure.
RealValuation evaluate_state(const DensityOperator& rho, Denotation& denote, const std::vector<Formula>& formulas);
RealValuation evaluate_state(const DensityOperator& rho, const Bindings& bindings,
                             const std::vector<Formula>& formulas, double tol = kDefaultTol);

struct DynamicWitness {
    double alpha, beta, gamma, delta, epsilon;
    DensityOperator psi;
    DensityOperator psi_eps;
    Bindings bindings;  // P, Q
    std::vector<Formula> formulas;  // P & Q, P | Q
    RealValuation v;
    RealValuation v_eps;
};

/// Four-dimensional pair of states agreeing on P and Q and disagreeing on
/// P & Q and on P | Q. Requires 0 < epsilon < every coefficient.
DynamicWitness dynamic_witness(double alpha = 0.25, double beta = 0.25, double gamma = 0.25, double delta = 0.25,
                               double epsilon = 0.125);

struct StaticWitness {
    DensityOperator state;
    Bindings bindings;  // P, Q, P2, Q2 with Q2 = Q
    std::vector<Formula> formulas;  // P | Q, P2 | Q2
    RealValuation v;
    StaticReport report;
};

/// Three-dimensional configuration where equal inputs give different
/// disjunction values.
StaticWitness static_violation_witness();

struct OrderViolation {
    std::string lower;
    std::string upper;
    double lower_value;
    double upper_value;
    std::string kind;  // "order" or "orthogonal sum"
};

struct OrderReport {
    std::vector<OrderViolation> violations;
    std::size_t ordered_pairs = 0;
    std::size_t orthogonal_pairs = 0;
    bool ok() const { return violations.empty(); }
};

/// For every pair in the domain: p <= q implies v(p) <= v(q) + tol, and
/// p orthogonal to q implies v(p) + v(q) <= 1 + tol.
OrderReport order_preservation_check(const RealValuation& v, Denotation& denote, double tol = kDefaultTol);

struct DoubleNegationReport {
    double alpha, a, b;
    std::vector<double> chain;  // 0, b, 1-a, alpha, a, 1-b, 1
    bool chain_holds = false;
    IntervalUnion first = IntervalUnion::point(0.0);   // neg1(a)
    IntervalUnion second = IntervalUnion::point(0.0);  // neg1(b)
    bool second_above_start = false;                  // inf neg1(b) >= a
};

/// Requires alpha > 1/2, a in [alpha, 1] and b in [0, 1-a].
DoubleNegationReport double_negation_chain(double alpha, double a, double b);

}  // namespace qnsem
