#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qnsem/formula.hpp"
#include "qnsem/valueset.hpp"

namespace qnsem {

// ---------------------------------------------------------------------------
// Valuation domains and valuations

/// A subformula-closed set of formulas in evaluation order: atoms sorted by
/// name first, then compound formulas with children before parents.
class Domain {
public:
    static std::shared_ptr<const Domain> closure_of(const std::vector<Formula>& formulas);

    const std::vector<Formula>& formulas() const { return formulas_; }
    std::size_t size() const { return formulas_.size(); }
    std::optional<std::size_t> find(const Formula& f) const;
    std::size_t at(const Formula& f) const;  // throws if absent
    /// Domain indices of the operands of formula i (empty for atoms).
    const std::vector<std::size_t>& operands(std::size_t i) const { return operands_[i]; }
    std::size_t atom_count() const { return atom_count_; }
    const std::string& text(std::size_t i) const { return texts_[i]; }

private:
    std::vector<Formula> formulas_;
    std::vector<std::string> texts_;
    std::vector<std::vector<std::size_t>> operands_;
    std::unordered_map<std::string, std::size_t> index_;
    std::size_t atom_count_ = 0;
};

/// Assignment of a value to every formula of a domain.
template <class T>
class Valuation {
public:
    Valuation() = default;
    explicit Valuation(std::shared_ptr<const Domain> domain, T fill = T{})
        : domain_(std::move(domain)), values_(domain_->size(), fill) {}

    const Domain& domain() const { return *domain_; }
    const std::shared_ptr<const Domain>& domain_ptr() const { return domain_; }
    const std::vector<T>& values() const { return values_; }

    const T& operator[](std::size_t i) const { return values_[i]; }
    T& operator[](std::size_t i) { return values_[i]; }
    const T& at(const Formula& f) const { return values_[domain_->at(f)]; }
    void set(const Formula& f, T v) { values_[domain_->at(f)] = std::move(v); }

private:
    std::shared_ptr<const Domain> domain_;
    std::vector<T> values_;
};

using FiniteValuation = Valuation<std::size_t>;  // value indices into the matrix
using RealValuation = Valuation<double>;

// ---------------------------------------------------------------------------
// Finite N-matrices

enum class TableOp { Not, And, Or, Implies };
std::size_t arity(TableOp op);
const char* op_name(TableOp op);  // "not", "and", "or", "implies"
std::optional<TableOp> op_from_name(const std::string& name);
TableOp table_op(Connective c);   // throws for atoms

/// Labelled table input -> set of labels.
using LabelTable = std::map<std::vector<std::string>, std::set<std::string>>;

class FiniteNMatrix {
public:
    using Cell = std::vector<std::size_t>;  // sorted value indices, non-empty

    /// Validates: designated non-empty and proper, every table total with
    /// non-empty cells over declared labels.
    FiniteNMatrix(std::vector<std::string> values, std::set<std::string> designated,
                  std::map<TableOp, LabelTable> tables);

    const std::vector<std::string>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    const std::string& label(std::size_t i) const { return values_[i]; }
    std::size_t index_of(const std::string& label) const;
    bool has_label(const std::string& label) const { return index_.count(label) != 0; }
    bool is_designated(std::size_t i) const { return designated_[i]; }
    std::set<std::string> designated_labels() const;
    bool has(TableOp op) const { return cells_.count(op) != 0; }
    std::vector<TableOp> ops() const;

    const Cell& cell(TableOp op, std::size_t a, std::size_t b = 0) const;
    std::set<std::string> cell_labels(TableOp op, const std::vector<std::string>& inputs) const;
    LabelTable table(TableOp op) const;
    bool is_deterministic() const;

    std::string format_cell(const Cell& c) const;

private:
    std::vector<std::string> values_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<bool> designated_;
    std::map<TableOp, std::vector<Cell>> cells_;
};

bool operator==(const FiniteNMatrix& a, const FiniteNMatrix& b);

/// Two-valued Boolean matrix on {t, F}, D = {t}, with and/or/not/implies.
FiniteNMatrix classical_matrix();
/// Three-valued matrix on {t, T, F}, D = {t}, with the and/or/not tables
/// of which the quantum matrix is a rexpansion.
FiniteNMatrix three_valued_matrix();
/// Two-valued {t, F} matrix obtained the same way with f(1) = t and
/// f(x) = F for x < 1.
FiniteNMatrix two_valued_matrix();

// ---------------------------------------------------------------------------
// Interval-valued N-matrices over V = [0,1]

enum class Relation { Orthogonal, NonOrthogonal };
const char* relation_name(Relation r);

enum class RelationVerdict { Orthogonal, NonOrthogonal, Ambiguous };

/// Decides the lattice relation between the elements denoted by two formulas.
using RelationOracle = std::function<RelationVerdict(const Formula&, const Formula&)>;

struct UnaryRule {
    std::string description;
    std::function<IntervalUnion(double)> apply;
    /// Union of apply(a) over a in the region.
    std::function<RegionUnion(const Region&)> image;
};

struct BinaryRule {
    std::string description;
    std::function<IntervalUnion(Relation, double, double)> apply;
    std::function<RegionUnion(Relation, const Region&, const Region&)> image;
};

class IntervalNMatrix {
public:
    IntervalNMatrix(std::string name, double alpha, UnaryRule negation, BinaryRule conjunction,
                    BinaryRule disjunction);

    const std::string& name() const { return name_; }
    double alpha() const { return alpha_; }
    /// D = [alpha, 1]
    Region designated_region() const { return Region::closed(alpha_, 1.0); }
    /// V \ D = [0, alpha)
    Region undesignated_region() const { return {0.0, alpha_, false, true}; }
    bool is_designated(double x, double tol = kMembershipTol) const { return x >= alpha_ - tol; }

    const UnaryRule& negation() const { return negation_; }
    const BinaryRule& conjunction() const { return conjunction_; }
    const BinaryRule& disjunction() const { return disjunction_; }
    const BinaryRule& binary(TableOp op) const;

    /// Human-readable description of every rule.
    std::vector<std::string> describe() const;

private:
    std::string name_;
    double alpha_;
    UnaryRule negation_;
    BinaryRule conjunction_;
    BinaryRule disjunction_;
};

// ---------------------------------------------------------------------------
// Legality, staticity, consequence

struct LegalityViolation {
    std::string formula;
    std::string value;
    std::string expected;
    std::string note;
};

struct LegalityReport {
    std::vector<LegalityViolation> violations;
    std::vector<std::string> ambiguous;  // pairs whose relation could not be decided
    bool legal() const { return violations.empty(); }
};

LegalityReport is_dynamic_legal(const FiniteValuation& v, const FiniteNMatrix& m);
LegalityReport is_dynamic_legal(const RealValuation& v, const IntervalNMatrix& m, const RelationOracle& oracle,
                                double tol = kMembershipTol);

struct StaticViolation {
    std::string first;
    std::string second;
    std::string first_value;
    std::string second_value;
};

struct StaticReport {
    std::vector<StaticViolation> violations;
    bool is_static() const { return violations.empty(); }
};

/// Pairs of same-connective formulas whose operands carry equal values but
/// whose own values differ.
StaticReport is_static(const FiniteValuation& v, const FiniteNMatrix& m);
StaticReport is_static(const RealValuation& v, double tol = kMembershipTol);

/// Calls visit for every legal dynamic valuation on the subformula closure of
/// the formulas; stops early when visit returns false. Returns the number of
/// valuations visited.
std::size_t enumerate_dynamic_valuations(const FiniteNMatrix& m, const std::vector<Formula>& formulas,
                                         const std::function<bool(const FiniteValuation&)>& visit);

struct ConsequenceResult {
    bool holds = false;
    std::optional<FiniteValuation> countermodel;  // first found in enumeration order
};

/// Gamma |- Delta: every dynamic model of Gamma designates some member of
/// Delta. An empty Delta asks whether Gamma has no model.
ConsequenceResult dynamic_consequence(const FiniteNMatrix& m, const std::vector<Formula>& gamma,
                                      const std::vector<Formula>& delta);
/// Same, restricted to static valuations.
ConsequenceResult static_consequence(const FiniteNMatrix& m, const std::vector<Formula>& gamma,
                                     const std::vector<Formula>& delta);
bool is_dynamically_valid(const FiniteNMatrix& m, const Formula& psi);

std::string format_valuation(const FiniteValuation& v, const FiniteNMatrix& m);
std::string format_valuation(const RealValuation& v);

// ---------------------------------------------------------------------------
// Adequacy

struct AdequacyViolation {
    std::string connective;
    std::string clause;
    std::string witness;  // input values (and relation case for interval matrices)
    std::string output;   // the offending interpretation set
};

struct AdequacyReport {
    std::vector<AdequacyViolation> violations;
    bool adequate() const { return violations.empty(); }
};

AdequacyReport adequacy_check(const FiniteNMatrix& m);
AdequacyReport adequacy_check(const IntervalNMatrix& m);

// ---------------------------------------------------------------------------
// Refinements, expansions, rexpansions

using ExpansionFunction = std::map<std::string, std::vector<std::string>>;

FiniteNMatrix f_expansion(const FiniteNMatrix& m1, const ExpansionFunction& F);
bool is_refinement(const FiniteNMatrix& m1, const FiniteNMatrix& m2);

/// f : [0,1] -> V1 given by labelled regions that partition [0,1].
class ThresholdMap {
public:
    /// Throws when the regions do not partition [0,1].
    explicit ThresholdMap(std::vector<std::pair<Region, std::string>> pieces);
    const std::vector<std::pair<Region, std::string>>& pieces() const { return pieces_; }
    const std::string& operator()(double x) const;

private:
    std::vector<std::pair<Region, std::string>> pieces_;
};

/// f(1) = t, f(0) = F, f(x) = T on (0,1).
ThresholdMap three_valued_map();
/// f(1) = t, f(x) = F on [0,1).
ThresholdMap two_valued_map();

struct RexpansionReport {
    std::vector<std::string> condition1;  // designation mismatches
    std::vector<std::string> condition2;  // interpretation-set escapes
    std::size_t symbolic_cases = 0;
    std::size_t samples_checked = 0;
    std::size_t sample_failures = 0;  // only the first few are listed
    bool passed() const { return condition1.empty() && condition2.empty() && sample_failures == 0; }
};

RexpansionReport verify_rexpansion(const FiniteNMatrix& m1, const FiniteNMatrix& m2,
                                   const std::map<std::string, std::string>& f);
RexpansionReport verify_rexpansion(const FiniteNMatrix& m1, const IntervalNMatrix& m2, const ThresholdMap& f,
                                   std::size_t samples, std::uint64_t seed = 0);

/// Smallest finite matrix over the labels of f for which m2 is a rexpansion
/// via f: each cell collects f of everything the interval rules can output on
/// the preimages.
FiniteNMatrix induced_finite_matrix(const IntervalNMatrix& m2, const ThresholdMap& f,
                                    const std::vector<std::string>& labels, const std::set<std::string>& designated);

}  // namespace qnsem
