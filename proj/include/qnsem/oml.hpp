#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qnsem/hilbert.hpp"
#include "qnsem/lp.hpp"
#include "qnsem/nmatrix.hpp"

namespace qnsem {

/// Finite orthocomplemented poset given by its full order table. Meets and
/// joins are derived from the table; a missing or non-unique bound is
/// recorded as npos and reported by verify_oml.
class FiniteOML {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    /// leq pairs are (lower, upper) indices; reflexive pairs are added.
    FiniteOML(std::vector<std::string> elements, const std::vector<std::pair<std::size_t, std::size_t>>& leq,
              std::vector<std::size_t> ortho, std::size_t bottom, std::size_t top);

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(std::size_t i) const { return names_[i]; }
    std::size_t index_of(const std::string& name) const;
    bool leq(std::size_t x, std::size_t y) const { return leq_[x * size() + y]; }
    std::size_t ortho(std::size_t x) const { return ortho_[x]; }
    std::size_t bottom() const { return bottom_; }
    std::size_t top() const { return top_; }
    /// x <= y^perp
    bool orthogonal(std::size_t x, std::size_t y) const { return leq(x, ortho_[y]); }

    std::size_t meet_or_npos(std::size_t x, std::size_t y) const { return meet_[x * size() + y]; }
    std::size_t join_or_npos(std::size_t x, std::size_t y) const { return join_[x * size() + y]; }

private:
    std::vector<std::string> names_;
    std::map<std::string, std::size_t> index_;
    std::vector<char> leq_;
    std::vector<std::size_t> ortho_;
    std::size_t bottom_, top_;
    std::vector<std::size_t> meet_, join_;
};

struct OMLReport {
    std::vector<std::string> failures;  // first failures, capped
    std::size_t failure_count = 0;
    bool ok() const { return failure_count == 0; }
};

/// Partial order, bounds, lattice completeness, orthocomplement laws and the
/// orthomodular law, over all pairs.
OMLReport verify_oml(const FiniteOML& l);

/// Throws when the bound does not exist or is not unique.
std::size_t meet_oml(const FiniteOML& l, std::size_t x, std::size_t y);
std::size_t join_oml(const FiniteOML& l, std::size_t x, std::size_t y);

/// Pasting of Boolean blocks over shared atoms (Greechie diagram). Element
/// names: "0", "1", atom names, "~a" for the complement of atom a within a
/// block, and "a+b+..." otherwise. The order is block inclusion closed
/// transitively.
FiniteOML from_greechie(const std::vector<std::string>& atoms, const std::vector<std::vector<std::string>>& blocks);

/// Boolean algebra with n atoms a, b, c, ... (n <= 26).
FiniteOML boolean_algebra(std::size_t n);
/// Horizontal sum of two four-element Boolean algebras.
FiniteOML mo2();

/// Greechie pasting over the flags of the affine plane of order 3: one block
/// per line (3 flags) and one per point (4 flags). 128 elements, no states.
FiniteOML no_state_lattice();

struct ProjectorFragment {
    FiniteOML lattice;
    std::vector<Projector> projectors;  // parallel to lattice elements
};

/// Closes the generators under meet, join and orthocomplement in L(H) and
/// tabulates the result. Throws past max_size elements.
ProjectorFragment close_projector_fragment(const std::vector<Projector>& generators, double tol = kDefaultTol,
                                           std::size_t max_size = 256);

// ---------------------------------------------------------------------------
// States

struct StateReport {
    double zero_residual = 0.0;
    double top_residual = 0.0;
    double complement_residual = 0.0;
    double additivity_residual = 0.0;
    double range_residual = 0.0;
    std::string worst_pair;
    double max_residual() const;
    bool ok(double tol) const { return max_residual() <= tol; }
};

/// mu(0) = 0, mu(1) = 1, mu(x^perp) = 1 - mu(x), values in [0,1], and
/// mu(x v y) = mu(x) + mu(y) for every orthogonal pair.
StateReport verify_general_state(const FiniteOML& l, const std::vector<double>& mu);

struct StateSearch {
    FeasibilityResult lp;
    std::optional<std::vector<double>> state;
};

/// Linear feasibility over mu in [0,1]^L with the state equalities. Uses
/// exact rationals up to exact_limit elements.
StateSearch find_state(const FiniteOML& l, std::size_t exact_limit = 256);

struct TwoValuedSearch {
    std::vector<std::vector<int>> solutions;
    std::size_t count = 0;
    bool exhausted = false;  // false when the cap stopped the search
    bool sat() const { return count > 0; }
};

/// Backtracking over v : L -> {0,1} preserving join, meet, orthocomplement
/// and v(1) = 1. With count_all set, enumerates up to cap solutions.
TwoValuedSearch find_two_valued_valuation(const FiniteOML& l, bool count_all = false, std::size_t cap = 1u << 20);

// ---------------------------------------------------------------------------
// Tables over a lattice

struct OMLTables {
    std::shared_ptr<const FiniteOML> lattice;
    IntervalNMatrix matrix;
    Relation relation(std::size_t x, std::size_t y) const {
        return lattice->orthogonal(x, y) ? Relation::Orthogonal : Relation::NonOrthogonal;
    }
};

/// Quantum-shaped rules with orthogonality x <= y^perp and D = [alpha, 1].
OMLTables general_quantum_tables(const FiniteOML& l, double alpha = 1.0);

/// Element denoted by a formula under an atom binding.
std::size_t denote_oml(const FiniteOML& l, const std::map<std::string, std::size_t>& bindings, const Formula& f);
RelationOracle oml_oracle(std::shared_ptr<const FiniteOML> l, std::map<std::string, std::size_t> bindings);

/// One table constraint: z = op(x, y) (y unused for negation).
struct TableInstance {
    TableOp op;
    std::size_t x, y, z;
};

/// Every negation, meet and join instance of the lattice.
std::vector<TableInstance> all_instances(const FiniteOML& l);
/// Instances from the compound formulas of a subformula closure.
std::vector<TableInstance> instances_from_formulas(const FiniteOML& l,
                                                   const std::map<std::string, std::size_t>& bindings,
                                                   const std::vector<Formula>& formulas);

/// Elementwise legality of an assignment for the given instances.
LegalityReport lattice_legality(const OMLTables& t, const std::vector<double>& values,
                                const std::vector<TableInstance>& instances, double tol = kDefaultTol);

struct LegalSearch {
    FeasibilityResult lp;
    std::optional<std::vector<double>> valuation;
};

/// Linear encoding of the table constraints (equalities on orthogonal cells,
/// inequalities on interval cells, negation equalities) plus pinned values.
/// Without a scope all instances apply.
LegalSearch legal_valuation_search(const OMLTables& t, const std::map<std::size_t, double>& partial,
                                   const std::optional<std::vector<TableInstance>>& scope = std::nullopt,
                                   std::size_t exact_limit = 256);

}  // namespace qnsem
