#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qnsem/hilbert.hpp"

namespace qnsem {

/// Named vectors of C^dim and contexts (lists of ids meant to be orthonormal
/// bases). Vectors are normalized on construction.
class VectorContextFamily {
public:
    VectorContextFamily(std::size_t dim, std::map<std::string, CVector> vectors,
                        std::vector<std::vector<std::string>> contexts);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return ids_.size(); }
    const std::vector<std::string>& ids() const { return ids_; }
    const CVector& vector(std::size_t i) const { return vectors_[i]; }
    const std::vector<std::vector<std::size_t>>& contexts() const { return contexts_; }
    std::size_t index_of(const std::string& id) const;

    /// |<u|v>| <= tol, computed once per tolerance.
    std::vector<std::vector<char>> orthogonality(double tol = kDefaultTol) const;

private:
    std::size_t dim_;
    std::vector<std::string> ids_;
    std::vector<CVector> vectors_;
    std::vector<std::vector<std::size_t>> contexts_;
};

/// The dimension-4 set of 18 vectors in 9 contexts, each vector in exactly
/// two contexts, that admits no classical valuation.
VectorContextFamily cabello_family();

struct ContextReport {
    std::vector<double> orthonormality;  // per context, max |<u|v> - delta|
    std::vector<double> resolution;      // per context, max |sum |v><v| - I|
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

ContextReport verify_contexts(const VectorContextFamily& f, double tol = kDefaultTol);

using Assignment01 = std::vector<int>;  // parallel to ids()

struct KSSearch {
    std::optional<Assignment01> assignment;
    std::size_t count = 0;
    bool capped = false;
    std::size_t nodes = 0;
    bool sat() const { return assignment.has_value(); }
};

/// Exactly one 1 per context and no two orthogonal vectors both 1.
/// Branches on the most constrained open context, propagating zeros to
/// every vector orthogonal to a chosen one.
KSSearch search_classical_valuation(const VectorContextFamily& f, double tol = kDefaultTol);
KSSearch count_solutions(const VectorContextFamily& f, std::size_t cap, double tol = kDefaultTol);

/// Independent re-check of an assignment against both constraints.
bool satisfies_contexts(const VectorContextFamily& f, const Assignment01& v, double tol = kDefaultTol);

struct S3Report {
    bool s3 = false;
    bool ns3 = false;
    bool rs3 = false;
    std::vector<std::string> violations;
};

/// Friedman-Glymour conditions on a projector fragment closed under
/// orthocomplement: v(P) = 1 iff v(P^perp) = 0, and upward closure along
/// leq. NS3 adds a rank-one projector valued 1; RS3 adds exactly one 1 in
/// every listed context (index lists into the fragment).
S3Report s3_check(const std::vector<Projector>& fragment, const Assignment01& v,
                  const std::vector<std::vector<std::size_t>>& contexts = {}, double tol = kDefaultTol);

}  // namespace qnsem
