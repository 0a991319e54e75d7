#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "qnsem/matrix.hpp"

namespace qnsem {

/// Orthogonal projection on C^d: Hermitian and idempotent within tolerance.
class Projector {
public:
    Projector() = default;

    /// Validates idempotence and self-adjointness; throws with the residuals.
    static Projector from_matrix(ComplexMatrix m, double tol = kDefaultTol);
    static Projector zero(std::size_t dim) { return Projector(ComplexMatrix::zero(dim)); }
    static Projector identity(std::size_t dim) { return Projector(ComplexMatrix::identity(dim)); }
    /// Sum of |e><e| over an orthonormal family; not re-validated.
    static Projector from_orthonormal(const std::vector<CVector>& basis, std::size_t dim);

    const ComplexMatrix& matrix() const { return matrix_; }
    std::size_t dim() const { return matrix_.rows(); }
    /// Rounded trace.
    std::size_t rank() const;

private:
    friend Projector ortho(const Projector& p);
    explicit Projector(ComplexMatrix m) : matrix_(std::move(m)) {}
    ComplexMatrix matrix_;
};

/// Positive semidefinite, trace-one operator.
class DensityOperator {
public:
    DensityOperator() = default;

    static DensityOperator from_matrix(ComplexMatrix m, double tol = kDefaultTol);
    /// |psi><psi| / <psi|psi>
    static DensityOperator pure(std::span<const Complex> psi);
    static DensityOperator maximally_mixed(std::size_t dim);

    const ComplexMatrix& matrix() const { return matrix_; }
    std::size_t dim() const { return matrix_.rows(); }

private:
    explicit DensityOperator(ComplexMatrix m) : matrix_(std::move(m)) {}
    ComplexMatrix matrix_;
};

struct ProjectorResiduals {
    double idempotence = 0.0;  // max |P^2 - P|
    double hermiticity = 0.0;  // max |P - P^dagger|
};
ProjectorResiduals projector_residuals(const ComplexMatrix& m);

struct DensityResiduals {
    double hermiticity = 0.0;
    double min_eigenvalue = 0.0;
    double trace_error = 0.0;  // |tr rho - 1|
};
DensityResiduals density_residuals(const ComplexMatrix& m);

Projector projector_from_span(const std::vector<CVector>& vectors, std::size_t dim, double tol = kDefaultTol);

// Lattice operations of L(H).
Projector ortho(const Projector& p);
Projector meet(const Projector& p, const Projector& q, double tol = kDefaultTol);
Projector join(const Projector& p, const Projector& q, double tol = kDefaultTol);
bool leq(const Projector& p, const Projector& q, double tol = kDefaultTol);
bool is_orthogonal(const Projector& p, const Projector& q, double tol = kDefaultTol);
/// max |pq|; the quantity compared against tol by is_orthogonal.
double overlap_norm(const Projector& p, const Projector& q);
bool approx_equal(const Projector& p, const Projector& q, double tol = kDefaultTol);

/// Born probability Re tr(rho p). Values within tol of [0,1] are clipped;
/// anything further out throws.
double born(const DensityOperator& rho, const Projector& p, double tol = kDefaultTol);

struct StateAxiomReport {
    double zero_residual = 0.0;        // |mu(0)|
    double complement_residual = 0.0;  // max |mu(P^perp) - 1 + mu(P)|
    double additivity_residual = 0.0;  // |mu(join P_j) - sum mu(P_j)|
    bool ok(double tol) const {
        return zero_residual <= tol && complement_residual <= tol && additivity_residual <= tol;
    }
};

/// Throws when two members of the family are not orthogonal.
StateAxiomReport verify_state_axioms(const DensityOperator& rho, const std::vector<Projector>& family,
                                     double tol = kDefaultTol);

struct Reconstruction {
    DensityOperator rho;
    double residual = 0.0;  // max |tr(rho P_i) - value_i| including the trace row
};

/// Least-squares solve of tr(rho P_i) = value_i and tr(rho) = 1 over
/// Hermitian rho. Throws when the family is not informationally complete or
/// when the values are not produced by any density operator.
Reconstruction state_reconstruction(const std::vector<Projector>& family, const std::vector<double>& values,
                                    double tol = kDefaultTol);

// Sampling helpers used by the randomized suites.
CVector random_vector(std::size_t dim, std::mt19937_64& rng);
/// Projector onto the span of k Gaussian vectors, k uniform in [1, dim-1]
/// (k = 1 when dim = 1).
Projector random_projector(std::size_t dim, std::mt19937_64& rng);
Projector random_projector_of_rank(std::size_t dim, std::size_t rank, std::mt19937_64& rng);
/// rho = G G^dagger / tr(G G^dagger) for Gaussian G.
DensityOperator random_state(std::size_t dim, std::mt19937_64& rng);

}  // namespace qnsem
