#include "qnsem/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

namespace qnsem {
namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* op) {
    if (a != b) {
        throw Error(std::string(op) + ": dimension mismatch " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

// Eigenvalues at or below this fraction of the spectral scale count as zero
// when extracting the kernel of (I-p)+(I-q).
constexpr double kKernelThreshold = 1e-8;

}  // namespace

ProjectorResiduals projector_residuals(const ComplexMatrix& m) {
    if (!m.square()) throw Error("projector matrix must be square, got " + m.shape());
    return {(multiply(m, m) - m).max_abs(), hermitian_defect(m)};
}

Projector Projector::from_matrix(ComplexMatrix m, double tol) {
    const auto r = projector_residuals(m);
    if (r.idempotence > tol || r.hermiticity > tol) {
        std::ostringstream os;
        os << "not a projector: |P^2-P| = " << r.idempotence << ", |P-P^dagger| = " << r.hermiticity
           << " (tol " << tol << ")";
        throw Error(os.str());
    }
    return Projector(std::move(m));
}

Projector Projector::from_orthonormal(const std::vector<CVector>& basis, std::size_t dim) {
    ComplexMatrix m(dim, dim);
    for (const auto& e : basis) m = m + ComplexMatrix::outer(e, e);
    return Projector(std::move(m));
}

std::size_t Projector::rank() const {
    return static_cast<std::size_t>(std::llround(trace(matrix_).real()));
}

DensityResiduals density_residuals(const ComplexMatrix& m) {
    if (!m.square()) throw Error("density matrix must be square, got " + m.shape());
    DensityResiduals r;
    r.hermiticity = hermitian_defect(m);
    r.trace_error = std::abs(trace(m) - Complex(1.0));
    r.min_eigenvalue = hermitian_eigen(m, std::max(r.hermiticity, 1e-300)).eigenvalues.front();
    return r;
}

DensityOperator DensityOperator::from_matrix(ComplexMatrix m, double tol) {
    const auto r = density_residuals(m);
    if (r.hermiticity > tol || r.min_eigenvalue < -tol || r.trace_error > tol) {
        std::ostringstream os;
        os << "not a density operator: |rho-rho^dagger| = " << r.hermiticity
           << ", min eigenvalue = " << r.min_eigenvalue << ", |tr rho - 1| = " << r.trace_error << " (tol "
           << tol << ")";
        throw Error(os.str());
    }
    return DensityOperator(std::move(m));
}

DensityOperator DensityOperator::pure(std::span<const Complex> psi) {
    const double n = norm(psi);
    if (n == 0.0) throw Error("pure state from the zero vector");
    return DensityOperator(ComplexMatrix::outer(psi, psi) * Complex(1.0 / (n * n)));
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
    return DensityOperator(ComplexMatrix::identity(dim) * Complex(1.0 / static_cast<double>(dim)));
}

Projector projector_from_span(const std::vector<CVector>& vectors, std::size_t dim, double tol) {
    for (const auto& v : vectors) require_same_dim(v.size(), dim, "projector_from_span");
    return Projector::from_orthonormal(orthonormalize(vectors, tol), dim);
}

Projector meet(const Projector& p, const Projector& q, double tol) {
    require_same_dim(p.dim(), q.dim(), "meet");
    const std::size_t d = p.dim();
    const auto id = ComplexMatrix::identity(d);
    const ComplexMatrix m = (id - p.matrix()) + (id - q.matrix());
    const auto eig = hermitian_eigen(m, std::max(10.0 * tol, 1e-12));
    const double scale = std::max(1.0, eig.eigenvalues.back());
    std::vector<CVector> kernel;
    for (std::size_t k = 0; k < d; ++k) {
        if (eig.eigenvalues[k] <= kKernelThreshold * scale) kernel.push_back(eig.eigenvectors.column(k));
    }
    return Projector::from_orthonormal(kernel, d);
}

Projector join(const Projector& p, const Projector& q, double tol) {
    require_same_dim(p.dim(), q.dim(), "join");
    return ortho(meet(ortho(p), ortho(q), tol));
}

Projector ortho(const Projector& p) {
    return Projector(ComplexMatrix::identity(p.dim()) - p.matrix());
}

bool leq(const Projector& p, const Projector& q, double tol) {
    require_same_dim(p.dim(), q.dim(), "leq");
    return (multiply(q.matrix(), p.matrix()) - p.matrix()).max_abs() <= tol;
}

double overlap_norm(const Projector& p, const Projector& q) {
    require_same_dim(p.dim(), q.dim(), "is_orthogonal");
    return multiply(p.matrix(), q.matrix()).max_abs();
}

bool is_orthogonal(const Projector& p, const Projector& q, double tol) {
    return overlap_norm(p, q) <= tol;
}

bool approx_equal(const Projector& p, const Projector& q, double tol) {
    return p.dim() == q.dim() && (p.matrix() - q.matrix()).max_abs() <= tol;
}

double born(const DensityOperator& rho, const Projector& p, double tol) {
    require_same_dim(rho.dim(), p.dim(), "born");
    const std::size_t d = p.dim();
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) s += (rho.matrix()(i, j) * p.matrix()(j, i)).real();
    if (s < -tol || s > 1.0 + tol) {
        std::ostringstream os;
        os << "Born value " << s << " outside [0,1] beyond tolerance " << tol;
        throw Error(os.str());
    }
    return std::clamp(s, 0.0, 1.0);
}

StateAxiomReport verify_state_axioms(const DensityOperator& rho, const std::vector<Projector>& family,
                                     double tol) {
    for (std::size_t i = 0; i < family.size(); ++i) {
        require_same_dim(rho.dim(), family[i].dim(), "verify_state_axioms");
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            if (!is_orthogonal(family[i], family[j], tol)) {
                throw Error("family members " + std::to_string(i) + " and " + std::to_string(j) +
                            " are not orthogonal");
            }
        }
    }
    StateAxiomReport r;
    const std::size_t d = rho.dim();
    r.zero_residual = std::abs(born(rho, Projector::zero(d), tol));
    Projector acc = Projector::zero(d);
    double sum = 0.0;
    for (const auto& p : family) {
        const double mu = born(rho, p, tol);
        r.complement_residual = std::max(r.complement_residual, std::abs(born(rho, ortho(p), tol) - 1.0 + mu));
        sum += mu;
        acc = join(acc, p, tol);
    }
    r.additivity_residual = std::abs(born(rho, acc, tol) - sum);
    return r;
}

Reconstruction state_reconstruction(const std::vector<Projector>& family, const std::vector<double>& values,
                                    double tol) {
    if (family.size() != values.size()) {
        throw Error("state_reconstruction: " + std::to_string(family.size()) + " projectors but " +
                    std::to_string(values.size()) + " values");
    }
    if (family.empty()) throw Error("family does not determine a state");
    const std::size_t d = family.front().dim();
    for (std::size_t i = 0; i < family.size(); ++i) {
        require_same_dim(family[i].dim(), d, "state_reconstruction");
        if (values[i] < -tol || values[i] > 1.0 + tol) {
            throw Error("value " + std::to_string(values[i]) + " outside [0,1]");
        }
    }
    // Unknowns: rho_ii (real), then Re/Im rho_ij for i < j.
    const auto n_unknowns = static_cast<Eigen::Index>(d * d);
    const auto n_rows = static_cast<Eigen::Index>(family.size() + 1);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_rows, n_unknowns);
    Eigen::VectorXd b(n_rows);
    auto offdiag_index = [d](std::size_t i, std::size_t j) {
        // position of the (i, j), i < j pair in row-major upper-triangle order
        std::size_t k = 0;
        for (std::size_t r = 0; r < i; ++r) k += d - r - 1;
        return d + 2 * (k + (j - i - 1));
    };
    for (std::size_t r = 0; r < family.size(); ++r) {
        const auto& p = family[r].matrix();
        const auto row = static_cast<Eigen::Index>(r);
        for (std::size_t i = 0; i < d; ++i) {
            a(row, static_cast<Eigen::Index>(i)) = p(i, i).real();
            for (std::size_t j = i + 1; j < d; ++j) {
                const auto k = static_cast<Eigen::Index>(offdiag_index(i, j));
                a(row, k) = 2.0 * p(j, i).real();
                a(row, k + 1) = -2.0 * p(j, i).imag();
            }
        }
        b(row) = values[r];
    }
    const Eigen::Index trace_row = n_rows - 1;
    for (std::size_t i = 0; i < d; ++i) a(trace_row, static_cast<Eigen::Index>(i)) = 1.0;
    b(trace_row) = 1.0;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(1e-10);
    if (qr.rank() < n_unknowns) throw Error("family does not determine a state");
    const Eigen::VectorXd x = qr.solve(b);
    const double residual = (a * x - b).cwiseAbs().maxCoeff();

    ComplexMatrix rho(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        rho(i, i) = x(static_cast<Eigen::Index>(i));
        for (std::size_t j = i + 1; j < d; ++j) {
            const auto k = static_cast<Eigen::Index>(offdiag_index(i, j));
            rho(i, j) = Complex(x(k), x(k + 1));
            rho(j, i) = std::conj(rho(i, j));
        }
    }
    if (residual > 1e3 * tol) {
        std::ostringstream os;
        os << "values not realizable by a quantum state (least-squares residual " << residual << ")";
        throw Error(os.str());
    }
    const double min_eig = hermitian_eigen(rho, 1e-12).eigenvalues.front();
    if (min_eig < -tol) {
        std::ostringstream os;
        os << "values not realizable by a quantum state (eigenvalue " << min_eig << ")";
        throw Error(os.str());
    }
    return {DensityOperator::from_matrix(std::move(rho), std::max(tol, 1e3 * tol)), residual};
}

CVector random_vector(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CVector v(dim);
    for (auto& z : v) z = Complex(g(rng), g(rng));
    return v;
}

Projector random_projector_of_rank(std::size_t dim, std::size_t rank, std::mt19937_64& rng) {
    std::vector<CVector> vs;
    for (std::size_t k = 0; k < rank; ++k) vs.push_back(random_vector(dim, rng));
    return projector_from_span(vs, dim);
}

Projector random_projector(std::size_t dim, std::mt19937_64& rng) {
    if (dim <= 1) return random_projector_of_rank(dim, dim, rng);
    std::uniform_int_distribution<std::size_t> pick(1, dim - 1);
    return random_projector_of_rank(dim, pick(rng), rng);
}

DensityOperator random_state(std::size_t dim, std::mt19937_64& rng) {
    ComplexMatrix g(dim, dim);
    std::normal_distribution<double> n(0.0, 1.0);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) g(i, j) = Complex(n(rng), n(rng));
    ComplexMatrix m = multiply(g, adjoint(g));
    m = m * Complex(1.0 / trace(m).real());
    return DensityOperator::from_matrix(std::move(m), 1e-9);
}

}  // namespace qnsem
