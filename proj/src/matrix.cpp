#include "qnsem/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

namespace qnsem {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Complex{}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        std::ostringstream os;
        os << "matrix " << rows_ << "x" << cols_ << " needs " << rows_ * cols_
           << " entries, got " << entries_.size();
        throw Error(os.str());
    }
    for (const auto& z : entries_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw Error("matrix entries must be finite");
        }
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> u, std::span<const Complex> v) {
    ComplexMatrix m(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
    return m;
}

std::string ComplexMatrix::shape() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
}

void ComplexMatrix::check_same_shape(const ComplexMatrix& other, const char* op) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw Error(std::string("shape mismatch in ") + op + ": " + shape() + " vs " + other.shape());
    }
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& other) const {
    check_same_shape(other, "addition");
    ComplexMatrix out = *this;
    for (std::size_t k = 0; k < entries_.size(); ++k) out.entries_[k] += other.entries_[k];
    return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& other) const {
    check_same_shape(other, "subtraction");
    ComplexMatrix out = *this;
    for (std::size_t k = 0; k < entries_.size(); ++k) out.entries_[k] -= other.entries_[k];
    return out;
}

ComplexMatrix ComplexMatrix::operator*(Complex s) const {
    ComplexMatrix out = *this;
    for (auto& z : out.entries_) z *= s;
    return out;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : entries_) m = std::max(m, std::abs(z));
    return m;
}

CVector ComplexMatrix::column(std::size_t j) const {
    CVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

CVector ComplexMatrix::apply(std::span<const Complex> x) const {
    if (x.size() != cols_) {
        throw Error("vector of length " + std::to_string(x.size()) + " does not fit matrix " + shape());
    }
    CVector y(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw Error("cannot multiply " + a.shape() + " by " + b.shape());
    }
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
    return t;
}

Complex trace(const ComplexMatrix& a) {
    if (!a.square()) throw Error("trace of non-square matrix " + a.shape());
    Complex s{};
    for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, i);
    return s;
}

double hermitian_defect(const ComplexMatrix& a) {
    if (!a.square()) throw Error("non-square matrix " + a.shape() + " cannot be Hermitian");
    double d = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - std::conj(a(j, i))));
    return d;
}

EigenResult hermitian_eigen(const ComplexMatrix& a, double tol) {
    const double defect = hermitian_defect(a);
    if (defect > tol) {
        std::ostringstream os;
        os << "matrix is not Hermitian: max |A - A^dagger| = " << defect << " > " << tol;
        throw Error(os.str());
    }
    const auto n = static_cast<Eigen::Index>(a.rows());
    Eigen::MatrixXcd m(n, n);
    // Symmetrize so that the solver sees an exactly Hermitian input.
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto ui = static_cast<std::size_t>(i);
            const auto uj = static_cast<std::size_t>(j);
            m(i, j) = 0.5 * (a(ui, uj) + std::conj(a(uj, ui)));
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success) throw Error("Hermitian eigensolver did not converge");

    EigenResult out;
    out.eigenvalues.resize(a.rows());
    out.eigenvectors = ComplexMatrix(a.rows(), a.rows());
    for (Eigen::Index k = 0; k < n; ++k) {
        out.eigenvalues[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
        for (Eigen::Index i = 0; i < n; ++i)
            out.eigenvectors(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) =
                solver.eigenvectors()(i, k);
    }
    return out;
}

Complex inner(std::span<const Complex> u, std::span<const Complex> v) {
    Complex s{};
    for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
    return s;
}

double norm(std::span<const Complex> v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

std::vector<CVector> orthonormalize(const std::vector<CVector>& vectors, double tol) {
    std::vector<CVector> basis;
    if (vectors.empty()) return basis;
    const std::size_t dim = vectors.front().size();
    for (const auto& v : vectors) {
        if (v.size() != dim) {
            throw Error("orthonormalize: vectors of dimension " + std::to_string(dim) + " and " +
                        std::to_string(v.size()));
        }
        CVector w = v;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& e : basis) {
                const Complex c = inner(e, w);
                for (std::size_t i = 0; i < dim; ++i) w[i] -= c * e[i];
            }
        }
        const double n = norm(w);
        if (n <= tol) continue;
        for (auto& z : w) z /= n;
        basis.push_back(std::move(w));
    }
    return basis;
}

}  // namespace qnsem
