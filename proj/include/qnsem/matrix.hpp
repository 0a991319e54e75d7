#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qnsem/error.hpp"

namespace qnsem {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Dense complex matrix stored row-major. Immutable through the public API
/// except for element access on non-const instances.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static ComplexMatrix zero(std::size_t n) { return ComplexMatrix(n, n); }
    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const double> diag);
    /// |u><v|
    static ComplexMatrix outer(std::span<const Complex> u, std::span<const Complex> v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    std::string shape() const;

    Complex operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const std::vector<Complex>& entries() const { return entries_; }

    ComplexMatrix operator+(const ComplexMatrix& other) const;
    ComplexMatrix operator-(const ComplexMatrix& other) const;
    ComplexMatrix operator*(Complex s) const;

    /// Largest entry modulus.
    double max_abs() const;
    CVector column(std::size_t j) const;
    CVector apply(std::span<const Complex> x) const;

private:
    void check_same_shape(const ComplexMatrix& other, const char* op) const;

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

struct EigenResult {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // columns, orthonormal
};

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& a);
Complex trace(const ComplexMatrix& a);

/// max |a - a^dagger|
double hermitian_defect(const ComplexMatrix& a);

/// Eigendecomposition of a Hermitian matrix. Throws when the asymmetry
/// exceeds tol.
EigenResult hermitian_eigen(const ComplexMatrix& a, double tol = kDefaultTol);

/// Gram-Schmidt (two passes). Vectors whose residual norm is <= tol after
/// projection are dropped.
std::vector<CVector> orthonormalize(const std::vector<CVector>& vectors, double tol = kDefaultTol);

Complex inner(std::span<const Complex> u, std::span<const Complex> v);  // <u|v>
double norm(std::span<const Complex> v);

}  // namespace qnsem
