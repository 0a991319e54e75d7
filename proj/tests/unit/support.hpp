#pragma once

#include <cmath>
#include <random>
#include <string>

#include "qnsem/hilbert.hpp"

namespace test_support {

inline std::string data(const std::string& name) { return std::string(QNSEM_DATA_DIR) + "/" + name; }

inline qnsem::ComplexMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    qnsem::ComplexMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = {n(rng), n(rng)};
    return m;
}

inline double max_diff(const qnsem::ComplexMatrix& a, const qnsem::ComplexMatrix& b) { return (a - b).max_abs(); }

// Alternating projections converge to the projector onto the intersection.
inline qnsem::ComplexMatrix von_neumann_meet(const qnsem::Projector& p, const qnsem::Projector& q) {
    qnsem::ComplexMatrix t = qnsem::multiply(p.matrix(), q.matrix());
    t = qnsem::multiply(t, p.matrix());
    for (int k = 0; k < 12; ++k) t = qnsem::multiply(t, t);  // (PQP)^(2^12)
    return t;
}

}  // namespace test_support
