// Shared test helpers.

#pragma once

#include "ergolab/ergolab.hpp"

#include <gtest/gtest.h>

namespace ergolab::testing {

inline ::testing::AssertionResult MatrixNear(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        return ::testing::AssertionFailure() << "shape " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x" << b.cols();
    const double err = (a - b).cwiseAbs().maxCoeff();
    if (err <= tol) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "max deviation " << err << " > " << tol;
}

inline ComplexMatrix diag(std::initializer_list<double> v) {
    return HermitianOperator::diagonal(v).matrix();
}

inline ComplexMatrix ket_bra(Index d, Index i, Index j) {
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    m(i, j) = 1.0;
    return m;
}

inline ComplexMatrix pauli_x() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = m(1, 0) = 1.0;
    return m;
}

inline ComplexMatrix pauli_z() { return diag({1.0, -1.0}); }

inline BipartiteState bell_state() { return analytic::maximally_entangled_state(2, 2); }

inline BipartiteState product_state(const ComplexMatrix& rs, const ComplexMatrix& ra) {
    return BipartiteState(DensityOperator(tensor(rs, ra)), rs.rows(), ra.rows());
}

inline BipartiteState pure_product_state(Index ds, Index da, std::uint64_t seed) {
    return product_state(random_density(ds, 1, seed).matrix(), random_density(da, 1, seed + 1).matrix());
}

inline double system_ergotropy(const BipartiteState& rho, const HermitianOperator& h) {
    return ergotropy(partial_trace(rho, Subsystem::System), h).value;
}

}  // namespace ergolab::testing
