// analytic.hpp
// Closed forms and bounds: optimal measurements for quantum-classical
// states, the universal daemonic-gain bound, and the qutrit-qubit and
// classical-classical reference states with their exact gains.

#pragma once

#include "ergolab/ergotropy.hpp"

#include <array>
#include <numbers>
#include <variant>

namespace ergolab::analytic {

/// rho = sum_j sigma_j (x) |b_j><b_j| up to `residual`, the Frobenius mass
/// of the off-diagonal ancilla blocks in the basis {b_j}.
struct QcDecomposition {
    UnitaryOperator ancilla_basis;
    std::vector<SubnormalizedState> blocks;
    double residual = 0.0;
};

struct NotQc {
    UnitaryOperator ancilla_basis;
    double residual = 0.0;
};

using QcDetection = std::variant<QcDecomposition, NotQc>;

inline bool is_qc(const QcDetection& d) { return std::holds_alternative<QcDecomposition>(d); }

/// Block decomposition in a caller-supplied ancilla basis.
inline QcDetection detect_qc(const BipartiteState& rho, const UnitaryOperator& basis, double tol = 1e-8) {
    const Index da = rho.dim_ancilla();
    const Index ds = rho.dim_system();
    if (basis.dim() != da) throw DimensionMismatch("ancilla basis vs ancilla");
    const ComplexMatrix& b = basis.matrix();
    double off_mass = 0.0;
    std::vector<ComplexMatrix> diag_blocks;
    for (Index j = 0; j < da; ++j)
        for (Index k = 0; k < da; ++k) {
            // (I (x) <b_j|) rho (I (x) |b_k>)
            const ComplexMatrix block = detail::contract_ancilla(rho.matrix(), ds, da, b.col(k) * b.col(j).adjoint());
            if (j == k)
                diag_blocks.push_back(detail::hermitian_part(block));
            else
                off_mass += block.squaredNorm();
        }
    const double residual = std::sqrt(off_mass);
    if (residual > tol) return NotQc{basis, residual};
    std::vector<SubnormalizedState> blocks(diag_blocks.begin(), diag_blocks.end());
    return QcDecomposition{basis, std::move(blocks), residual};
}

/// Block decomposition in the eigenbasis of rho^A (stable order for ties).
/// For degenerate rho^A the verdict refers to this particular basis.
inline QcDetection detect_qc(const BipartiteState& rho, double tol = 1e-8) {
    const DensityOperator rho_a = partial_trace(rho, Subsystem::Ancilla);
    return detect_qc(rho, UnitaryOperator(detail::eigh_matrix(rho_a.matrix(), true).vectors), tol);
}

struct QcOptimum {
    double value = 0.0;  // max_M W_D = sum_j W(sigma_j, H)
    double gain = 0.0;   // value - W(sum_j sigma_j, H)
    Povm measurement;    // {|b_j><b_j|}
};

inline QcOptimum qc_daemonic_optimum(const QcDecomposition& qc, const HermitianOperator& h) {
    QcOptimum out;
    ComplexMatrix rho_s = ComplexMatrix::Zero(h.dim(), h.dim());
    for (const auto& sigma : qc.blocks) {
        out.value += ergotropy(sigma, h).value;
        rho_s += sigma.matrix();
    }
    out.gain = out.value - ergotropy(SubnormalizedState(rho_s), h).value;
    out.measurement = Povm::projective(qc.ancilla_basis.matrix());
    return out;
}

/// Tr(H) / d_S - eps_0: the largest gain any state on d_S x d_A can have.
inline double gain_upper_bound(const HermitianOperator& h, Index d_system) {
    if (h.dim() != d_system) throw DimensionMismatch("Hamiltonian vs system");
    return h.trace() / static_cast<double>(d_system) - detail::eigenvalues_ascending(h.matrix())(0);
}

using Spectrum3 = std::array<double, 3>;

namespace detail {
inline void require_ordered(const Spectrum3& eps) {
    if (!(eps[0] <= eps[1] && eps[1] <= eps[2])) throw std::invalid_argument("energies must satisfy eps0 <= eps1 <= eps2");
}
}  // namespace detail

/// (1/3) sum_j |j><j| (x) Pi(2 pi j / 3, 0)
inline BipartiteState qutrit_qubit_state() {
    ComplexMatrix rho = ComplexMatrix::Zero(6, 6);
    for (Index j = 0; j < 3; ++j) {
        ComplexMatrix proj = ComplexMatrix::Zero(3, 3);
        proj(j, j) = 1.0;
        rho += ergolab::detail::kron(proj, bloch_projector(2.0 * std::numbers::pi * static_cast<double>(j) / 3.0, 0.0).matrix()) / 3.0;
    }
    return BipartiteState(rho, 3, 2);
}

/// Effects (2/3) Pi(2 pi j / 3, 0), j = 0, 1, 2.
inline Povm symmetric_trine_povm() {
    std::vector<HermitianOperator> effects;
    for (int j = 0; j < 3; ++j)
        effects.emplace_back(ComplexMatrix(bloch_projector(2.0 * std::numbers::pi * j / 3.0, 0.0).matrix() * (2.0 / 3.0)));
    return Povm(std::move(effects));
}

/// Best projective-measurement gain for the qutrit-qubit state.
inline double qutrit_qubit_pvm_gain(const Spectrum3& eps) {
    detail::require_ordered(eps);
    return (eps[2] - eps[0]) / (2.0 * std::sqrt(3.0));
}

/// Gain of the trine POVM for the qutrit-qubit state.
inline double qutrit_qubit_povm_gain(const Spectrum3& eps) {
    detail::require_ordered(eps);
    return (eps[1] + eps[2] - 2.0 * eps[0]) / 6.0;
}

/// Pure states on 3 x 2 have Schmidt rank at most 2.
inline double pure_state_gain_bound_3x2(const Spectrum3& eps) {
    detail::require_ordered(eps);
    return 0.5 * (eps[1] - eps[0]);
}

/// (1/3)[|0><0| (x) |0><0| + (|1><1| + |2><2|) (x) |1><1|]
inline BipartiteState cc_example_state() {
    ComplexMatrix rho = ComplexMatrix::Zero(6, 6);
    rho(0 * 2 + 0, 0 * 2 + 0) = 1.0 / 3.0;
    rho(1 * 2 + 1, 1 * 2 + 1) = 1.0 / 3.0;
    rho(2 * 2 + 1, 2 * 2 + 1) = 1.0 / 3.0;
    return BipartiteState(rho, 3, 2);
}

inline double cc_example_gain(const Spectrum3& eps) {
    detail::require_ordered(eps);
    return (eps[2] - eps[0]) / 3.0;
}

/// (1/d_S) sum_i |i><i| (x) |i><i|, requires d_A >= d_S.
inline BipartiteState classical_classical_state(Index d_system, Index d_ancilla) {
    if (d_ancilla < d_system) throw DimensionMismatch("classical-classical state needs d_A >= d_S");
    ComplexMatrix rho = ComplexMatrix::Zero(d_system * d_ancilla, d_system * d_ancilla);
    for (Index i = 0; i < d_system; ++i) rho(i * d_ancilla + i, i * d_ancilla + i) = 1.0 / static_cast<double>(d_system);
    return BipartiteState(rho, d_system, d_ancilla);
}

/// |Psi> = d_S^{-1/2} sum_i |i>|i>, requires d_A >= d_S.
inline BipartiteState maximally_entangled_state(Index d_system, Index d_ancilla) {
    if (d_ancilla < d_system) throw DimensionMismatch("maximally entangled state needs d_A >= d_S");
    ComplexVector psi = ComplexVector::Zero(d_system * d_ancilla);
    for (Index i = 0; i < d_system; ++i) psi(i * d_ancilla + i) = 1.0 / std::sqrt(static_cast<double>(d_system));
    return BipartiteState(ComplexMatrix(psi * psi.adjoint()), d_system, d_ancilla);
}

}  // namespace ergolab::analytic
