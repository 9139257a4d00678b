// ergotropy.hpp
// Ergotropy, optimal extraction unitaries, daemonic ergotropy for a fixed
// measurement and the daemonic gain.

#pragma once

#include "ergolab/core.hpp"

#include <memory>
#include <string>
#include <string_view>

namespace ergolab {

/// Outcomes whose conditional state has trace at or below this contribute
/// zero ergotropy and use the identity as extraction unitary.
inline constexpr double kZeroProbability = 1e-12;

/// Ascending spectral decomposition of a Hamiltonian, reused across many
/// ergotropy evaluations with the same H.
struct Spectrum {
    RealVector energies;   // ascending
    ComplexMatrix basis;   // column k is the eigenvector of energies(k)

    explicit Spectrum(const HermitianOperator& h) {
        detail::Eigensystem es = detail::eigh_matrix(h.matrix(), false);
        energies = std::move(es.values);
        basis = std::move(es.vectors);
    }

    Index dim() const { return energies.size(); }
    double ground_energy() const { return energies(0); }
};

namespace detail {

struct RawErgotropy {
    double value = 0.0;
    double passive_energy = 0.0;
    ComplexMatrix unitary;
};

// Pairs the largest populations of gamma with the lowest energies:
// U = sum_k |eps_k><r_k|.
inline RawErgotropy ergotropy_raw(const ComplexMatrix& gamma, const ComplexMatrix& h, const Spectrum& spec) {
    const Index d = gamma.rows();
    RawErgotropy out;
    const double energy = (gamma * h).trace().real();
    if (gamma.trace().real() <= kZeroProbability) {
        out.passive_energy = energy;
        out.unitary = ComplexMatrix::Identity(d, d);
        return out;
    }
    const Eigensystem es = eigh_matrix(gamma, true);
    double passive = 0.0;
    for (Index k = 0; k < d; ++k) passive += es.values(k) * spec.energies(k);
    out.passive_energy = passive;
    out.value = std::max(0.0, energy - passive);
    out.unitary = spec.basis * es.vectors.adjoint();
    return out;
}

inline void require_same_dim(Index a, Index b, const char* what) {
    if (a != b) throw DimensionMismatch(std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace detail

struct ErgotropyResult {
    double value = 0.0;
    double passive_energy = 0.0;
    UnitaryOperator optimal_unitary;
};

struct DaemonicResult {
    double value = 0.0;
    std::vector<ErgotropyResult> per_outcome;
    Povm measurement;
};

inline UnitaryOperator optimal_extraction_unitary(const SubnormalizedState& rho, const HermitianOperator& h) {
    detail::require_same_dim(rho.dim(), h.dim(), "state vs Hamiltonian");
    return UnitaryOperator(detail::ergotropy_raw(rho.matrix(), h.matrix(), Spectrum(h)).unitary);
}

/// W(rho, H) = Tr(rho H) - min_U Tr(U rho U^dagger H). Subnormalized inputs
/// are evaluated as they are, so W(lambda rho) = lambda W(rho).
inline ErgotropyResult ergotropy(const SubnormalizedState& rho, const HermitianOperator& h) {
    detail::require_same_dim(rho.dim(), h.dim(), "state vs Hamiltonian");
    auto raw = detail::ergotropy_raw(rho.matrix(), h.matrix(), Spectrum(h));
    return {raw.value, raw.passive_energy, UnitaryOperator(raw.unitary)};
}

/// W_D(rho, H, M) = sum_i W(gamma_i, H).
inline DaemonicResult daemonic_ergotropy(const BipartiteState& rho, const HermitianOperator& h, const Povm& m) {
    detail::require_same_dim(h.dim(), rho.dim_system(), "Hamiltonian vs system");
    detail::require_same_dim(m.dim(), rho.dim_ancilla(), "POVM vs ancilla");
    const Spectrum spec(h);
    DaemonicResult out;
    out.measurement = m;
    for (const auto& e : m.effects()) {
        const ComplexMatrix gamma = detail::contract_ancilla(rho.matrix(), rho.dim_system(), rho.dim_ancilla(), e.matrix());
        auto raw = detail::ergotropy_raw(detail::hermitian_part(gamma), h.matrix(), spec);
        out.value += raw.value;
        out.per_outcome.push_back({raw.value, raw.passive_energy, UnitaryOperator(raw.unitary)});
    }
    return out;
}

namespace detail {

// Daemonic ergotropy from raw effect matrices, no validation.
inline double daemonic_value(const ComplexMatrix& rho, Index d_s, Index d_a, const ComplexMatrix& h,
                             const Spectrum& spec, std::span<const ComplexMatrix> effects) {
    double total = 0.0;
    for (const auto& e : effects)
        total += ergotropy_raw(hermitian_part(contract_ancilla(rho, d_s, d_a, e)), h, spec).value;
    return total;
}

}  // namespace detail

/// Best measurement found by a strategy together with its daemonic ergotropy.
struct MeasurementChoice {
    Povm povm;
    double daemonic_ergotropy = 0.0;
};

/// Strategy for max_M W_D(rho, H, M). Strategies that only search part of
/// the measurement set report is_exact() == false; their result is a lower
/// bound on the true maximum.
class MeasurementOptimizer {
public:
    virtual ~MeasurementOptimizer() = default;
    virtual MeasurementChoice maximize(const BipartiteState& rho, const HermitianOperator& h) const = 0;
    virtual bool is_exact() const = 0;
    virtual std::string_view name() const = 0;
};

struct DaemonicGain {
    double value = 0.0;        // best W_D minus W(rho^S, H)
    double daemonic = 0.0;     // best W_D found
    double ergotropy = 0.0;    // W(rho^S, H)
    Povm measurement;
    bool lower_bound = true;   // false only for exact strategies
    std::string strategy;
};

/// delta W = max_M W_D(rho, H, M) - W(rho^S, H), with max_M delegated to `optimizer`.
inline DaemonicGain daemonic_gain(const BipartiteState& rho, const HermitianOperator& h,
                                  const MeasurementOptimizer& optimizer) {
    detail::require_same_dim(h.dim(), rho.dim_system(), "Hamiltonian vs system");
    const double w = ergotropy(partial_trace(rho, Subsystem::System), h).value;
    MeasurementChoice best = optimizer.maximize(rho, h);
    DaemonicGain out;
    out.daemonic = best.daemonic_ergotropy;
    out.ergotropy = w;
    out.value = best.daemonic_ergotropy - w;
    out.measurement = std::move(best.povm);
    out.lower_bound = !optimizer.is_exact();
    out.strategy = std::string(optimizer.name());
    return out;
}

}  // namespace ergolab
