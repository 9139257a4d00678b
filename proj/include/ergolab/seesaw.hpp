// seesaw.hpp
// Alternating optimization of the daemonic ergotropy over POVMs. For fixed
// conditional unitaries U_i the best measurement solves the measurement SDP
// with tau_i = Tr_S[rho (U_i^dagger H U_i (x) I)]; for a fixed measurement
// the best unitaries are the spectral pairings of the conditional states.
// Both half-steps are exact minimizations, so the objective never decreases.

#pragma once

#include "ergolab/ergotropy.hpp"
#include "ergolab/oracle.hpp"
#include "ergolab/random.hpp"
#include "ergolab/sdp.hpp"

#include <variant>

namespace ergolab {

struct SeeSawConfig {
    std::size_t n_effects = 0;  // 0 selects d_A^2
    int max_iterations = 500;
    double convergence_tol = 1e-10;
    int restarts = 20;
    std::uint64_t seed = 0;
    double sdp_gap_tol = 1e-9;
};

struct RandomInit {
    std::uint64_t seed = 0;
};

struct GivenInit {
    std::vector<UnitaryOperator> unitaries;
};

using SeeSawInit = std::variant<RandomInit, GivenInit>;

/// Effects with trace below this are dropped from the reported POVM.
inline constexpr double kPruneTrace = 1e-10;

struct SeeSawReport {
    std::vector<double> objective_trace;  // W_D after each round
    Povm final_povm;
    std::vector<UnitaryOperator> final_unitaries;
    bool converged = false;
    std::vector<double> duality_gaps;
    int restart_index = 0;
    double ergotropy = 0.0;                  // W(rho^S, H), the trivial-measurement baseline
    std::vector<double> restart_objectives;  // filled by multi_start

    double objective() const { return objective_trace.empty() ? 0.0 : objective_trace.back(); }
    double gain() const { return objective() - ergotropy; }
    int iterations() const { return static_cast<int>(objective_trace.size()); }
};

namespace detail {

inline std::vector<ComplexMatrix> tau_matrices(const BipartiteState& rho, const ComplexMatrix& h,
                                               const std::vector<ComplexMatrix>& unitaries) {
    std::vector<ComplexMatrix> taus;
    taus.reserve(unitaries.size());
    for (const auto& u : unitaries)
        taus.push_back(hermitian_part(contract_system(rho.matrix(), rho.dim_system(), rho.dim_ancilla(), u.adjoint() * h * u)));
    return taus;
}

struct MeasurementRound {
    double value = 0.0;
    std::vector<ComplexMatrix> unitaries;
};

inline MeasurementRound evaluate_measurement(const BipartiteState& rho, const ComplexMatrix& h, const Spectrum& spec,
                                             const std::vector<ComplexMatrix>& effects) {
    MeasurementRound out;
    for (const auto& e : effects) {
        RawErgotropy r = ergotropy_raw(hermitian_part(contract_ancilla(rho.matrix(), rho.dim_system(), rho.dim_ancilla(), e)), h, spec);
        out.value += r.value;
        out.unitaries.push_back(std::move(r.unitary));
    }
    return out;
}

}  // namespace detail

/// tau_i = Tr_S[rho (U_i^dagger H U_i (x) I_A)], so that
/// sum_i Tr(tau_i E_i) = sum_i Tr(U_i gamma_i U_i^dagger H).
inline std::vector<HermitianOperator> tau_operators(const BipartiteState& rho, const HermitianOperator& h,
                                                    const std::vector<UnitaryOperator>& unitaries) {
    detail::require_same_dim(h.dim(), rho.dim_system(), "Hamiltonian vs system");
    std::vector<ComplexMatrix> us;
    for (const auto& u : unitaries) {
        detail::require_same_dim(u.dim(), rho.dim_system(), "unitary vs system");
        us.push_back(u.matrix());
    }
    std::vector<HermitianOperator> out;
    for (auto& t : detail::tau_matrices(rho, h.matrix(), us)) out.emplace_back(t);
    return out;
}

inline SeeSawReport see_saw(const BipartiteState& rho, const HermitianOperator& h, const SeeSawConfig& config,
                            const SeeSawInit& init) {
    detail::require_same_dim(h.dim(), rho.dim_system(), "Hamiltonian vs system");
    const Index ds = rho.dim_system();
    const Index da = rho.dim_ancilla();

    std::vector<ComplexMatrix> unitaries;
    if (const auto* given = std::get_if<GivenInit>(&init)) {
        if (given->unitaries.empty()) throw std::invalid_argument("see-saw needs at least one initial unitary");
        for (const auto& u : given->unitaries) {
            detail::require_same_dim(u.dim(), ds, "initial unitary vs system");
            unitaries.push_back(u.matrix());
        }
    } else {
        const std::size_t n = config.n_effects == 0 ? static_cast<std::size_t>(da * da) : config.n_effects;
        const std::uint64_t seed = std::get<RandomInit>(init).seed;
        for (std::size_t i = 0; i < n; ++i) unitaries.push_back(detail::haar_unitary_matrix(ds, derive_seed(seed, i)));
    }

    const Spectrum spec(h);
    SeeSawReport report;
    report.ergotropy = ergotropy(partial_trace(rho, Subsystem::System), h).value;
    std::vector<ComplexMatrix> effects;
    std::vector<ComplexMatrix> effect_unitaries;

    for (int it = 0; it < config.max_iterations; ++it) {
        const auto taus = detail::tau_matrices(rho, h.matrix(), unitaries);
        detail::RawSdpSolution sol = detail::solve_measurement_sdp_raw(taus, config.sdp_gap_tol);
        detail::MeasurementRound round = detail::evaluate_measurement(rho, h.matrix(), spec, sol.effects);
        report.duality_gaps.push_back(sol.primal - sol.dual);

        if (!report.objective_trace.empty()) {
            const double previous = report.objective_trace.back();
            if (round.value <= previous) {
                // No improvement within SDP accuracy: the previous measurement is a fixed point.
                report.objective_trace.push_back(previous);
                report.converged = true;
                break;
            }
            report.objective_trace.push_back(round.value);
            effects = std::move(sol.effects);
            effect_unitaries = round.unitaries;
            unitaries = std::move(round.unitaries);
            if (round.value - previous < config.convergence_tol) {
                report.converged = true;
                break;
            }
            continue;
        }
        report.objective_trace.push_back(round.value);
        effects = std::move(sol.effects);
        effect_unitaries = round.unitaries;
        unitaries = std::move(round.unitaries);
    }

    std::vector<HermitianOperator> kept;
    for (std::size_t i = 0; i < effects.size(); ++i) {
        if (effects[i].trace().real() < kPruneTrace) continue;
        kept.emplace_back(effects[i]);
        report.final_unitaries.emplace_back(effect_unitaries[i]);
    }
    report.final_povm = Povm(std::move(kept));
    return report;
}

/// Initialization that traps the see-saw at the best d-outcome projective
/// measurement: with V_1..V_d the optimal unitaries of that measurement,
/// U_i = V_i for i < d and U_i = V_d for i = d..d^2. The last d^2 - d + 1 tau
/// operators coincide, so the SDP never splits that outcome.
inline std::vector<UnitaryOperator> adversarial_init(const BipartiteState& rho, const HermitianOperator& h,
                                                     std::uint64_t search_seed = 0) {
    const Index da = rho.dim_ancilla();
    const oracle::PvmSearchResult pvm = oracle::search_projective_measurement(rho, h, 2000, search_seed);
    const DaemonicResult dr = daemonic_ergotropy(rho, h, pvm.measurement());
    std::vector<UnitaryOperator> out;
    for (Index i = 0; i + 1 < da; ++i) out.push_back(dr.per_outcome[static_cast<std::size_t>(i)].optimal_unitary);
    for (Index i = da - 1; i < da * da; ++i) out.push_back(dr.per_outcome[static_cast<std::size_t>(da - 1)].optimal_unitary);
    return out;
}

/// Best of `config.restarts` randomly initialized runs; restart r uses seed
/// derive_seed(config.seed, r). Ties go to the lowest restart index.
inline SeeSawReport multi_start(const BipartiteState& rho, const HermitianOperator& h, const SeeSawConfig& config) {
    if (config.restarts < 1) throw std::invalid_argument("multi-start needs at least one restart");
    SeeSawReport best;
    std::vector<double> objectives;
    for (int r = 0; r < config.restarts; ++r) {
        SeeSawReport run = see_saw(rho, h, config, RandomInit{derive_seed(config.seed, static_cast<std::uint64_t>(r))});
        run.restart_index = r;
        objectives.push_back(run.objective());
        if (r == 0 || run.objective() > best.objective()) best = std::move(run);
    }
    best.restart_objectives = std::move(objectives);
    return best;
}

}  // namespace ergolab
