// optimizers.hpp
// MeasurementOptimizer strategies for the daemonic gain.

#pragma once

#include "ergolab/analytic.hpp"
#include "ergolab/oracle.hpp"
#include "ergolab/seesaw.hpp"

namespace ergolab {

/// Multi-start see-saw over general POVMs.
class SeeSawOptimizer : public MeasurementOptimizer {
public:
    explicit SeeSawOptimizer(SeeSawConfig config = {}) : config_(config) {}

    MeasurementChoice maximize(const BipartiteState& rho, const HermitianOperator& h) const override {
        SeeSawReport report = multi_start(rho, h, config_);
        const double value = daemonic_ergotropy(rho, h, report.final_povm).value;
        return {std::move(report.final_povm), value};
    }
    bool is_exact() const override { return false; }
    std::string_view name() const override { return "seesaw"; }

private:
    SeeSawConfig config_;
};

/// Two-outcome projective measurements on a qubit ancilla.
class QubitGridOptimizer : public MeasurementOptimizer {
public:
    explicit QubitGridOptimizer(int resolution = 720) : resolution_(resolution) {}

    MeasurementChoice maximize(const BipartiteState& rho, const HermitianOperator& h) const override {
        const oracle::GridSearchResult g = oracle::grid_search_qubit_pvm(rho, h, resolution_);
        return {g.measurement(), g.daemonic};
    }
    bool is_exact() const override { return false; }
    std::string_view name() const override { return "qubit-grid"; }

private:
    int resolution_;
};

/// Exact optimum for quantum-classical states; throws for other states.
class AnalyticQcOptimizer : public MeasurementOptimizer {
public:
    explicit AnalyticQcOptimizer(double tol = 1e-8) : tol_(tol) {}

    MeasurementChoice maximize(const BipartiteState& rho, const HermitianOperator& h) const override {
        const analytic::QcDetection det = analytic::detect_qc(rho, tol_);
        if (const auto* qc = std::get_if<analytic::QcDecomposition>(&det)) {
            analytic::QcOptimum opt = analytic::qc_daemonic_optimum(*qc, h);
            return {std::move(opt.measurement), opt.value};
        }
        throw std::invalid_argument("state is not quantum-classical (off-block residual " +
                                    std::to_string(std::get<analytic::NotQc>(det).residual) + ")");
    }
    bool is_exact() const override { return true; }
    std::string_view name() const override { return "analytic-qc"; }

private:
    double tol_;
};

/// Best rank-one projective measurement found by search.
class ExhaustivePvmOptimizer : public MeasurementOptimizer {
public:
    explicit ExhaustivePvmOptimizer(int samples = 2000, std::uint64_t seed = 0) : samples_(samples), seed_(seed) {}

    MeasurementChoice maximize(const BipartiteState& rho, const HermitianOperator& h) const override {
        const oracle::PvmSearchResult r = oracle::search_projective_measurement(rho, h, samples_, seed_);
        return {r.measurement(), r.daemonic};
    }
    bool is_exact() const override { return false; }
    std::string_view name() const override { return "exhaustive-pvm"; }

private:
    int samples_;
    std::uint64_t seed_;
};

struct GainSweepRow {
    double epsilon = 0.0;
    double gain_pvm_analytic = 0.0;
    double gain_trine_povm = 0.0;
    double gain_seesaw = 0.0;
};

/// Qutrit-qubit state with H = diag(0, 1, eps) for `steps` evenly spaced
/// values of eps in [eps_min, eps_max] (both ends included).
inline std::vector<GainSweepRow> qutrit_qubit_gain_sweep(double eps_min, double eps_max, int steps,
                                                         const SeeSawConfig& config = {}) {
    if (steps < 1) throw std::invalid_argument("sweep needs at least one step");
    if (!(eps_min >= 1.0) || !(eps_max >= eps_min))
        throw std::invalid_argument("sweep range must satisfy 1 <= eps_min <= eps_max");
    const BipartiteState rho = analytic::qutrit_qubit_state();
    std::vector<GainSweepRow> rows;
    for (int k = 0; k < steps; ++k) {
        const double eps = steps == 1 ? eps_min : eps_min + (eps_max - eps_min) * k / (steps - 1);
        const analytic::Spectrum3 spec{0.0, 1.0, eps};
        const HermitianOperator h = HermitianOperator::diagonal({0.0, 1.0, eps});
        GainSweepRow row;
        row.epsilon = eps;
        row.gain_pvm_analytic = analytic::qutrit_qubit_pvm_gain(spec);
        row.gain_trine_povm = analytic::qutrit_qubit_povm_gain(spec);
        row.gain_seesaw = multi_start(rho, h, config).gain();
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ergolab
