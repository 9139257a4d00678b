#include "support.hpp"

using namespace ergolab;
using namespace ergolab::testing;

namespace {

double objective(const std::vector<HermitianOperator>& taus, const Povm& m) {
    double v = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) v += (taus[i].matrix() * m[i].matrix()).trace().real();
    return v;
}

void expect_feasible(const Povm& m) {
    EXPECT_LE(m.completeness_residual(), 1e-8);
    for (const auto& e : m.effects()) EXPECT_GE(ergolab::detail::eigenvalues_ascending(e.matrix())(0), -1e-9);
}

}  // namespace

TEST(MeasurementSdp, IdenticalTausGiveUniformPovm) {
    const HermitianOperator tau = random_hermitian(3, 4);
    const std::vector<HermitianOperator> taus(4, tau);
    const SdpSolution sol = solve_measurement_sdp(taus);
    expect_feasible(sol.povm);
    EXPECT_NEAR(sol.primal, tau.trace(), 1e-9);
    EXPECT_LE(sol.gap(), 1e-9);
    for (const auto& e : sol.povm.effects()) EXPECT_TRUE(MatrixNear(e.matrix(), ComplexMatrix::Identity(3, 3) / 4.0, 1e-12));
}

TEST(MeasurementSdp, TwoEffectClosedForm) {
    const HermitianOperator tau1 = random_hermitian(2, 10);
    const HermitianOperator tau0(ComplexMatrix(tau1.matrix() + pauli_z()));
    const std::vector<HermitianOperator> taus{tau0, tau1};
    const SdpSolution sol = solve_measurement_sdp(taus);
    EXPECT_NEAR(sol.primal, tau1.trace() - 1.0, 1e-8);
    EXPECT_NEAR(sol.primal, oracle::two_effect_sdp_oracle(tau0, tau1), 1e-8);
    EXPECT_TRUE(MatrixNear(sol.povm[0].matrix(), ket_bra(2, 1, 1), 1e-6));
}

TEST(MeasurementSdp, MatchesTwoEffectOracleOnRandomPairs) {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const Index d = 2 + static_cast<Index>(s % 3);
        const std::vector<HermitianOperator> taus{random_hermitian(d, 100 + s), random_hermitian(d, 200 + s)};
        const SdpSolution sol = solve_measurement_sdp(taus);
        expect_feasible(sol.povm);
        EXPECT_NEAR(sol.primal, oracle::two_effect_sdp_oracle(taus[0], taus[1]), 1e-8);
        EXPECT_NEAR(sol.primal, objective(taus, sol.povm), 1e-12);
        EXPECT_LE(sol.gap(), 1e-9);
        EXPECT_GE(sol.gap(), -1e-9);
    }
}

TEST(MeasurementSdp, PrimalNotWorseThanRandomPovms) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        std::vector<HermitianOperator> taus;
        for (std::uint64_t i = 0; i < 4; ++i) taus.push_back(random_hermitian(2, 300 + 10 * s + i));
        const SdpSolution sol = solve_measurement_sdp(taus);
        for (std::uint64_t t = 0; t < 20; ++t)
            EXPECT_LE(sol.primal, objective(taus, oracle::random_povm(2, 4, 5000 + 100 * s + t)) + 1e-9);
    }
}

TEST(MeasurementSdp, QutritQubitFixedPoint) {
    const BipartiteState rho = analytic::qutrit_qubit_state();
    const HermitianOperator h = HermitianOperator::diagonal({0.0, 1.0, 1.0});
    SeeSawConfig cfg;
    const SeeSawReport rep = multi_start(rho, h, cfg);
    const auto taus = tau_operators(rho, h, rep.final_unitaries);
    const SdpSolution sol = solve_measurement_sdp(taus);
    const double mean_energy = (partial_trace(rho, Subsystem::System).matrix() * h.matrix()).trace().real();
    // primal is the energy left after extraction
    EXPECT_NEAR(mean_energy - sol.primal, system_ergotropy(rho, h) + 1.0 / 3.0, 1e-8);
}

TEST(MeasurementSdp, RejectsBadInput) {
    EXPECT_THROW(solve_measurement_sdp(std::vector<HermitianOperator>{}), std::invalid_argument);
    const std::vector<HermitianOperator> mixed{random_hermitian(2, 1), random_hermitian(3, 2)};
    EXPECT_THROW(solve_measurement_sdp(mixed), std::invalid_argument);
}

TEST(MeasurementSdp, ReportsUnreachableGap) {
    std::vector<HermitianOperator> taus;
    for (std::uint64_t i = 0; i < 4; ++i) taus.push_back(random_hermitian(3, 40 + i));
    try {
        solve_measurement_sdp(taus, 1e-30);
        FAIL() << "expected SdpFailure";
    } catch (const SdpFailure& e) {
        EXPECT_GT(e.gap(), 1e-30);
    }
}
