#include "support.hpp"

using namespace ergolab;
using namespace ergolab::testing;
using namespace ergolab::analytic;

namespace {

HermitianOperator diag3(const Spectrum3& e) { return HermitianOperator::diagonal({e[0], e[1], e[2]}); }

const QcDecomposition& as_qc(const QcDetection& d) { return std::get<QcDecomposition>(d); }

}  // namespace

TEST(DetectQc, ClassicalClassicalExample) {
    const QcDetection det = detect_qc(cc_example_state());
    ASSERT_TRUE(is_qc(det));
    const QcDecomposition& qc = as_qc(det);
    EXPECT_LE(qc.residual, 1e-15);
    ASSERT_EQ(qc.blocks.size(), 2u);
    // rho^A = diag(1/3, 2/3): descending order puts the |1> block first
    EXPECT_TRUE(MatrixNear(qc.blocks[0].matrix(), diag({0.0, 1.0 / 3.0, 1.0 / 3.0}), 1e-15));
    EXPECT_TRUE(MatrixNear(qc.blocks[1].matrix(), diag({1.0 / 3.0, 0.0, 0.0}), 1e-15));
}

TEST(DetectQc, MaximallyEntangledIsNotQc) {
    for (Index d : {2, 3}) {
        const QcDetection det = detect_qc(maximally_entangled_state(d, d));
        ASSERT_FALSE(is_qc(det));
        const double residual = std::get<NotQc>(det).residual;
        EXPECT_NEAR(residual, std::sqrt(static_cast<double>(d * (d - 1))) / static_cast<double>(d), 1e-12);
    }
}

TEST(DetectQc, ProductWithPureAncilla) {
    const ComplexMatrix rs = random_density(3, 3, 4).matrix();
    const QcDetection det = detect_qc(product_state(rs, ket_bra(2, 0, 0)));
    ASSERT_TRUE(is_qc(det));
    const auto& blocks = as_qc(det).blocks;
    EXPECT_TRUE(MatrixNear(blocks[0].matrix(), rs, 1e-14));
    EXPECT_NEAR(blocks[1].trace(), 0.0, 1e-15);
}

TEST(DetectQc, RecoversRandomQcStates) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto inst = random_qc_state(2 + static_cast<Index>(s % 3), 2 + static_cast<Index>(s % 2), s);
        const QcDetection det = detect_qc(inst.state);
        ASSERT_TRUE(is_qc(det)) << "seed " << s;
        double total = 0.0;
        for (const auto& b : as_qc(det).blocks) total += b.trace();
        EXPECT_NEAR(total, 1.0, 1e-9);
        const QcDetection given = detect_qc(inst.state, inst.ancilla_basis);
        ASSERT_TRUE(is_qc(given));
        for (std::size_t j = 0; j < inst.blocks.size(); ++j)
            EXPECT_TRUE(MatrixNear(as_qc(given).blocks[j].matrix(), inst.blocks[j].matrix(), 1e-12));
    }
}

TEST(DetectQc, CallerBasisOnDegenerateMarginal) {
    // rho^A = I/2, so only the supplied basis decides the verdict
    const BipartiteState rho = classical_classical_state(2, 2);
    EXPECT_TRUE(is_qc(detect_qc(rho, UnitaryOperator::identity(2))));
    const ComplexMatrix hadamard = (ComplexMatrix(2, 2) << 1, 1, 1, -1).finished() / std::sqrt(2.0);
    const QcDetection rotated = detect_qc(rho, UnitaryOperator(hadamard));
    EXPECT_FALSE(is_qc(rotated));
    EXPECT_GT(std::get<NotQc>(rotated).residual, 0.1);
}

TEST(QcOptimum, ClassicalClassicalGain) {
    for (const Spectrum3& e : {Spectrum3{0.0, 1.0, 2.0}, Spectrum3{-1.0, 0.5, 4.0}, Spectrum3{0.0, 0.0, 1.0}}) {
        const QcOptimum opt = qc_daemonic_optimum(as_qc(detect_qc(cc_example_state())), diag3(e));
        EXPECT_NEAR(opt.gain, cc_example_gain(e), 1e-12);
        EXPECT_EQ(opt.measurement.size(), 2u);
    }
}

TEST(QcOptimum, SingleBlockHasNoGain) {
    const ComplexMatrix rs = random_density(3, 2, 9).matrix();
    const HermitianOperator h = random_hermitian(3, 10);
    const QcOptimum opt = qc_daemonic_optimum(as_qc(detect_qc(product_state(rs, ket_bra(2, 1, 1)))), h);
    EXPECT_NEAR(opt.value, ergotropy(SubnormalizedState(rs), h).value, 1e-12);
    EXPECT_NEAR(opt.gain, 0.0, 1e-12);
}

TEST(QcOptimum, MeasurementAttainsValueAndSeeSawAgrees) {
    SeeSawConfig cfg;
    cfg.restarts = 5;
    cfg.max_iterations = 200;
    for (std::uint64_t s = 0; s < 6; ++s) {
        const auto inst = random_qc_state(3, 2, 40 + s);
        const HermitianOperator h = random_hermitian(3, 50 + s);
        const QcOptimum opt = qc_daemonic_optimum(as_qc(detect_qc(inst.state)), h);
        EXPECT_NEAR(daemonic_ergotropy(inst.state, h, opt.measurement).value, opt.value, 1e-10);
        cfg.seed = s;
        EXPECT_NEAR(multi_start(inst.state, h, cfg).objective(), opt.value, 1e-6);
    }
}

TEST(QcOptimum, OffBlockTermsDoNotContribute) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const BipartiteState rho = random_bipartite(3, 2, 3, 60 + s);
        const HermitianOperator h = random_hermitian(3, 70 + s);
        const ComplexMatrix basis = ergolab::detail::eigh_matrix(partial_trace(rho, Subsystem::Ancilla).matrix(), true).vectors;
        ComplexMatrix truncated = ComplexMatrix::Zero(6, 6);
        for (Index j = 0; j < 2; ++j) {
            const ComplexMatrix proj = basis.col(j) * basis.col(j).adjoint();
            const ComplexMatrix p = tensor(ComplexMatrix::Identity(3, 3), proj);
            truncated += p * rho.matrix() * p;
        }
        const Povm pvm = Povm::projective(basis);
        EXPECT_NEAR(daemonic_ergotropy(rho, h, pvm).value, daemonic_ergotropy(BipartiteState(truncated, 3, 2), h, pvm).value, 1e-10);
    }
}

TEST(GainUpperBound, Examples) {
    EXPECT_DOUBLE_EQ(gain_upper_bound(HermitianOperator::diagonal({0.0, 1.0}), 2), 0.5);
    EXPECT_NEAR(gain_upper_bound(HermitianOperator(ComplexMatrix(2.5 * ComplexMatrix::Identity(3, 3))), 3), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(gain_upper_bound(HermitianOperator::diagonal({0.0, 1.0, 2.0}), 3), 1.0);
    EXPECT_THROW(gain_upper_bound(HermitianOperator::identity(2), 3), DimensionMismatch);
}

TEST(GainUpperBound, AttainedByClassicalAndEntangledStates) {
    for (const auto& h : {HermitianOperator::diagonal({0.0, 1.0}), HermitianOperator::diagonal({-0.5, 2.0})}) {
        const double bound = gain_upper_bound(h, 2);
        EXPECT_NEAR(daemonic_gain(classical_classical_state(2, 2), h, AnalyticQcOptimizer()).value, bound, 1e-9);
        EXPECT_NEAR(daemonic_ergotropy(maximally_entangled_state(2, 2), h, Povm::computational(2)).value -
                        system_ergotropy(maximally_entangled_state(2, 2), h),
                    bound, 1e-9);
    }
    const HermitianOperator h3 = HermitianOperator::diagonal({0.0, 1.0, 2.5});
    const double bound3 = gain_upper_bound(h3, 3);
    EXPECT_NEAR(daemonic_gain(classical_classical_state(3, 3), h3, AnalyticQcOptimizer()).value, bound3, 1e-9);
    EXPECT_NEAR(daemonic_ergotropy(maximally_entangled_state(3, 3), h3, Povm::computational(3)).value, bound3, 1e-9);
}

TEST(QutritQubit, StateAndTrine) {
    const BipartiteState rho = qutrit_qubit_state();
    EXPECT_EQ(rho.dim_system(), 3);
    EXPECT_EQ(rho.dim_ancilla(), 2);
    EXPECT_NEAR(rho.state().purity(), 1.0 / 3.0, 1e-15);
    const Povm trine = symmetric_trine_povm();
    EXPECT_EQ(trine.size(), 3u);
    EXPECT_LE(trine.completeness_residual(), 1e-15);
    for (const auto& e : trine.effects()) EXPECT_NEAR(e.trace(), 2.0 / 3.0, 1e-15);
}

TEST(QutritQubit, ClosedFormsAtDegenerateTop) {
    const Spectrum3 e{0.0, 1.0, 1.0};
    EXPECT_NEAR(qutrit_qubit_pvm_gain(e), 1.0 / (2.0 * std::sqrt(3.0)), 1e-15);
    EXPECT_NEAR(qutrit_qubit_povm_gain(e), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(pure_state_gain_bound_3x2(e), 0.5, 1e-15);
    EXPECT_NEAR(oracle::grid_search_qubit_pvm(qutrit_qubit_state(), diag3(e)).gain, qutrit_qubit_pvm_gain(e), 1e-9);
}

TEST(QutritQubit, PovmBeatsPvmWindow) {
    const double threshold = std::sqrt(3.0) - 1.0;
    for (double e2 : {1.0, 1.2, 1.5, 2.0, 3.0})
        for (double e1 : {0.1, 0.5, 0.7, 0.8, 0.9, 1.0}) {
            if (e1 > e2) continue;
            const Spectrum3 e{0.0, e1, e2};
            const bool povm_wins = qutrit_qubit_povm_gain(e) > qutrit_qubit_pvm_gain(e);
            EXPECT_EQ(povm_wins, threshold * e2 < e1) << e1 << " " << e2;
        }
}

TEST(QutritQubit, LargeTopLevelFavoursPvm) {
    const Spectrum3 e{0.0, 1.0, 3.0};
    EXPECT_NEAR(qutrit_qubit_pvm_gain(e), 3.0 / (2.0 * std::sqrt(3.0)), 1e-15);
    EXPECT_NEAR(qutrit_qubit_povm_gain(e), 4.0 / 6.0, 1e-15);
    EXPECT_GT(qutrit_qubit_pvm_gain(e), qutrit_qubit_povm_gain(e));
}

TEST(QutritQubit, UnorderedSpectrumThrows) {
    EXPECT_THROW(qutrit_qubit_pvm_gain({1.0, 0.0, 2.0}), std::invalid_argument);
    EXPECT_THROW(qutrit_qubit_povm_gain({0.0, 2.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(pure_state_gain_bound_3x2({0.0, 2.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(cc_example_gain({3.0, 2.0, 1.0}), std::invalid_argument);
}

TEST(MixedBeatsPure, AboveRatioThreeHalves) {
    for (double eps : {1.0, 1.4, 1.5, 1.6, 2.0, 4.0}) {
        const Spectrum3 e{0.0, 1.0, eps};
        const bool mixed_wins = cc_example_gain(e) > pure_state_gain_bound_3x2(e);
        EXPECT_EQ(mixed_wins, eps > 1.5) << eps;
    }
}

TEST(States, RejectSmallAncilla) {
    EXPECT_THROW(classical_classical_state(3, 2), DimensionMismatch);
    EXPECT_THROW(maximally_entangled_state(3, 2), DimensionMismatch);
}
