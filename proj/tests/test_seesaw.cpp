#include "support.hpp"

#include <numbers>

using namespace ergolab;
using namespace ergolab::testing;

namespace {

HermitianOperator qutrit_h() { return HermitianOperator::diagonal({0.0, 1.0, 1.0}); }

SeeSawConfig quick(int restarts = 3, std::uint64_t seed = 0) {
    SeeSawConfig c;
    c.restarts = restarts;
    c.seed = seed;
    c.max_iterations = 200;
    return c;
}

}  // namespace

TEST(TauOperators, ProductStateFactorizes) {
    const ComplexMatrix rs = random_density(3, 2, 1).matrix();
    const ComplexMatrix ra = random_density(2, 2, 2).matrix();
    const HermitianOperator h = random_hermitian(3, 3);
    const std::vector<UnitaryOperator> us{haar_random_unitary(3, 4), haar_random_unitary(3, 5)};
    const auto taus = tau_operators(product_state(rs, ra), h, us);
    for (std::size_t i = 0; i < us.size(); ++i) {
        const ComplexMatrix u = us[i].matrix();
        EXPECT_TRUE(MatrixNear(taus[i].matrix(), (rs * u.adjoint() * h.matrix() * u).trace() * ra, 1e-13));
    }
}

TEST(TauOperators, IdentityUnitariesGiveConstantFamily) {
    const BipartiteState rho = random_bipartite(3, 2, 6, 7);
    const HermitianOperator h = random_hermitian(3, 8);
    const auto taus = tau_operators(rho, h, std::vector<UnitaryOperator>(4, UnitaryOperator::identity(3)));
    const ComplexMatrix expected = ergolab::detail::contract_system(rho.matrix(), 3, 2, h.matrix());
    for (const auto& t : taus) EXPECT_TRUE(MatrixNear(t.matrix(), expected, 1e-14));
}

TEST(TauOperators, ReproduceEnergyAfterExtraction) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const BipartiteState rho = random_bipartite(3, 2, 3, 20 + s);
        const HermitianOperator h = random_hermitian(3, 30 + s);
        const Povm m = oracle::random_povm(2, 4, 40 + s);
        std::vector<UnitaryOperator> us;
        for (std::uint64_t i = 0; i < 4; ++i) us.push_back(haar_random_unitary(3, 50 + 10 * s + i));
        const auto taus = tau_operators(rho, h, us);
        const auto gammas = conditional_states(rho, m);
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            lhs += (taus[i].matrix() * m[i].matrix()).trace().real();
            const ComplexMatrix u = us[i].matrix();
            rhs += (u * gammas[i].matrix() * u.adjoint() * h.matrix()).trace().real();
        }
        EXPECT_NEAR(lhs, rhs, 1e-10);
    }
}

TEST(TauOperators, QutritQubitOptimumObjective) {
    const BipartiteState rho = analytic::qutrit_qubit_state();
    const HermitianOperator h = qutrit_h();
    const DaemonicResult trine = daemonic_ergotropy(rho, h, analytic::symmetric_trine_povm());
    std::vector<UnitaryOperator> us;
    for (const auto& r : trine.per_outcome) us.push_back(r.optimal_unitary);
    const auto taus = tau_operators(rho, h, us);
    double residual = 0.0;
    for (std::size_t i = 0; i < 3; ++i) residual += (taus[i].matrix() * analytic::symmetric_trine_povm()[i].matrix()).trace().real();
    const double mean_energy = (partial_trace(rho, Subsystem::System).matrix() * h.matrix()).trace().real();
    EXPECT_NEAR(mean_energy - residual, system_ergotropy(rho, h) + 1.0 / 3.0, 1e-12);
}

TEST(TauOperators, DimensionMismatchThrows) {
    EXPECT_THROW(tau_operators(random_bipartite(3, 2, 1, 0), qutrit_h(), {UnitaryOperator::identity(2)}), DimensionMismatch);
}

TEST(SeeSaw, PureProductStateConvergesQuickly) {
    const BipartiteState rho = pure_product_state(3, 2, 60);
    const HermitianOperator h = qutrit_h();
    const SeeSawReport rep = see_saw(rho, h, quick(), RandomInit{1});
    EXPECT_TRUE(rep.converged);
    EXPECT_LE(rep.iterations(), 2);
    EXPECT_NEAR(rep.gain(), 0.0, 1e-9);
}

TEST(SeeSaw, QutritQubitReachesOneThird) {
    const SeeSawReport rep = multi_start(analytic::qutrit_qubit_state(), qutrit_h(), SeeSawConfig{});
    EXPECT_NEAR(rep.gain(), 1.0 / 3.0, 1e-6);
    EXPECT_EQ(rep.restart_objectives.size(), 20u);
}

TEST(SeeSaw, AdversarialInitStallsAtProjectiveOptimum) {
    const BipartiteState rho = analytic::qutrit_qubit_state();
    const auto init = adversarial_init(rho, qutrit_h());
    const SeeSawReport rep = see_saw(rho, qutrit_h(), SeeSawConfig{}, GivenInit{init});
    EXPECT_NEAR(rep.gain(), 1.0 / (2.0 * std::sqrt(3.0)), 1e-6);
    EXPECT_LT(rep.gain(), 1.0 / 3.0 - 1e-3);
}

TEST(SeeSaw, AdversarialInitShape) {
    const BipartiteState rho = analytic::qutrit_qubit_state();
    const auto init = adversarial_init(rho, qutrit_h());
    ASSERT_EQ(init.size(), 4u);
    EXPECT_TRUE(MatrixNear(init[1].matrix(), init[2].matrix(), 0.0));
    EXPECT_TRUE(MatrixNear(init[1].matrix(), init[3].matrix(), 0.0));
    const auto taus = tau_operators(rho, qutrit_h(), init);
    for (std::size_t i = 2; i < 4; ++i) EXPECT_TRUE(MatrixNear(taus[i].matrix(), taus[1].matrix(), 1e-12));
}

TEST(SeeSaw, SingleRestartMatchesDerivedSeed) {
    const BipartiteState rho = random_bipartite(3, 2, 2, 70);
    const HermitianOperator h = random_hermitian(3, 71);
    const SeeSawConfig cfg = quick(1, 99);
    const SeeSawReport a = multi_start(rho, h, cfg);
    const SeeSawReport b = see_saw(rho, h, cfg, RandomInit{derive_seed(99, 0)});
    EXPECT_EQ(a.objective_trace, b.objective_trace);
    EXPECT_EQ(a.restart_index, 0);
}

TEST(SeeSaw, BestOfRestartsDominatesEachRestart) {
    const BipartiteState rho = random_bipartite(3, 3, 3, 80);
    const SeeSawReport rep = multi_start(rho, random_hermitian(3, 81), quick(5, 3));
    for (double v : rep.restart_objectives) EXPECT_GE(rep.objective(), v);
    EXPECT_EQ(rep.objective(), rep.restart_objectives[static_cast<std::size_t>(rep.restart_index)]);
}

TEST(SeeSaw, MonotoneBoundedAndReproducible) {
    for (std::uint64_t s = 0; s < 8; ++s) {
        const Index ds = 2 + static_cast<Index>(s % 2), da = 2 + static_cast<Index>(s % 3 == 0);
        const BipartiteState rho = random_bipartite(ds, da, 1 + static_cast<Index>(s % 3), 90 + s);
        const HermitianOperator h = random_hermitian(ds, 100 + s);
        const SeeSawReport rep = see_saw(rho, h, quick(), RandomInit{s});
        for (std::size_t k = 1; k < rep.objective_trace.size(); ++k)
            EXPECT_GE(rep.objective_trace[k], rep.objective_trace[k - 1] - 1e-10);
        const double bound = (partial_trace(rho, Subsystem::System).matrix() * h.matrix()).trace().real() -
                             ergolab::detail::eigenvalues_ascending(h.matrix())(0);
        for (double v : rep.objective_trace) EXPECT_LE(v, bound + 1e-8);
        EXPECT_NEAR(daemonic_ergotropy(rho, h, rep.final_povm).value, rep.objective(), 1e-9);
        for (double g : rep.duality_gaps) EXPECT_LE(g, 1e-9);
        for (const auto& e : rep.final_povm.effects()) EXPECT_GE(e.trace(), kPruneTrace);
        EXPECT_LE(rep.final_povm.completeness_residual(), 1e-8);
        EXPECT_EQ(see_saw(rho, h, quick(), RandomInit{s}).objective_trace, rep.objective_trace);
    }
}

TEST(SeeSaw, ExtraEffectsDoNotHelp) {
    for (std::uint64_t s = 0; s < 4; ++s) {
        const Index da = 2 + static_cast<Index>(s % 2);
        const BipartiteState rho = random_bipartite(3, da, 2, 110 + s);
        const HermitianOperator h = random_hermitian(3, 120 + s);
        SeeSawConfig base = quick(4, s);
        SeeSawConfig more = base;
        more.n_effects = static_cast<std::size_t>(da * da + 3);
        EXPECT_LE(multi_start(rho, h, more).objective(), multi_start(rho, h, base).objective() + 1e-6);
    }
}

TEST(SeeSaw, AtLeastProjectiveGridOnQubitAncilla) {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const BipartiteState rho = random_bipartite(3, 2, 1 + static_cast<Index>(s % 3), 130 + s);
        const HermitianOperator h = random_hermitian(3, 140 + s);
        const double grid = oracle::grid_search_qubit_pvm(rho, h, 180).daemonic;
        EXPECT_GE(multi_start(rho, h, quick(5, s)).objective(), grid - 1e-6);
    }
}

TEST(SeeSaw, RejectsBadArguments) {
    const BipartiteState rho = random_bipartite(3, 2, 1, 0);
    SeeSawConfig cfg = quick();
    cfg.restarts = 0;
    EXPECT_THROW(multi_start(rho, qutrit_h(), cfg), std::invalid_argument);
    EXPECT_THROW(see_saw(rho, qutrit_h(), quick(), GivenInit{}), std::invalid_argument);
    EXPECT_THROW(see_saw(rho, HermitianOperator::identity(2), quick(), RandomInit{0}), DimensionMismatch);
}
