// Daemonic gain of the qutrit-qubit state: projective versus general
// measurements, and what an unlucky see-saw start looks like.

#include "ergolab/ergolab.hpp"

#include <cstdio>

int main() {
    using namespace ergolab;

    const BipartiteState rho = analytic::qutrit_qubit_state();
    const HermitianOperator h = HermitianOperator::diagonal({0.0, 1.0, 1.0});

    std::printf("W(rho_S)                 %.10f\n", ergotropy(partial_trace(rho, Subsystem::System), h).value);

    const DaemonicGain grid = daemonic_gain(rho, h, QubitGridOptimizer{});
    std::printf("best projective gain     %.10f\n", grid.value);

    const DaemonicResult trine = daemonic_ergotropy(rho, h, analytic::symmetric_trine_povm());
    std::printf("trine POVM W_D           %.10f\n", trine.value);

    SeeSawConfig config;
    config.restarts = 10;
    const SeeSawReport best = multi_start(rho, h, config);
    std::printf("see-saw gain             %.10f (%d rounds, %zu effects)\n", best.gain(), best.iterations(),
                best.final_povm.size());

    const SeeSawReport stuck = see_saw(rho, h, config, GivenInit{adversarial_init(rho, h)});
    std::printf("adversarial start gain   %.10f\n", stuck.gain());
}
