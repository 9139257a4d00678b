// validation.hpp
// Acceptance checks. Each returns a pass/fail verdict with a one-line detail;
// run_suite groups them for the CLI and the acceptance binary.

#pragma once

#include "ergolab/analytic.hpp"
#include "ergolab/multipartite.hpp"
#include "ergolab/optimizers.hpp"
#include "ergolab/oracle.hpp"
#include "ergolab/seesaw.hpp"

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <functional>

namespace ergolab::validation {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    std::uint64_t seed = 0;
};

namespace detail {

inline std::string format(const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return buf;
}

inline std::uint64_t seed_for(const Options& o, std::uint64_t block, std::uint64_t i) {
    return derive_seed(o.seed, block * 1000003ULL + i);
}

// Collects failures; the detail reports the first one.
struct Checker {
    bool ok = true;
    std::string first_failure;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            first_failure = what;
        }
    }
};

inline CriterionResult finish(int id, const char* name, const Checker& c, const std::string& summary,
                              std::chrono::steady_clock::time_point start) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    r.passed = c.ok;
    r.detail = c.ok ? summary : c.first_failure;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

inline double system_ergotropy(const BipartiteState& rho, const HermitianOperator& h) {
    return ergotropy(partial_trace(rho, Subsystem::System), h).value;
}

}  // namespace detail

inline CriterionResult qutrit_qubit_optimum(const Options& o) {
    const auto start = std::chrono::steady_clock::now();
    detail::Checker c;
    const BipartiteState rho = analytic::qutrit_qubit_state();
    const HermitianOperator h = HermitianOperator::diagonal({0.0, 1.0, 1.0});
    SeeSawConfig config;
    config.seed = o.seed;
    const double seesaw = multi_start(rho, h, config).gain();
    const double grid = oracle::grid_search_qubit_pvm(rho, h, 720).gain;
    c.require(std::abs(seesaw - 1.0 / 3.0) <= 1e-6, detail::format("see-saw gain %.10f, expected 1/3", seesaw));
    c.require(std::abs(grid - 1.0 / (2.0 * std::sqrt(3.0))) <= 1e-4,
              detail::format("grid gain %.10f, expected %.10f", grid, 1.0 / (2.0 * std::sqrt(3.0))));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.require(secs < 30.0, detail::format("took %.1f s", secs));
    return detail::finish(1, "qutrit-qubit optimum", c,
                          detail::format("see-saw gain %.10f, grid PVM gain %.10f", seesaw, grid), start);
}

inline CriterionResult gain_sweep(const Options& o) {
    const auto start = std::chrono::steady_clock::now();
    detail::Checker c;
    SeeSawConfig config;
    config.seed = o.seed;
    const auto rows = qutrit_qubit_gain_sweep(1.0, 3.0, 21, config);
    const double s3 = std::sqrt(3.0);
    double worst_margin = std::numeric_limits<double>::infinity();
    int crossings = 0;
    double lo = 0.0, hi = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        c.require(std::abs(r.gain_pvm_analytic - r.epsilon / (2.0 * s3)) <= 1e-15 * std::max(1.0, r.epsilon),
                  detail::format("PVM column off at eps=%.3f", r.epsilon));
        c.require(std::abs(r.gain_trine_povm - (1.0 + r.epsilon) / 6.0) <= 1e-15 * std::max(1.0, r.epsilon),
                  detail::format("trine column off at eps=%.3f", r.epsilon));
        const double margin = r.gain_seesaw - std::max(r.gain_pvm_analytic, r.gain_trine_povm);
        worst_margin = std::min(worst_margin, margin);
        c.require(margin >= -1e-6, detail::format("see-saw %.10f below closed forms at eps=%.3f", r.gain_seesaw, r.epsilon));
        if (k > 0) {
            const double a = rows[k - 1].gain_pvm_analytic - rows[k - 1].gain_trine_povm;
            const double b = r.gain_pvm_analytic - r.gain_trine_povm;
            if ((a < 0.0) != (b < 0.0)) {
                ++crossings;
                lo = rows[k - 1].epsilon;
                hi = r.epsilon;
            }
        }
    }
    c.require(rows.size() == 21, "expected 21 rows");
    c.require(crossings == 1, detail::format("%d crossings between PVM and trine columns", crossings));
    c.require(lo >= 1.3 - 1e-9 && hi <= 1.4 + 1e-9, detail::format("crossover bracketed in [%.3f, %.3f]", lo, hi));
    return detail::finish(2, "gain sweep over the highest level", c,
                          detail::format("21 rows, crossover in [%.2f, %.2f], min see-saw margin %.2e", lo, hi, worst_margin),
                          start);
}

inline CriterionResult adversarial_stall(const Options& o) {
    const auto start = std::chrono::steady_clock::now();
    detail::Checker c;
    const BipartiteState rho = analytic::qutrit_qubit_state();
    const HermitianOperator h = HermitianOperator::diagonal({0.0, 1.0, 1.0});
    const auto init = adversarial_init(rho, h, o.seed);
    const auto taus = tau_operators(rho, h, init);
    double collapse = 0.0;
    for (std::size_t i = 2; i < taus.size(); ++i)
        collapse = std::max(collapse, ergolab::detail::max_abs(taus[i].matrix() - taus[1].matrix()));
    SeeSawConfig config;
    config.convergence_tol = 1e-10;
    const SeeSawReport report = see_saw(rho, h, config, GivenInit{init});
    const double target = 1.0 / (2.0 * std::sqrt(3.0));
    c.require(init.size() == 4, "expected 4 initial unitaries");
    c.require(collapse <= 1e-12, detail::format("tau operators differ by %.2e", collapse));
    c.require(report.converged, "see-saw did not converge");
    c.require(std::abs(report.gain() - target) <= 1e-6, detail::format("stalled at %.10f, expected %.10f", report.gain(), target));
    c.require(report.gain() < 1.0 / 3.0 - 1e-3, "reached the POVM optimum");
    return detail::finish(3, "adversarial initialization stall", c,
                          detail::format("stalled at gain %.10f after %d rounds", report.gain(), report.iterations()), start);
}

inline CriterionResult quantum_classical_optimum(const Options& o) {
    const auto start = std::chrono::steady_clock::now();
    detail::Checker c;
    SeeSawConfig config;
    config.restarts = 3;
    config.max_iterations = 200;
    double worst_excess = -std::numeric_limits<double>::infinity();
    double worst_pvm = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Index ds = 2 + i % 3;
        const Index da = 2 + (i / 3) % 2;
        const RandomQcInstance inst = random_qc_state(ds, da, detail::seed_for(o, 4, static_cast<std::uint64_t>(i)));
        const HermitianOperator h = random_hermitian(ds, detail::seed_for(o, 40, static_cast<std::uint64_t>(i)));
        const analytic::QcDetection det = analytic::detect_qc(inst.state);
        const auto* qc = std::get_if<analytic::QcDecomposition>(&det);
        c.require(qc != nullptr, detail::format("instance %d not detected as quantum-classical", i));
        if (!qc) continue;
        const analytic::QcOptimum opt = analytic::qc_daemonic_optimum(*qc, h);
        const double pvm = daemonic_ergotropy(inst.state, h, opt.measurement).value;
        config.seed = detail::seed_for(o, 41, static_cast<std::uint64_t>(i));
        const double seesaw = multi_start(inst.state, h, config).objective();
        worst_excess = std::max(worst_excess, seesaw - opt.value);
        worst_pvm = std::max(worst_pvm, std::abs(pvm - opt.value));
        c.require(opt.value >= seesaw - 1e-6, detail::format("instance %d: see-saw %.10f exceeds %.10f", i, seesaw, opt.value));
        c.require(std::abs(pvm - opt.value) <= 1e-10, detail::format("instance %d: basis PVM off by %.2e", i, pvm - opt.value));
    }
    return detail::finish(4, "quantum-classical optimum", c,
                          detail::format("100 states, max see-saw excess %.2e, max PVM deviation %.2e", worst_excess, worst_pvm),
                          start);
}

inline CriterionResult gain_bounds(const Options& o) {
    const auto start = std::chrono::steady_clock::now();
    detail::Checker c;
    SeeSawConfig config;
    config.restarts = 2;
    config.max_iterations = 60;
    double min_gain = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
    for (int i = 0; i < 200; ++i) {
        const Index ds = 2 + i % 2;
        const Index da = 2 + (i / 2) % 2;
        const Index rank = 1 + (i / 4) % (ds * da);
        const BipartiteState rho = random_bipartite(ds, da, rank, detail::seed_for(o, 5, static_cast<std::uint64_t>(i)));
        const HermitianOperator h = random_hermitian(ds, detail::seed_for(o, 50, static_cast<std::uint64_t>(i)));
        config.seed = detail::seed_for(o, 51, static_cast<std::uint64_t>(i));
        const double gain = multi_start(rho, h, config).gain();
        const double bound = analytic::gain_upper_bound(h, ds);
        min_gain = std::min(min_gain, gain);
        if (bound > 0.0) max_ratio = std::max(max_ratio, gain / bound);
        c.require(gain >= -1e-9, detail::format("instance %d: negative gain %.3e", i, gain));
        c.require(gain <= bound + 1e-8, detail::format("instance %d: gain %.10f above bound %.10f", i, gain, bound));
    }
    const std::vector<HermitianOperator> hams{HermitianOperator::diagonal({0.0, 1.0}),
                                              HermitianOperator::diagonal({0.0, 1.0, 2.5})};
    for (const auto& h : hams) {
        const Index d = h.dim();
        const double bound = analytic::gain_upper_bound(h, d);
        const Povm pvm = Povm::computational(d);
        for (const BipartiteState& rho : {analytic::maximally_entangled_state(d, d), analytic::classical_classical_state(d, d)}) {
            const double gain = daemonic_ergotropy(rho, h, pvm).value - detail::system_ergotropy(rho, h);
            c.require(std::abs(gain - bound) <= 1e-9, detail::format("d=%d: extremal state gain %.12f vs bound %.12f", static_cast<int>(d), gain, bound));
        }
    }
    return detail::finish(5, "daemonic gain bounds", c,
                          detail::format("200 states, min gain %.2e, max gain/bound %.4f, bound attained", min_gain, max_ratio),
                          start);
}

inline CriterionResult mixed_beats_pure(const Options& o) {
    const auto start = std::chrono::steady_clock::now();
    detail::Checker c;
    const BipartiteState rho = analytic::cc_example_state();
    const HermitianOperator h = HermitianOperator::diagonal({0.0, 1.0, 2.0});
    const double gain = daemonic_gain(rho, h, AnalyticQcOptimizer{}).value;
    const double closed = analytic::cc_example_gain({0.0, 1.0, 2.0});
    const double pure = analytic::pure_state_gain_bound_3x2({0.0, 1.0, 2.0});
    SeeSawConfig config;
    config.seed = o.seed;
    const double seesaw = multi_start(rho, h, config).gain();
    c.require(std::abs(gain - 2.0 / 3.0) <= 1e-12, detail::format("gain %.12f, expected 2/3", gain));
    c.require(std::abs(closed - 2.0 / 3.0) <= 1e-15, "closed form differs from 2/3");
    c.require(gain > pure, detail::format("gain %.6f not above pure bound %.6f", gain, pure));
    c.require(std::abs(seesaw - gain) <= 1e-6, detail::format("see-saw gain %.10f", seesaw));
    return detail::finish(6, "mixed state beats pure states", c,
                          detail::format("gain %.10f > pure-state bound %.2f (see-saw %.10f)", gain, pure, seesaw), start);
}

inline CriterionResult ergotropy_properties(const Options& o) {
    const auto start = std::chrono::steady_clock::now();
    detail::Checker c;
    std::mt19937_64 gen(detail::seed_for(o, 7, 0));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto sub_state = [&](Index d, double trace, std::uint64_t seed) {
        return SubnormalizedState(ComplexMatrix(trace * random_density(d, 1 + static_cast<Index>(seed % static_cast<std::uint64_t>(d)), seed).matrix()));
    };
    double worst = 0.0;

    for (int i = 0; i < 200; ++i) {
        const Index d = 2 + i % 5;
        const HermitianOperator h = random_hermitian(d, detail::seed_for(o, 70, static_cast<std::uint64_t>(i)));
        const SubnormalizedState g1 = sub_state(d, 0.5 * unit(gen), detail::seed_for(o, 71, static_cast<std::uint64_t>(i)));
        const SubnormalizedState g2 = sub_state(d, 0.5 * unit(gen), detail::seed_for(o, 72, static_cast<std::uint64_t>(i)));
        const double w12 = ergotropy(SubnormalizedState(ComplexMatrix(g1.matrix() + g2.matrix())), h).value;
        const double excess = w12 - ergotropy(g1, h).value - ergotropy(g2, h).value;
        c.require(excess <= 1e-9, detail::format("sublinearity violated by %.2e", excess));
        const SubnormalizedState g = sub_state(d, 0.4, detail::seed_for(o, 73, static_cast<std::uint64_t>(i)));
        const double w = ergotropy(g, h).value;
        for (double lambda : {0.0, 0.3, 1.0, 2.5}) {
            const double dev = std::abs(ergotropy(SubnormalizedState(ComplexMatrix(lambda * g.matrix())), h).value - lambda * w);
            worst = std::max(worst, dev);
            c.require(dev <= 1e-10, detail::format("homogeneity off by %.2e at lambda=%.1f", dev, lambda));
        }
    }

    for (int i = 0; i < 200; ++i) {
        const Index ds = 2 + i % 2;
        const Index da = 2 + (i / 2) % 2;
        const BipartiteState rho = random_bipartite(ds, da, 1 + i % (ds * da), detail::seed_for(o, 74, static_cast<std::uint64_t>(i)));
        const HermitianOperator h = random_hermitian(ds, detail::seed_for(o, 75, static_cast<std::uint64_t>(i)));
        const double w = detail::system_ergotropy(rho, h);
        const Povm m = oracle::random_povm(da, 1 + static_cast<std::size_t>(i % static_cast<int>(da * da + 1)), detail::seed_for(o, 76, static_cast<std::uint64_t>(i)));
        const double wd = daemonic_ergotropy(rho, h, m).value;
        c.require(wd >= w - 1e-9, detail::format("W_D %.10f below W %.10f", wd, w));
        const double trivial = daemonic_ergotropy(rho, h, Povm::trivial(da)).value;
        c.require(std::abs(trivial - w) <= 1e-9, detail::format("trivial measurement gives %.12f vs %.12f", trivial, w));

        // Outcome-disjoint mixture of two measurements.
        const Povm n = oracle::random_povm(da, 2 + static_cast<std::size_t>(i % 3), detail::seed_for(o, 77, static_cast<std::uint64_t>(i)));
        const double lambda = 0.05 + 0.9 * unit(gen);
        std::vector<HermitianOperator> mixed;
        for (const auto& e : m.effects()) mixed.emplace_back(ComplexMatrix(lambda * e.matrix()));
        for (const auto& e : n.effects()) mixed.emplace_back(ComplexMatrix((1.0 - lambda) * e.matrix()));
        const double wm = daemonic_ergotropy(rho, h, Povm(std::move(mixed))).value;
        const double convex = lambda * wd + (1.0 - lambda) * daemonic_ergotropy(rho, h, n).value;
        c.require(wm <= convex + 1e-9, detail::format("convexity violated by %.2e", wm - convex));

        // Merging two outcomes never helps.
        if (n.size() >= 2) {
            std::vector<HermitianOperator> merged{HermitianOperator(ComplexMatrix(n[0].matrix() + n[1].matrix()))};
            for (std::size_t k = 2; k < n.size(); ++k) merged.push_back(n[k]);
            const double wmerged = daemonic_ergotropy(rho, h, Povm(std::move(merged))).value;
            const double wn = daemonic_ergotropy(rho, h, n).value;
            c.require(wmerged <= wn + 1e-9, detail::format("merging outcomes raised W_D by %.2e", wmerged - wn));
        }
    }

    for (int i = 0; i < 200; ++i) {
        const Index d = 2 + i % 5;
        const DensityOperator rho = random_density(d, 1 + i % d, detail::seed_for(o, 78, static_cast<std::uint64_t>(i)));
        const HermitianOperator h = random_hermitian(d, detail::seed_for(o, 79, static_cast<std::uint64_t>(i)));
        const ComplexMatrix u = haar_random_unitary(d, detail::seed_for(o, 80, static_cast<std::uint64_t>(i))).matrix();
        const double a = ergotropy(rho, h).value;
        const double b = ergotropy(DensityOperator(ComplexMatrix(u * rho.matrix() * u.adjoint())),
                                   HermitianOperator(ComplexMatrix(u * h.matrix() * u.adjoint())))
                             .value;
        c.require(std::abs(a - b) <= 1e-9, detail::format("unitary covariance off by %.2e", a - b));
    }
    return detail::finish(7, "ergotropy property suites", c,
                          detail::format("4 x 200 instances, max homogeneity deviation %.2e", worst), start);
}

inline CriterionResult oracle_equivalence(const Options& o) {
    const auto start = std::chrono::steady_clock::now();
    detail::Checker c;
    double worst_passive = 0.0, worst_sdp = 0.0, worst_gap = 0.0, worst_completeness = 0.0, worst_psd = 0.0;
    for (int i = 0; i < 200; ++i) {
        const Index d = 2 + i % 5;
        const DensityOperator rho = random_density(d, 1 + i % d, detail::seed_for(o, 8, static_cast<std::uint64_t>(i)));
        const HermitianOperator h = random_hermitian(d, detail::seed_for(o, 80, static_cast<std::uint64_t>(i)));
        const double dev = std::abs(oracle::passive_energy_bruteforce(rho, h) - ergotropy(rho, h).passive_energy);
        worst_passive = std::max(worst_passive, dev);
        c.require(dev <= 1e-10, detail::format("passive energy differs by %.2e at d=%d", dev, static_cast<int>(d)));
    }
    auto check_solution = [&](const SdpSolution& s) {
        ComplexMatrix sum = ComplexMatrix::Zero(s.povm.dim(), s.povm.dim());
        for (const auto& e : s.povm.effects()) {
            sum += e.matrix();
            worst_psd = std::min(worst_psd, ergolab::detail::eigenvalues_ascending(e.matrix())(0));
        }
        const double completeness = ergolab::detail::max_abs(sum - ComplexMatrix::Identity(s.povm.dim(), s.povm.dim()));
        worst_completeness = std::max(worst_completeness, completeness);
        worst_gap = std::max(worst_gap, s.gap());
        c.require(s.gap() <= 1e-9, detail::format("duality gap %.2e", s.gap()));
        c.require(completeness <= 1e-8, detail::format("completeness residual %.2e", completeness));
        c.require(worst_psd >= -1e-9, detail::format("effect eigenvalue %.2e", worst_psd));
    };
    for (int i = 0; i < 100; ++i) {
        const Index d = 1 + i % 4;
        const std::vector<HermitianOperator> taus{random_hermitian(d, detail::seed_for(o, 81, static_cast<std::uint64_t>(i))),
                                                  random_hermitian(d, detail::seed_for(o, 82, static_cast<std::uint64_t>(i)))};
        try {
            const SdpSolution s = solve_measurement_sdp(taus, 1e-9);
            const double dev = std::abs(s.primal - oracle::two_effect_sdp_oracle(taus[0], taus[1]));
            worst_sdp = std::max(worst_sdp, dev);
            c.require(dev <= 1e-7, detail::format("SDP differs from closed form by %.2e", dev));
            check_solution(s);
        } catch (const SdpFailure& e) {
            c.require(false, e.what());
        }
    }
    for (int i = 0; i < 50; ++i) {
        const Index d = 2 + i % 2;
        std::vector<HermitianOperator> taus;
        for (int k = 0; k < 3 + i % 7; ++k)
            taus.push_back(random_hermitian(d, detail::seed_for(o, 83, static_cast<std::uint64_t>(100 * i + k))));
        try {
            check_solution(solve_measurement_sdp(taus, 1e-9));
        } catch (const SdpFailure& e) {
            c.require(false, e.what());
        }
    }
    return detail::finish(8, "oracle equivalence", c,
                          detail::format("passive %.1e, two-effect SDP %.1e, max gap %.1e, completeness %.1e",
                                         worst_passive, worst_sdp, worst_gap, worst_completeness),
                          start);
}

inline CriterionResult naimark_birkhoff(const Options& o) {
    const auto start = std::chrono::steady_clock::now();
    detail::Checker c;
    double worst_prob = 0.0, worst_recon = 0.0;
    std::size_t max_terms_seen = 0;
    auto check_birkhoff = [&](const Eigen::MatrixXd& dmat) {
        const Index n = dmat.rows();
        const oracle::BirkhoffDecomposition b = oracle::birkhoff_decompose(dmat);
        const double recon = (b.reconstruct(n) - dmat).cwiseAbs().maxCoeff();
        double wsum = 0.0;
        for (double w : b.weights) wsum += w;
        worst_recon = std::max(worst_recon, recon);
        max_terms_seen = std::max(max_terms_seen, b.weights.size());
        c.require(recon <= 1e-10, detail::format("Birkhoff reconstruction error %.2e", recon));
        c.require(std::abs(wsum - 1.0) <= 1e-10, detail::format("Birkhoff weights sum to %.12f", wsum));
        c.require(static_cast<Index>(b.weights.size()) <= (n - 1) * (n - 1) + 1,
                  detail::format("%zu Birkhoff terms for N=%d", b.weights.size(), static_cast<int>(n)));
    };

    for (int i = 0; i < 100; ++i) {
        const Index d = 2 + i % 2;
        const auto n = static_cast<std::size_t>(d + i % 4);
        const Povm povm = oracle::random_rank_one_povm(d, n, detail::seed_for(o, 9, static_cast<std::uint64_t>(i)));
        const oracle::NaimarkExtension ext = oracle::naimark_extension(povm);
        const auto big = static_cast<Index>(n);
        const double ortho = ergolab::detail::max_abs(ext.vectors.adjoint() * ext.vectors - ComplexMatrix::Identity(big, big));
        c.require(ortho <= 1e-9, detail::format("Naimark vectors not orthonormal (%.2e)", ortho));
        std::mt19937_64 gen(detail::seed_for(o, 90, static_cast<std::uint64_t>(i)));
        for (int s = 0; s < 20; ++s) {
            ComplexVector psi = ergolab::detail::gaussian_matrix(d, 1, gen).col(0);
            psi.normalize();
            for (std::size_t k = 0; k < n; ++k) {
                const double naimark = std::norm(psi.dot(ext.vectors.col(static_cast<Index>(k)).head(d)));
                const double born = (psi.adjoint() * povm[k].matrix() * psi)(0, 0).real();
                worst_prob = std::max(worst_prob, std::abs(naimark - born));
            }
        }
        check_birkhoff(ext.overlap_matrix());
    }
    c.require(worst_prob <= 1e-9, detail::format("Naimark probabilities off by %.2e", worst_prob));

    for (int i = 0; i < 100; ++i) {
        const Index n = 2 + i % 5;
        std::mt19937_64 gen(detail::seed_for(o, 91, static_cast<std::uint64_t>(i)));
        std::exponential_distribution<double> wdist(1.0);
        Eigen::MatrixXd dmat = Eigen::MatrixXd::Zero(n, n);
        std::vector<Index> perm(static_cast<std::size_t>(n));
        double total = 0.0;
        for (int t = 0; t < 2 * n; ++t) {
            std::iota(perm.begin(), perm.end(), Index{0});
            std::shuffle(perm.begin(), perm.end(), gen);
            const double w = wdist(gen);
            total += w;
            for (Index j = 0; j < n; ++j) dmat(j, perm[static_cast<std::size_t>(j)]) += w;
        }
        check_birkhoff(dmat / total);
    }

    double min_slack = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 50; ++i) {
        const Index ds = 2 + i % 2;
        const Index da = 2 + (i / 2) % 2;
        const RandomQcInstance inst = random_qc_state(ds, da, detail::seed_for(o, 92, static_cast<std::uint64_t>(i)));
        const HermitianOperator h = random_hermitian(ds, detail::seed_for(o, 93, static_cast<std::uint64_t>(i)));
        const Povm povm = oracle::random_rank_one_povm(da, static_cast<std::size_t>(da + i % 3), detail::seed_for(o, 94, static_cast<std::uint64_t>(i)));
        const oracle::QcChain chain = oracle::qc_inequality_chain(inst.state, inst.ancilla_basis.matrix(), inst.blocks, povm, h);
        min_slack = std::min(min_slack, chain.conditional_passive - chain.block_passive);
        c.require(chain.conditional_passive >= chain.birkhoff_bound - 1e-9,
                  detail::format("instance %d: chain violated (%.10f < %.10f)", i, chain.conditional_passive, chain.birkhoff_bound));
        c.require(std::abs(chain.birkhoff_bound - chain.block_passive) <= 1e-9, detail::format("instance %d: Birkhoff term mismatch", i));
        c.require(chain.gamma_mismatch <= 1e-9, detail::format("instance %d: conditional states mismatch %.2e", i, chain.gamma_mismatch));
        c.require(chain.birkhoff_error <= 1e-10, detail::format("instance %d: Birkhoff error %.2e", i, chain.birkhoff_error));
    }
    return detail::finish(9, "Naimark and Birkhoff machinery", c,
                          detail::format("probabilities %.1e, reconstruction %.1e, max %zu terms, min chain slack %.2e",
                                         worst_prob, worst_recon, max_terms_seen, min_slack),
                          start);
}

inline CriterionResult multipartite_checks(const Options& o) {
    const auto start = std::chrono::steady_clock::now();
    detail::Checker c;
    double worst_purif = 0.0, worst_reduction = 0.0;
    for (int s = 0; s < 20; ++s) {
        const Index ds = 2 + s % 2;
        const Index da = 2;
        const BipartiteState rho = random_bipartite(ds, da, 1 + s % (ds * da), detail::seed_for(o, 10, static_cast<std::uint64_t>(s)));
        const HermitianOperator h = random_hermitian(ds, detail::seed_for(o, 100, static_cast<std::uint64_t>(s)));
        const Purification p = purify_with_flat_hamiltonian(rho, h, 0.37);
        for (int q = 0; q < 5; ++q) {
            const Povm m = oracle::random_povm(da, static_cast<std::size_t>(1 + q), detail::seed_for(o, 101, static_cast<std::uint64_t>(10 * s + q)));
            const double dev = std::abs(multipartite_daemonic_ergotropy(p.state, p.hamiltonians, ProductPovm{{m}}) -
                                        daemonic_ergotropy(rho, h, m).value);
            worst_purif = std::max(worst_purif, dev);
        }
    }
    c.require(worst_purif <= 1e-9, detail::format("purification differs by %.2e", worst_purif));

    const MultipartiteState ghz = ghz_state(2, 1);
    const HermitianOperator q = HermitianOperator::diagonal({0.0, 1.0});
    const LocalHamiltonians hs{{q, q}};
    const double ghz_value = multipartite_daemonic_ergotropy(ghz, hs, computational_product_povm(ghz));
    double sampled = 0.0;
    for (int k = 0; k < 1000; ++k)
        sampled = std::max(sampled, multipartite_daemonic_ergotropy(ghz, hs, random_product_povm(ghz.ancilla_dims(), detail::seed_for(o, 102, static_cast<std::uint64_t>(k)))));
    c.require(std::abs(ghz_value - 1.0) <= 1e-12, detail::format("GHZ value %.12f", ghz_value));
    c.require(sampled <= ghz_value + 1e-6, detail::format("sampled product POVM reached %.10f", sampled));

    for (int i = 0; i < 50; ++i) {
        const Index ds = 2 + i % 3;
        const Index da = 2 + (i / 3) % 2;
        const BipartiteState rho = random_bipartite(ds, da, 1 + i % (ds * da), detail::seed_for(o, 103, static_cast<std::uint64_t>(i)));
        const HermitianOperator h = random_hermitian(ds, detail::seed_for(o, 104, static_cast<std::uint64_t>(i)));
        const Povm m = oracle::random_povm(da, static_cast<std::size_t>(1 + i % 5), detail::seed_for(o, 105, static_cast<std::uint64_t>(i)));
        const MultipartiteState mp(rho.state(), {ds}, {da});
        const double dev = std::abs(multipartite_daemonic_ergotropy(mp, LocalHamiltonians{{h}}, ProductPovm{{m}}) -
                                    daemonic_ergotropy(rho, h, m).value);
        worst_reduction = std::max(worst_reduction, dev);
    }
    c.require(worst_reduction <= 1e-10, detail::format("single-party reduction differs by %.2e", worst_reduction));
    return detail::finish(10, "multipartite", c,
                          detail::format("purification %.1e, GHZ %.12f (best sampled %.6f), reduction %.1e", worst_purif,
                                         ghz_value, sampled, worst_reduction),
                          start);
}

enum class Suite { Paper, Properties, All };

inline std::optional<Suite> parse_suite(std::string_view s) {
    if (s == "paper") return Suite::Paper;
    if (s == "properties") return Suite::Properties;
    if (s == "all") return Suite::All;
    return std::nullopt;
}

using Criterion = std::function<CriterionResult(const Options&)>;

inline std::vector<std::pair<int, Criterion>> criteria() {
    return {{1, qutrit_qubit_optimum}, {2, gain_sweep},          {3, adversarial_stall},  {4, quantum_classical_optimum},
            {5, gain_bounds},          {6, mixed_beats_pure},    {7, ergotropy_properties}, {8, oracle_equivalence},
            {9, naimark_birkhoff},     {10, multipartite_checks}};
}

/// Fixed reference values are 1, 2, 3 and 6; the rest are randomized property checks.
inline std::vector<int> suite_members(Suite s) {
    switch (s) {
        case Suite::Paper: return {1, 2, 3, 6};
        case Suite::Properties: return {4, 5, 7, 8, 9, 10};
        case Suite::All: return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    }
    return {};
}

/// Runs the suite in criterion order; `on_result` sees each result as it finishes.
/// Exceptions inside a check count as a failure of that check.
inline std::vector<CriterionResult> run_suite(Suite s, const Options& o,
                                              const std::function<void(const CriterionResult&)>& on_result = {}) {
    const auto members = suite_members(s);
    std::vector<CriterionResult> out;
    for (const auto& [id, fn] : criteria()) {
        if (std::find(members.begin(), members.end(), id) == members.end()) continue;
        CriterionResult r;
        try {
            r = fn(o);
        } catch (const std::exception& e) {
            r.id = id;
            r.name = "criterion " + std::to_string(id);
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace ergolab::validation
