// oracle.hpp
// Brute-force validators that do not share code paths with the optimizers:
// qubit projective grid search, permutation enumeration of passive energies,
// the closed-form two-outcome measurement SDP, random POVM sampling, and the
// Naimark / Birkhoff-von Neumann machinery behind the quantum-classical
// optimality argument.

#pragma once

#include "ergolab/ergotropy.hpp"
#include "ergolab/random.hpp"

#include <boost/math/tools/minima.hpp>

#include <functional>
#include <numbers>
#include <optional>

namespace ergolab::oracle {

// ---------------------------------------------------------------------------
// Projective measurements on a qubit ancilla

struct GridSearchResult {
    double alpha = 0.0;
    double beta = 0.0;
    double gain = 0.0;
    double daemonic = 0.0;

    Povm measurement() const { return Povm({bloch_projector(alpha, beta), bloch_projector(alpha + std::numbers::pi, beta)}); }
};

namespace detail {

using ergolab::detail::contract_ancilla;
using ergolab::detail::ergotropy_raw;
using ergolab::detail::hermitian_part;

inline double qubit_pvm_daemonic(const BipartiteState& rho, const ComplexMatrix& h, const Spectrum& spec,
                                 double alpha, double beta) {
    const ComplexMatrix up = bloch_projector(alpha, beta).matrix();
    const ComplexMatrix down = ComplexMatrix::Identity(2, 2) - up;
    const Index ds = rho.dim_system();
    return ergotropy_raw(hermitian_part(contract_ancilla(rho.matrix(), ds, 2, up)), h, spec).value +
           ergotropy_raw(hermitian_part(contract_ancilla(rho.matrix(), ds, 2, down)), h, spec).value;
}

}  // namespace detail

/// Best two-outcome projective measurement {Pi(a, b), Pi(a + pi, b)} on a
/// qubit ancilla: full grid over a in [0, pi), b in [0, 2 pi) with
/// `resolution` points per angle, then a shrinking compass search around the
/// best cell and a Brent line search in a on the meridians b = 0 and b = pi.
inline GridSearchResult grid_search_qubit_pvm(const BipartiteState& rho, const HermitianOperator& h,
                                              int resolution = 720) {
    if (rho.dim_ancilla() != 2) throw DimensionMismatch("grid search needs a qubit ancilla");
    if (h.dim() != rho.dim_system()) throw DimensionMismatch("Hamiltonian vs system");
    if (resolution < 2) throw std::invalid_argument("grid resolution must be at least 2");
    using std::numbers::pi;
    const Spectrum spec(h);
    const ComplexMatrix& hm = h.matrix();
    auto objective = [&](double a, double b) { return detail::qubit_pvm_daemonic(rho, hm, spec, a, b); };

    const double da = pi / resolution;
    const double db = 2.0 * pi / resolution;
    GridSearchResult best{0.0, 0.0, 0.0, -std::numeric_limits<double>::infinity()};
    for (int i = 0; i < resolution; ++i)
        for (int j = 0; j < resolution; ++j) {
            const double value = objective(i * da, j * db);
            if (value > best.daemonic) best = {i * da, j * db, 0.0, value};
        }

    // Compass search.
    double step_a = da, step_b = db;
    while (step_a > 1e-10) {
        bool moved = false;
        const double cand[4][2] = {{step_a, 0.0}, {-step_a, 0.0}, {0.0, step_b}, {0.0, -step_b}};
        for (const auto& c : cand) {
            const double value = objective(best.alpha + c[0], best.beta + c[1]);
            if (value > best.daemonic) {
                best = {best.alpha + c[0], best.beta + c[1], 0.0, value};
                moved = true;
            }
        }
        if (!moved) {
            step_a *= 0.5;
            step_b *= 0.5;
        }
    }

    // Meridian refinement.
    for (double meridian : {0.0, pi}) {
        auto neg = [&](double a) { return -objective(a, meridian); };
        const auto [a, f] = boost::math::tools::brent_find_minima(neg, best.alpha - 2.0 * da, best.alpha + 2.0 * da, 50);
        if (-f > best.daemonic) best = {a, meridian, 0.0, -f};
    }

    // Canonical angles: a in [0, pi], b in [0, 2 pi).
    double a = std::remainder(best.alpha, 2.0 * pi);
    double b = best.beta;
    if (a < 0.0) {
        a = -a;
        b += pi;
    }
    b = std::fmod(b, 2.0 * pi);
    if (b < 0.0) b += 2.0 * pi;
    best.alpha = a;
    best.beta = b;
    best.gain = best.daemonic - ergotropy(partial_trace(rho, Subsystem::System), h).value;
    return best;
}

struct PvmSearchResult {
    ComplexMatrix basis;  // columns are the measurement vectors
    double daemonic = 0.0;
    double gain = 0.0;

    Povm measurement() const { return Povm::projective(basis); }
};

/// Best rank-one projective measurement on the ancilla. Qubit ancillas use
/// the grid search; larger ancillas use Haar-random bases followed by a
/// randomized local ascent on the unitary group.
inline PvmSearchResult search_projective_measurement(const BipartiteState& rho, const HermitianOperator& h,
                                                     int samples = 2000, std::uint64_t seed = 0) {
    const Index da = rho.dim_ancilla();
    if (da == 1) {
        const double w = ergotropy(partial_trace(rho, Subsystem::System), h).value;
        return {ComplexMatrix::Identity(1, 1), w, 0.0};
    }
    if (da == 2) {
        const GridSearchResult g = grid_search_qubit_pvm(rho, h, 180);
        const ComplexMatrix up = bloch_projector(g.alpha, g.beta).matrix();
        const ergolab::detail::Eigensystem es = ergolab::detail::eigh_matrix(up, true);
        return {es.vectors, g.daemonic, g.gain};
    }
    const Spectrum spec(h);
    auto value_of = [&](const ComplexMatrix& basis) {
        std::vector<ComplexMatrix> effects;
        for (Index k = 0; k < da; ++k) effects.push_back(basis.col(k) * basis.col(k).adjoint());
        return ergolab::detail::daemonic_value(rho.matrix(), rho.dim_system(), da, h.matrix(), spec, effects);
    };
    ComplexMatrix best = ComplexMatrix::Identity(da, da);
    double best_value = value_of(best);
    for (int s = 0; s < samples; ++s) {
        const ComplexMatrix u = ergolab::detail::haar_unitary_matrix(da, derive_seed(seed, static_cast<std::uint64_t>(s)));
        const double v = value_of(u);
        if (v > best_value) {
            best_value = v;
            best = u;
        }
    }
    std::mt19937_64 gen(derive_seed(seed, 0xA5CE17ULL));
    double radius = 0.3;
    int failures = 0;
    while (radius > 1e-9) {
        const ComplexMatrix k = ergolab::detail::hermitian_part(ergolab::detail::gaussian_matrix(da, da, gen));
        const ergolab::detail::Eigensystem es = ergolab::detail::eigh_matrix(k, false);
        ComplexVector phases(da);
        for (Index i = 0; i < da; ++i) phases(i) = std::polar(1.0, radius * es.values(i));
        const ComplexMatrix step = es.vectors * phases.asDiagonal() * es.vectors.adjoint();
        const ComplexMatrix candidate = best * step;
        const double v = value_of(candidate);
        if (v > best_value) {
            best_value = v;
            best = candidate;
            failures = 0;
        } else if (++failures >= 40) {
            radius *= 0.5;
            failures = 0;
        }
    }
    const double w = ergotropy(partial_trace(rho, Subsystem::System), h).value;
    return {best, best_value, best_value - w};
}

// ---------------------------------------------------------------------------
// Passive energy by enumeration

/// min over permutations pi of sum_k r_pi(k) eps_k. Limited to dim <= 8.
inline double passive_energy_bruteforce(const SubnormalizedState& rho, const HermitianOperator& h) {
    if (rho.dim() != h.dim()) throw DimensionMismatch("state vs Hamiltonian");
    if (rho.dim() > 8) throw std::invalid_argument("permutation enumeration limited to dimension 8");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> rs(rho.matrix(), Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> hs(h.matrix(), Eigen::EigenvaluesOnly);
    const RealVector& r = rs.eigenvalues();
    const RealVector& e = hs.eigenvalues();
    std::vector<Index> perm(static_cast<std::size_t>(rho.dim()));
    std::iota(perm.begin(), perm.end(), Index{0});
    double best = std::numeric_limits<double>::infinity();
    do {
        double energy = 0.0;
        for (Index k = 0; k < rho.dim(); ++k) energy += r(perm[static_cast<std::size_t>(k)]) * e(k);
        best = std::min(best, energy);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// ---------------------------------------------------------------------------
// Two-outcome measurement SDP

/// min over {E, I - E} of Tr(tau0 E) + Tr(tau1 (I - E))
///   = Tr(tau1) + min_{0 <= E <= I} Tr((tau0 - tau1) E)
///   = (Tr(tau0 + tau1) - ||tau0 - tau1||_1) / 2.
inline double two_effect_sdp_oracle(const HermitianOperator& tau0, const HermitianOperator& tau1) {
    if (tau0.dim() != tau1.dim()) throw DimensionMismatch("tau operators differ in dimension");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(tau0.matrix() - tau1.matrix(), Eigen::EigenvaluesOnly);
    return 0.5 * ((tau0.matrix() + tau1.matrix()).trace().real() - es.eigenvalues().cwiseAbs().sum());
}

// ---------------------------------------------------------------------------
// Random measurements

/// Effects S^{-1/2} G_i S^{-1/2} with G_i = A_i A_i^dagger Gaussian, S = sum G_i.
inline Povm random_povm(Index dim, std::size_t n_effects, std::uint64_t seed) {
    if (n_effects == 0) throw std::invalid_argument("POVM needs at least one effect");
    if (n_effects == 1) return Povm::trivial(dim);
    std::mt19937_64 gen(seed);
    std::vector<ComplexMatrix> g;
    for (std::size_t i = 0; i < n_effects; ++i) {
        const ComplexMatrix a = ergolab::detail::gaussian_matrix(dim, dim, gen);
        g.push_back(a * a.adjoint());
    }
    g = ergolab::detail::repair_povm(std::move(g));
    std::vector<HermitianOperator> effects(g.begin(), g.end());
    return Povm(std::move(effects));
}

/// Rank-one POVM with n_effects >= dim outcomes.
inline Povm random_rank_one_povm(Index dim, std::size_t n_effects, std::uint64_t seed) {
    if (static_cast<Index>(n_effects) < dim) throw std::invalid_argument("rank-one POVM needs at least dim effects");
    std::mt19937_64 gen(seed);
    std::vector<ComplexMatrix> g;
    for (std::size_t i = 0; i < n_effects; ++i) {
        const ComplexVector v = ergolab::detail::gaussian_matrix(dim, 1, gen).col(0);
        g.push_back(v * v.adjoint());
    }
    g = ergolab::detail::repair_povm(std::move(g));
    std::vector<HermitianOperator> effects(g.begin(), g.end());
    return Povm(std::move(effects));
}

// ---------------------------------------------------------------------------
// Naimark extension

/// Orthonormal basis |phi_k> of C^N (columns of `vectors`) whose restriction
/// to the first d coordinates realizes a rank-one POVM with N effects:
/// |<psi|phi_k>|^2 = <psi|E_k|psi> for psi supported on those coordinates.
struct NaimarkExtension {
    ComplexMatrix vectors;

    Index dim() const { return vectors.rows(); }

    /// D_jk = |<j|phi_k>|^2, doubly stochastic.
    Eigen::MatrixXd overlap_matrix() const { return vectors.cwiseAbs2(); }
};

inline NaimarkExtension naimark_extension(const Povm& povm) {
    const Index d = povm.dim();
    const auto n = static_cast<Index>(povm.size());
    ComplexMatrix v(d, n);
    for (Index k = 0; k < n; ++k) {
        const ergolab::detail::Eigensystem es = ergolab::detail::eigh_matrix(povm[static_cast<std::size_t>(k)].matrix(), true);
        if (d > 1 && es.values(1) > 1e-9)
            throw InvalidOperator("Naimark extension needs rank-one effects; effect " + std::to_string(k) + " has rank > 1");
        v.col(k) = std::sqrt(std::max(es.values(0), 0.0)) * es.vectors.col(0);
    }
    ComplexMatrix w(n, n);
    w.topRows(d) = v;
    if (n > d) {
        Eigen::HouseholderQR<ComplexMatrix> qr(v.adjoint());
        const ComplexMatrix q = qr.householderQ();
        w.bottomRows(n - d) = q.rightCols(n - d).adjoint();
    }
    return {w};
}

// ---------------------------------------------------------------------------
// Birkhoff-von Neumann decomposition

struct BirkhoffDecomposition {
    std::vector<double> weights;
    std::vector<std::vector<Index>> permutations;  // permutations[n][j] = column of the 1 in row j

    Eigen::MatrixXd reconstruct(Index n) const {
        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t t = 0; t < weights.size(); ++t)
            for (Index j = 0; j < n; ++j) out(j, permutations[t][static_cast<std::size_t>(j)]) += weights[t];
        return out;
    }
};

namespace detail {

// Perfect matching of rows to columns using entries >= threshold (Kuhn).
inline std::optional<std::vector<Index>> perfect_matching(const Eigen::MatrixXd& m, double threshold) {
    const Index n = m.rows();
    std::vector<Index> col_owner(static_cast<std::size_t>(n), -1);
    std::vector<char> seen;
    std::function<bool(Index)> augment = [&](Index row) {
        for (Index c = 0; c < n; ++c) {
            if (m(row, c) < threshold || seen[static_cast<std::size_t>(c)]) continue;
            seen[static_cast<std::size_t>(c)] = 1;
            if (col_owner[static_cast<std::size_t>(c)] < 0 || augment(col_owner[static_cast<std::size_t>(c)])) {
                col_owner[static_cast<std::size_t>(c)] = row;
                return true;
            }
        }
        return false;
    };
    for (Index r = 0; r < n; ++r) {
        seen.assign(static_cast<std::size_t>(n), 0);
        if (!augment(r)) return std::nullopt;
    }
    std::vector<Index> perm(static_cast<std::size_t>(n));
    for (Index c = 0; c < n; ++c) perm[static_cast<std::size_t>(col_owner[static_cast<std::size_t>(c)])] = c;
    return perm;
}

// Perfect matching maximizing its smallest entry.
inline std::optional<std::vector<Index>> bottleneck_matching(const Eigen::MatrixXd& m, double floor) {
    std::vector<double> levels;
    for (Index i = 0; i < m.size(); ++i)
        if (m.data()[i] > floor) levels.push_back(m.data()[i]);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    if (levels.empty()) return std::nullopt;
    std::size_t lo = 0, hi = levels.size() - 1;
    if (!perfect_matching(m, levels[lo])) return std::nullopt;
    while (lo < hi) {
        const std::size_t mid = (lo + hi + 1) / 2;
        if (perfect_matching(m, levels[mid]))
            lo = mid;
        else
            hi = mid - 1;
    }
    return perfect_matching(m, levels[lo]);
}

}  // namespace detail

/// Greedy peeling of permutation matrices, each round using the perfect
/// matching with the largest bottleneck entry on the current support.
inline BirkhoffDecomposition birkhoff_decompose(const Eigen::MatrixXd& d, double tol = 1e-12) {
    const Index n = d.rows();
    if (d.cols() != n || n == 0) throw DimensionMismatch("Birkhoff decomposition needs a non-empty square matrix");
    if (d.minCoeff() < -1e-10) throw std::invalid_argument("matrix has negative entries");
    for (Index i = 0; i < n; ++i)
        if (std::abs(d.row(i).sum() - 1.0) > 1e-8 || std::abs(d.col(i).sum() - 1.0) > 1e-8)
            throw std::invalid_argument("matrix is not doubly stochastic");

    constexpr double kZero = 1e-15;
    Eigen::MatrixXd rest = d.cwiseMax(0.0);
    BirkhoffDecomposition out;
    const std::size_t max_terms = static_cast<std::size_t>(n * n);
    while (rest.rowwise().sum().maxCoeff() > tol) {
        if (out.weights.size() >= max_terms) throw std::runtime_error("Birkhoff peeling did not terminate");
        auto perm = detail::bottleneck_matching(rest, kZero);
        if (!perm) throw std::runtime_error("no perfect matching on the support; input is not doubly stochastic");
        double weight = std::numeric_limits<double>::infinity();
        for (Index j = 0; j < n; ++j) weight = std::min(weight, rest(j, (*perm)[static_cast<std::size_t>(j)]));
        for (Index j = 0; j < n; ++j) {
            double& entry = rest(j, (*perm)[static_cast<std::size_t>(j)]);
            entry -= weight;
            if (entry < kZero) entry = 0.0;
        }
        out.weights.push_back(weight);
        out.permutations.push_back(std::move(*perm));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Quantum-classical optimality chain

/// Evaluates, for a quantum-classical state sum_j sigma_j (x) |b_j><b_j| and
/// a rank-one POVM, the chain
///   sum_k minE(gamma_k) >= sum_{k,j,n} p_n pi^n_jk minE(sigma_j) = sum_j minE(sigma_j)
/// where gamma_k = sum_j sigma_j |<b_j|phi_k>|^2 and minE is the passive energy.
struct QcChain {
    double conditional_passive = 0.0;  // sum_k minE(gamma_k)
    double birkhoff_bound = 0.0;       // middle term
    double block_passive = 0.0;        // sum_j minE(sigma_j)
    double gamma_mismatch = 0.0;       // max |gamma_k(Birkhoff mixture) - gamma_k(direct)|
    std::size_t birkhoff_terms = 0;
    double birkhoff_error = 0.0;
};

inline QcChain qc_inequality_chain(const BipartiteState& rho, const ComplexMatrix& ancilla_basis,
                                   const std::vector<SubnormalizedState>& blocks, const Povm& povm,
                                   const HermitianOperator& h) {
    const Index da = rho.dim_ancilla();
    const auto n = static_cast<Index>(povm.size());
    std::vector<HermitianOperator> rotated;
    for (const auto& e : povm.effects()) rotated.emplace_back(ComplexMatrix(ancilla_basis.adjoint() * e.matrix() * ancilla_basis));
    const NaimarkExtension ext = naimark_extension(Povm(std::move(rotated)));
    const Eigen::MatrixXd overlaps = ext.overlap_matrix();
    const BirkhoffDecomposition bvn = birkhoff_decompose(overlaps);

    const Spectrum spec(h);
    auto passive = [&](const ComplexMatrix& g) {
        return ergolab::detail::ergotropy_raw(ergolab::detail::hermitian_part(g), h.matrix(), spec).passive_energy;
    };
    std::vector<double> block_energy(static_cast<std::size_t>(n), 0.0);  // sigma_j = 0 for j >= d_A
    for (Index j = 0; j < da; ++j) block_energy[static_cast<std::size_t>(j)] = passive(blocks[static_cast<std::size_t>(j)].matrix());

    QcChain out;
    out.birkhoff_terms = bvn.weights.size();
    out.birkhoff_error = (bvn.reconstruct(n) - overlaps).cwiseAbs().maxCoeff();
    const auto gammas = conditional_states(rho, povm);
    const Index ds = rho.dim_system();
    std::vector<ComplexMatrix> sigma(static_cast<std::size_t>(n), ComplexMatrix::Zero(ds, ds));
    for (Index j = 0; j < da; ++j) sigma[static_cast<std::size_t>(j)] = blocks[static_cast<std::size_t>(j)].matrix();
    // gamma_k = sum_n p_n sigma_{j_n(k)}, j_n(k) the row that pi^n sends to column k
    std::vector<ComplexMatrix> mixed(static_cast<std::size_t>(n), ComplexMatrix::Zero(ds, ds));
    for (std::size_t t = 0; t < bvn.weights.size(); ++t)
        for (Index j = 0; j < n; ++j) {
            const auto k = static_cast<std::size_t>(bvn.permutations[t][static_cast<std::size_t>(j)]);
            mixed[k] += bvn.weights[t] * sigma[static_cast<std::size_t>(j)];
            out.birkhoff_bound += bvn.weights[t] * block_energy[static_cast<std::size_t>(j)];
        }
    for (Index k = 0; k < n; ++k) {
        const auto& direct = gammas[static_cast<std::size_t>(k)].matrix();
        out.gamma_mismatch = std::max(out.gamma_mismatch, ergolab::detail::max_abs(mixed[static_cast<std::size_t>(k)] - direct));
        out.conditional_passive += passive(direct);
    }
    for (double e : block_energy) out.block_passive += e;
    return out;
}

}  // namespace ergolab::oracle
