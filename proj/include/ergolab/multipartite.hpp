// multipartite.hpp
// Daemonic ergotropy for N systems and M ancillas: each ancilla is measured
// locally, the outcomes are announced, and every system applies its own
// conditional unitary. Joint index order is S_1..S_N then A_1..A_M,
// mixed radix with the first subsystem most significant.

#pragma once

#include "ergolab/ergotropy.hpp"
#include "ergolab/oracle.hpp"
#include "ergolab/random.hpp"
#include "ergolab/sdp.hpp"
#include "ergolab/seesaw.hpp"

#include <memory>
#include <numeric>

namespace ergolab {

inline constexpr Index kMaxJointDim = 64;

class MultipartiteState {
public:
    MultipartiteState() = default;

    MultipartiteState(DensityOperator state, std::vector<Index> system_dims, std::vector<Index> ancilla_dims)
        : state_(std::move(state)), system_dims_(std::move(system_dims)), ancilla_dims_(std::move(ancilla_dims)) {
        if (system_dims_.empty()) throw std::invalid_argument("multipartite state needs at least one system");
        for (Index d : system_dims_)
            if (d < 1) throw std::invalid_argument("subsystem dimensions must be positive");
        for (Index d : ancilla_dims_)
            if (d < 1) throw std::invalid_argument("subsystem dimensions must be positive");
        if (state_.dim() != dim_systems() * dim_ancillas())
            throw DimensionMismatch("state dimension " + std::to_string(state_.dim()) + " vs subsystem product " +
                                    std::to_string(dim_systems() * dim_ancillas()));
        if (state_.dim() > kMaxJointDim)
            throw std::invalid_argument("joint dimension " + std::to_string(state_.dim()) + " exceeds " +
                                        std::to_string(kMaxJointDim));
    }

    const DensityOperator& state() const { return state_; }
    const ComplexMatrix& matrix() const { return state_.matrix(); }
    const std::vector<Index>& system_dims() const { return system_dims_; }
    const std::vector<Index>& ancilla_dims() const { return ancilla_dims_; }
    std::size_t n_systems() const { return system_dims_.size(); }
    std::size_t n_ancillas() const { return ancilla_dims_.size(); }
    Index dim_systems() const { return detail::product(system_dims_); }
    Index dim_ancillas() const { return detail::product(ancilla_dims_); }

    /// All systems as S, all ancillas as A.
    BipartiteState as_bipartite() const { return BipartiteState(state_, dim_systems(), dim_ancillas()); }

private:
    DensityOperator state_;
    std::vector<Index> system_dims_;
    std::vector<Index> ancilla_dims_;
};

struct LocalHamiltonians {
    std::vector<HermitianOperator> terms;
};

struct ProductPovm {
    std::vector<Povm> locals;
};

struct ProductEffect {
    std::vector<std::size_t> outcome;
    HermitianOperator effect;
};

/// Every product effect E_j = E^1_{j_1} (x) ... (x) E^M_{j_M}, with j_1 varying slowest.
inline std::vector<ProductEffect> product_effects(const ProductPovm& p) {
    std::vector<ProductEffect> out{{{}, HermitianOperator::identity(1)}};
    for (const auto& local : p.locals) {
        std::vector<ProductEffect> next;
        next.reserve(out.size() * local.size());
        for (const auto& prefix : out)
            for (std::size_t k = 0; k < local.size(); ++k) {
                ProductEffect e{prefix.outcome, HermitianOperator(detail::kron(prefix.effect.matrix(), local[k].matrix()))};
                e.outcome.push_back(k);
                next.push_back(std::move(e));
            }
        out = std::move(next);
    }
    return out;
}

namespace detail {

inline void check_consistent(const MultipartiteState& rho, const LocalHamiltonians& hs) {
    if (hs.terms.size() != rho.n_systems())
        throw DimensionMismatch("expected " + std::to_string(rho.n_systems()) + " local Hamiltonians, got " +
                                std::to_string(hs.terms.size()));
    for (std::size_t i = 0; i < hs.terms.size(); ++i)
        require_same_dim(hs.terms[i].dim(), rho.system_dims()[i], "local Hamiltonian vs system");
}

inline void check_consistent(const MultipartiteState& rho, const ProductPovm& p) {
    if (p.locals.size() != rho.n_ancillas())
        throw DimensionMismatch("expected " + std::to_string(rho.n_ancillas()) + " local POVMs, got " +
                                std::to_string(p.locals.size()));
    for (std::size_t k = 0; k < p.locals.size(); ++k)
        require_same_dim(p.locals[k].dim(), rho.ancilla_dims()[k], "local POVM vs ancilla");
}

// Reduced conditional state of system i for a joint ancilla effect.
inline std::vector<ComplexMatrix> local_conditionals(const MultipartiteState& rho, const ComplexMatrix& joint_effect) {
    const ComplexMatrix gamma = contract_ancilla(rho.matrix(), rho.dim_systems(), rho.dim_ancillas(), joint_effect);
    const auto& dims = rho.system_dims();
    std::vector<ComplexMatrix> out;
    if (dims.size() == 1) {
        out.push_back(hermitian_part(gamma));
        return out;
    }
    for (std::size_t i = 0; i < dims.size(); ++i) {
        const std::unique_ptr<bool[]> keep(new bool[dims.size()]());
        keep[i] = true;
        out.push_back(hermitian_part(partial_trace(gamma, dims, std::span<const bool>(keep.get(), dims.size()))));
    }
    return out;
}

struct Evaluation {
    double value = 0.0;
    std::vector<double> per_system;
    // unitaries[j][i]: extraction unitary of system i after outcome vector j
    std::vector<std::vector<ComplexMatrix>> unitaries;
};

inline Evaluation evaluate(const MultipartiteState& rho, const LocalHamiltonians& hs,
                           const std::vector<Spectrum>& specs, const std::vector<ProductEffect>& effects) {
    Evaluation out;
    out.per_system.assign(rho.n_systems(), 0.0);
    for (const auto& e : effects) {
        const auto locals = local_conditionals(rho, e.effect.matrix());
        std::vector<ComplexMatrix> us;
        for (std::size_t i = 0; i < locals.size(); ++i) {
            RawErgotropy r = ergotropy_raw(locals[i], hs.terms[i].matrix(), specs[i]);
            out.per_system[i] += r.value;
            us.push_back(std::move(r.unitary));
        }
        out.unitaries.push_back(std::move(us));
    }
    out.value = std::accumulate(out.per_system.begin(), out.per_system.end(), 0.0);
    return out;
}

inline std::vector<Spectrum> spectra(const LocalHamiltonians& hs) {
    std::vector<Spectrum> out;
    for (const auto& h : hs.terms) out.emplace_back(h);
    return out;
}

}  // namespace detail

struct MultipartiteDaemonic {
    double value = 0.0;
    std::vector<double> per_system;
};

/// Sum over outcome vectors j and systems i of W(rho^i_j, H^(i)).
inline MultipartiteDaemonic multipartite_daemonic_breakdown(const MultipartiteState& rho, const LocalHamiltonians& hs,
                                                            const ProductPovm& p) {
    detail::check_consistent(rho, hs);
    detail::check_consistent(rho, p);
    const detail::Evaluation ev = detail::evaluate(rho, hs, detail::spectra(hs), product_effects(p));
    return {ev.value, ev.per_system};
}

inline double multipartite_daemonic_ergotropy(const MultipartiteState& rho, const LocalHamiltonians& hs,
                                              const ProductPovm& p) {
    return multipartite_daemonic_breakdown(rho, hs, p).value;
}

/// Sum_i W(rho^i, H^(i)): the value without any measurement.
inline double multipartite_local_ergotropy(const MultipartiteState& rho, const LocalHamiltonians& hs) {
    ProductPovm trivial;
    for (Index d : rho.ancilla_dims()) trivial.locals.push_back(Povm::trivial(d));
    return multipartite_daemonic_ergotropy(rho, hs, trivial);
}

struct Purification {
    MultipartiteState state;
    LocalHamiltonians hamiltonians;
};

/// |psi> on S_1 S_2 A with Tr_{S_2} |psi><psi| = rho, H^(1) = h and
/// H^(2) = flat_level * I. S_2 has dimension rank(rho).
inline Purification purify_with_flat_hamiltonian(const BipartiteState& rho, const HermitianOperator& h,
                                                 double flat_level) {
    detail::require_same_dim(h.dim(), rho.dim_system(), "Hamiltonian vs system");
    const Index ds = rho.dim_system();
    const Index da = rho.dim_ancilla();
    const detail::Eigensystem es = detail::eigh_matrix(rho.matrix(), true);
    const double cutoff = 1e-14 * std::max(1.0, es.values(0));
    Index rank = 0;
    while (rank < es.values.size() && es.values(rank) > cutoff) ++rank;
    rank = std::max<Index>(rank, 1);

    ComplexVector psi = ComplexVector::Zero(ds * rank * da);
    for (Index k = 0; k < rank; ++k) {
        const double amp = std::sqrt(std::max(0.0, es.values(k)));
        for (Index s = 0; s < ds; ++s)
            for (Index a = 0; a < da; ++a) psi(s * rank * da + k * da + a) = amp * es.vectors(s * da + a, k);
    }
    psi.normalize();
    MultipartiteState state(DensityOperator(ComplexMatrix(psi * psi.adjoint())), {ds, rank}, {da});
    LocalHamiltonians hs{{h, HermitianOperator(ComplexMatrix(flat_level * ComplexMatrix::Identity(rank, rank)))}};
    return {std::move(state), std::move(hs)};
}

/// (|0...0> + |1...1>)/sqrt2 on n qubit systems followed by m qubit ancillas.
inline MultipartiteState ghz_state(std::size_t n_systems, std::size_t n_ancillas) {
    if (n_systems < 1) throw std::invalid_argument("GHZ state needs at least one system");
    const std::size_t total = n_systems + n_ancillas;
    const Index dim = Index{1} << total;
    if (dim > kMaxJointDim) throw std::invalid_argument("GHZ state exceeds the joint dimension cap");
    ComplexVector psi = ComplexVector::Zero(dim);
    psi(0) = psi(dim - 1) = 1.0 / std::sqrt(2.0);
    return MultipartiteState(DensityOperator(ComplexMatrix(psi * psi.adjoint())), std::vector<Index>(n_systems, 2),
                             std::vector<Index>(n_ancillas, 2));
}

/// sum_i sigma_i (x) |i><i|^{(x) m}, sigma_i random subnormalized states on the
/// joint system space, shared index i < d over m ancillas of dimension d.
inline MultipartiteState random_multipartite_qc(const std::vector<Index>& system_dims, std::size_t n_ancillas,
                                                Index ancilla_dim, std::uint64_t seed) {
    const Index dsys = detail::product(system_dims);
    Index dang = 1;
    for (std::size_t k = 0; k < n_ancillas; ++k) dang *= ancilla_dim;
    std::mt19937_64 gen(seed);
    std::exponential_distribution<double> weight(1.0);
    std::vector<double> w;
    for (Index i = 0; i < ancilla_dim; ++i) w.push_back(weight(gen) + 1e-3);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    ComplexMatrix rho = ComplexMatrix::Zero(dsys * dang, dsys * dang);
    for (Index i = 0; i < ancilla_dim; ++i) {
        std::uniform_int_distribution<Index> rank(1, dsys);
        const ComplexMatrix sigma = detail::random_density_matrix(dsys, rank(gen), derive_seed(seed, static_cast<std::uint64_t>(i)));
        // |i...i> on the ancillas
        Index joint = 0;
        for (std::size_t k = 0; k < n_ancillas; ++k) joint = joint * ancilla_dim + i;
        ComplexMatrix proj = ComplexMatrix::Zero(dang, dang);
        proj(joint, joint) = 1.0;
        rho += (w[static_cast<std::size_t>(i)] / total) * detail::kron(sigma, proj);
    }
    return MultipartiteState(DensityOperator(rho), system_dims, std::vector<Index>(n_ancillas, ancilla_dim));
}

/// Local computational-basis PVMs on every ancilla.
inline ProductPovm computational_product_povm(const MultipartiteState& rho) {
    ProductPovm p;
    for (Index d : rho.ancilla_dims()) p.locals.push_back(Povm::computational(d));
    return p;
}

inline ProductPovm random_product_povm(const std::vector<Index>& ancilla_dims, std::uint64_t seed) {
    ProductPovm p;
    for (std::size_t k = 0; k < ancilla_dims.size(); ++k) {
        const Index d = ancilla_dims[k];
        p.locals.push_back(oracle::random_povm(d, static_cast<std::size_t>(d * d), derive_seed(seed, k)));
    }
    return p;
}

struct LocalSeeSawResult {
    double value = 0.0;
    ProductPovm povm;
    std::vector<double> objective_trace;  // value after each sweep
    bool converged = false;
    int restart_index = 0;
    std::vector<double> restart_values;
};

namespace detail {

// tau^k_a = sum over outcome vectors j with j_k = a of
// Tr_{all but A_k}[rho (K_j (x) E^{-k}_j)], where K_j = sum_i U_ji^dagger H^(i) U_ji
// acts on the systems and E^{-k}_j is the product of the other local effects.
inline std::vector<ComplexMatrix> local_taus(const MultipartiteState& rho, const LocalHamiltonians& hs,
                                             const std::vector<std::vector<ComplexMatrix>>& locals, std::size_t k,
                                             const std::vector<ProductEffect>& effects, const Evaluation& ev) {
    const auto& sdims = rho.system_dims();
    const auto& adims = rho.ancilla_dims();
    std::vector<Index> dims{rho.dim_systems()};
    dims.insert(dims.end(), adims.begin(), adims.end());
    const std::unique_ptr<bool[]> keep(new bool[dims.size()]());
    keep[k + 1] = true;

    std::vector<ComplexMatrix> taus(locals[k].size(), ComplexMatrix::Zero(adims[k], adims[k]));
    for (std::size_t j = 0; j < effects.size(); ++j) {
        ComplexMatrix kj = ComplexMatrix::Zero(rho.dim_systems(), rho.dim_systems());
        for (std::size_t i = 0; i < sdims.size(); ++i) {
            ComplexMatrix term = ComplexMatrix::Identity(1, 1);
            for (std::size_t l = 0; l < sdims.size(); ++l) {
                const ComplexMatrix& u = ev.unitaries[j][i];
                term = kron(term, l == i ? ComplexMatrix(u.adjoint() * hs.terms[i].matrix() * u)
                                         : ComplexMatrix(ComplexMatrix::Identity(sdims[l], sdims[l])));
            }
            kj += term;
        }
        ComplexMatrix op = kj;
        for (std::size_t l = 0; l < adims.size(); ++l)
            op = kron(op, l == k ? ComplexMatrix(ComplexMatrix::Identity(adims[l], adims[l]))
                                 : locals[l][effects[j].outcome[l]]);
        taus[effects[j].outcome[k]] +=
            partial_trace(ComplexMatrix(rho.matrix() * op), dims, std::span<const bool>(keep.get(), dims.size()));
    }
    for (auto& t : taus) t = hermitian_part(t);
    return taus;
}

inline ProductPovm to_product_povm(const std::vector<std::vector<ComplexMatrix>>& locals, bool prune) {
    ProductPovm p;
    for (const auto& l : locals) {
        std::vector<HermitianOperator> kept;
        for (const auto& e : l)
            if (!prune || e.trace().real() >= kPruneTrace) kept.emplace_back(e);
        p.locals.emplace_back(std::move(kept));
    }
    return p;
}

struct LocalRun {
    std::vector<double> trace;
    std::vector<std::vector<ComplexMatrix>> locals;
    bool converged = false;
};

inline LocalRun local_see_saw_run(const MultipartiteState& rho, const LocalHamiltonians& hs,
                                  const SeeSawConfig& config, std::uint64_t seed) {
    const auto specs = spectra(hs);
    LocalRun run;
    for (std::size_t k = 0; k < rho.n_ancillas(); ++k) {
        const Index d = rho.ancilla_dims()[k];
        const std::size_t n = config.n_effects == 0 ? static_cast<std::size_t>(d * d) : config.n_effects;
        const Povm init = oracle::random_povm(d, n, derive_seed(seed, k));
        std::vector<ComplexMatrix> es;
        for (const auto& e : init.effects()) es.push_back(e.matrix());
        run.locals.push_back(std::move(es));
    }
    auto evaluate_locals = [&](const std::vector<std::vector<ComplexMatrix>>& locals) {
        const auto effects = product_effects(to_product_povm(locals, false));
        return std::make_pair(effects, evaluate(rho, hs, specs, effects));
    };

    auto [effects, ev] = evaluate_locals(run.locals);
    double current = ev.value;
    for (int it = 0; it < config.max_iterations; ++it) {
        auto candidate = run.locals;
        for (std::size_t k = 0; k < rho.n_ancillas(); ++k) {
            if (k > 0) std::tie(effects, ev) = evaluate_locals(candidate);
            const auto taus = local_taus(rho, hs, candidate, k, effects, ev);
            candidate[k] = solve_measurement_sdp_raw(taus, config.sdp_gap_tol).effects;
        }
        std::tie(effects, ev) = evaluate_locals(candidate);
        if (!(ev.value > current)) {
            run.trace.push_back(current);
            run.converged = true;
            break;
        }
        const double gain = ev.value - current;
        run.locals = std::move(candidate);
        current = ev.value;
        run.trace.push_back(current);
        if (gain < config.convergence_tol) {
            run.converged = true;
            break;
        }
    }
    return run;
}

}  // namespace detail

/// Coordinate ascent over the local POVMs: each ancilla in index order
/// solves the measurement SDP with the other effects and the conditional
/// unitaries held fixed. One sweep over all ancillas is one iteration.
inline LocalSeeSawResult local_see_saw(const MultipartiteState& rho, const LocalHamiltonians& hs,
                                       const SeeSawConfig& config) {
    detail::check_consistent(rho, hs);
    if (rho.n_ancillas() == 0) throw std::invalid_argument("local see-saw needs at least one ancilla");
    if (config.restarts < 1) throw std::invalid_argument("local see-saw needs at least one restart");
    LocalSeeSawResult best;
    for (int r = 0; r < config.restarts; ++r) {
        detail::LocalRun run = detail::local_see_saw_run(rho, hs, config, derive_seed(config.seed, static_cast<std::uint64_t>(r)));
        const double value = run.trace.empty() ? 0.0 : run.trace.back();
        best.restart_values.push_back(value);
        if (r == 0 || value > best.value) {
            best.value = value;
            best.povm = detail::to_product_povm(run.locals, true);
            best.objective_trace = std::move(run.trace);
            best.converged = run.converged;
            best.restart_index = r;
        }
    }
    return best;
}

}  // namespace ergolab
