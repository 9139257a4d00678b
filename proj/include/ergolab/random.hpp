// random.hpp
// Seeded generators for test instances. Every generator takes a 64-bit seed;
// independent streams are obtained from one master seed with derive_seed.

#pragma once

#include "ergolab/core.hpp"

#include <cstdint>
#include <random>

namespace ergolab {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Sub-seed number `index` of `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

namespace detail {

inline ComplexMatrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& gen) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix g(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) {
            const double re = normal(gen);
            const double im = normal(gen);
            g(i, j) = Complex(re, im);
        }
    return g;
}

inline ComplexMatrix haar_unitary_matrix(Index dim, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    const ComplexMatrix g = gaussian_matrix(dim, dim, gen);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix& r = qr.matrixQR();
    for (Index k = 0; k < dim; ++k) {
        const double mag = std::abs(r(k, k));
        if (mag > 0.0) q.col(k) *= r(k, k) / mag;
    }
    return q;
}

inline ComplexMatrix random_density_matrix(Index dim, Index rank, std::uint64_t seed) {
    if (rank < 1 || rank > dim)
        throw std::invalid_argument("rank " + std::to_string(rank) + " outside [1, " + std::to_string(dim) + "]");
    std::mt19937_64 gen(seed);
    const ComplexMatrix g = gaussian_matrix(dim, rank, gen);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return hermitian_part(rho);
}

inline ComplexMatrix random_hermitian_matrix(Index dim, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    return hermitian_part(gaussian_matrix(dim, dim, gen));
}

}  // namespace detail

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of diag(R) absorbed into Q.
inline UnitaryOperator haar_random_unitary(Index dim, std::uint64_t seed) {
    return UnitaryOperator(detail::haar_unitary_matrix(dim, seed));
}

/// G G^dagger / Tr(G G^dagger) with a dim x rank complex Gaussian G.
inline DensityOperator random_density(Index dim, Index rank, std::uint64_t seed) {
    return DensityOperator(detail::random_density_matrix(dim, rank, seed));
}

inline BipartiteState random_bipartite(Index d_system, Index d_ancilla, Index rank, std::uint64_t seed) {
    return BipartiteState(random_density(d_system * d_ancilla, rank, seed), d_system, d_ancilla);
}

inline HermitianOperator random_hermitian(Index dim, std::uint64_t seed) {
    return HermitianOperator(detail::random_hermitian_matrix(dim, seed));
}

/// Random quantum-classical state sum_j sigma_j (x) |j><j| with |j> the
/// columns of a Haar-random ancilla basis.
struct RandomQcInstance {
    BipartiteState state;
    UnitaryOperator ancilla_basis;
    std::vector<SubnormalizedState> blocks;
};

inline RandomQcInstance random_qc_state(Index d_system, Index d_ancilla, std::uint64_t seed) {
    const ComplexMatrix basis = detail::haar_unitary_matrix(d_ancilla, derive_seed(seed, 0));
    std::mt19937_64 gen(derive_seed(seed, 1));
    std::uniform_int_distribution<Index> rank_dist(1, d_system);
    std::exponential_distribution<double> weight_dist(1.0);
    std::vector<double> weights(static_cast<std::size_t>(d_ancilla));
    double total = 0.0;
    for (auto& w : weights) total += (w = weight_dist(gen) + 1e-3);

    ComplexMatrix rho = ComplexMatrix::Zero(d_system * d_ancilla, d_system * d_ancilla);
    std::vector<SubnormalizedState> blocks;
    for (Index j = 0; j < d_ancilla; ++j) {
        const Index rank = rank_dist(gen);
        ComplexMatrix sigma = detail::random_density_matrix(d_system, rank, derive_seed(seed, 2 + static_cast<std::uint64_t>(j)));
        sigma *= weights[static_cast<std::size_t>(j)] / total;
        blocks.emplace_back(sigma);
        const ComplexMatrix proj = basis.col(j) * basis.col(j).adjoint();
        rho += detail::kron(sigma, proj);
    }
    return {BipartiteState(detail::hermitian_part(rho), d_system, d_ancilla), UnitaryOperator(basis), std::move(blocks)};
}

}  // namespace ergolab
