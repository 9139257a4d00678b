// core.hpp
// Dense complex-matrix substrate: validated operator types, Kronecker products,
// partial traces, conditional states, qubit projectors and Hermitian
// eigendecomposition.
//
// Index convention: composite indices are mixed-radix with the first
// subsystem most significant. For a system/ancilla pair the joint index is
// s * d_A + a.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ergolab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-9;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kCompletenessTol = 1e-8;

class DimensionMismatch : public std::invalid_argument {
public:
    explicit DimensionMismatch(const std::string& what)
        : std::invalid_argument("dimension mismatch: " + what) {}
};

class InvalidOperator : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const ComplexMatrix& m) {
    for (Index i = 0; i < m.size(); ++i) {
        if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
    }
    return true;
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) {
    return (m + m.adjoint()) * 0.5;
}

inline bool is_exactly_diagonal(const ComplexMatrix& m) {
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
            if (i != j && m(i, j) != Complex(0.0, 0.0)) return false;
    return true;
}

struct Eigensystem {
    RealVector values;
    ComplexMatrix vectors;  // columns
};

// Ascending or descending, ties kept in input order. Exactly diagonal inputs
// are handled without an iterative solver so that degenerate spectra map to
// permutation matrices.
inline Eigensystem eigh_matrix(const ComplexMatrix& a, bool descending) {
    const Index d = a.rows();
    RealVector raw(d);
    ComplexMatrix raw_vectors;
    if (is_exactly_diagonal(a)) {
        for (Index i = 0; i < d; ++i) raw(i) = a(i, i).real();
        raw_vectors = ComplexMatrix::Identity(d, d);
    } else {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a);
        if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed to converge");
        raw = solver.eigenvalues();
        raw_vectors = solver.eigenvectors();
    }
    std::vector<Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), Index{0});
    if (descending) {
        std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return raw(x) > raw(y); });
    } else {
        std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return raw(x) < raw(y); });
    }
    Eigensystem out{RealVector(d), ComplexMatrix(d, d)};
    for (Index k = 0; k < d; ++k) {
        out.values(k) = raw(order[static_cast<std::size_t>(k)]);
        out.vectors.col(k) = raw_vectors.col(order[static_cast<std::size_t>(k)]);
    }
    return out;
}

inline RealVector eigenvalues_ascending(const ComplexMatrix& a) {
    if (is_exactly_diagonal(a)) {
        RealVector v = a.diagonal().real();
        std::sort(v.data(), v.data() + v.size());
        return v;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

// Replaces eigenvalues below zero by zero.
inline ComplexMatrix clip_negative(const ComplexMatrix& a) {
    Eigensystem es = eigh_matrix(a, false);
    if (es.values.size() == 0 || es.values(0) >= 0.0) return a;
    RealVector clipped = es.values.cwiseMax(0.0);
    return es.vectors * clipped.asDiagonal() * es.vectors.adjoint();
}

// Projects near-POVM effects onto the POVM set: PSD clip, then
// E_i -> S^{-1/2} E_i S^{-1/2} with S = sum_i E_i.
inline std::vector<ComplexMatrix> repair_povm(std::vector<ComplexMatrix> effects) {
    const Index d = effects.front().rows();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (auto& e : effects) {
        e = clip_negative(hermitian_part(e));
        sum += e;
    }
    const Eigensystem es = eigh_matrix(hermitian_part(sum), false);
    if (es.values(0) <= 0.0) throw std::runtime_error("effects do not span the ancilla space");
    const RealVector inv_sqrt = es.values.cwiseSqrt().cwiseInverse();
    const ComplexMatrix w = es.vectors * inv_sqrt.asDiagonal() * es.vectors.adjoint();
    for (auto& e : effects) e = hermitian_part(w * e * w);
    return effects;
}

inline Index product(std::span<const Index> dims) {
    Index p = 1;
    for (Index d : dims) p *= d;
    return p;
}

// Reduces `m` over the subsystems whose `keep` flag is false.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const Index> dims,
                                   std::span<const bool> keep) {
    const Index total = product(dims);
    if (m.rows() != total || m.cols() != total)
        throw DimensionMismatch("partial trace input is " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", subsystem product is " +
                                std::to_string(total));
    Index kept_dim = 1;
    Index traced_dim = 1;
    for (std::size_t k = 0; k < dims.size(); ++k) (keep[k] ? kept_dim : traced_dim) *= dims[k];

    // Split every joint index into (kept part, traced part).
    std::vector<Index> kept_of(static_cast<std::size_t>(total));
    std::vector<std::vector<Index>> by_traced(static_cast<std::size_t>(traced_dim));
    for (Index joint = 0; joint < total; ++joint) {
        Index rest = joint;
        Index kept = 0, kept_stride = 1;
        Index traced = 0, traced_stride = 1;
        for (std::size_t k = dims.size(); k-- > 0;) {
            const Index digit = rest % dims[k];
            rest /= dims[k];
            if (keep[k]) {
                kept += digit * kept_stride;
                kept_stride *= dims[k];
            } else {
                traced += digit * traced_stride;
                traced_stride *= dims[k];
            }
        }
        kept_of[static_cast<std::size_t>(joint)] = kept;
        by_traced[static_cast<std::size_t>(traced)].push_back(joint);
    }
    ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
    for (const auto& group : by_traced)
        for (Index i : group)
            for (Index j : group)
                out(kept_of[static_cast<std::size_t>(i)], kept_of[static_cast<std::size_t>(j)]) += m(i, j);
    return out;
}

// Tr_A[rho (I_S (x) e)], rho on S (x) A.
inline ComplexMatrix contract_ancilla(const ComplexMatrix& rho, Index d_s, Index d_a, const ComplexMatrix& e) {
    ComplexMatrix out = ComplexMatrix::Zero(d_s, d_s);
    for (Index s = 0; s < d_s; ++s)
        for (Index t = 0; t < d_s; ++t) {
            Complex acc(0.0, 0.0);
            for (Index a = 0; a < d_a; ++a)
                for (Index b = 0; b < d_a; ++b) acc += rho(s * d_a + a, t * d_a + b) * e(b, a);
            out(s, t) = acc;
        }
    return out;
}

// Tr_S[rho (k (x) I_A)], rho on S (x) A.
inline ComplexMatrix contract_system(const ComplexMatrix& rho, Index d_s, Index d_a, const ComplexMatrix& k) {
    ComplexMatrix out = ComplexMatrix::Zero(d_a, d_a);
    for (Index a = 0; a < d_a; ++a)
        for (Index b = 0; b < d_a; ++b) {
            Complex acc(0.0, 0.0);
            for (Index s = 0; s < d_s; ++s)
                for (Index t = 0; t < d_s; ++t) acc += rho(s * d_a + a, t * d_a + b) * k(t, s);
            out(a, b) = acc;
        }
    return out;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace detail

/// Dense d x d Hermitian matrix. Construction checks Hermiticity within
/// kHermitianTol (relative to the largest entry when that exceeds one) and
/// stores the exactly symmetrized part.
class HermitianOperator {
public:
    HermitianOperator() = default;

    explicit HermitianOperator(const ComplexMatrix& m, double tol = kHermitianTol) {
        if (m.rows() != m.cols())
            throw DimensionMismatch("operator must be square, got " + std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()));
        if (m.rows() == 0) throw InvalidOperator("operator dimension must be positive");
        if (!detail::all_finite(m)) throw InvalidOperator("operator has non-finite entries");
        const double scale = std::max(1.0, detail::max_abs(m));
        if (detail::max_abs(m - m.adjoint()) > tol * scale)
            throw InvalidOperator("operator is not Hermitian within tolerance");
        m_ = detail::hermitian_part(m);
    }

    static HermitianOperator diagonal(std::span<const double> entries) {
        RealVector v(static_cast<Index>(entries.size()));
        for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Index>(i)) = entries[i];
        return HermitianOperator(ComplexMatrix(v.cast<Complex>().asDiagonal()));
    }
    static HermitianOperator diagonal(std::initializer_list<double> entries) {
        return diagonal(std::span<const double>(entries.begin(), entries.size()));
    }
    static HermitianOperator identity(Index d) { return HermitianOperator(ComplexMatrix::Identity(d, d)); }

    Index dim() const { return m_.rows(); }
    const ComplexMatrix& matrix() const { return m_; }
    double trace() const { return m_.trace().real(); }

private:
    ComplexMatrix m_;
};

class UnitaryOperator {
public:
    UnitaryOperator() = default;

    explicit UnitaryOperator(const ComplexMatrix& m, double tol = kUnitaryTol) {
        if (m.rows() != m.cols() || m.rows() == 0) throw DimensionMismatch("unitary must be square and non-empty");
        if (!detail::all_finite(m)) throw InvalidOperator("unitary has non-finite entries");
        const ComplexMatrix defect = m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols());
        if (detail::max_abs(defect) > tol) throw InvalidOperator("matrix is not unitary within tolerance");
        m_ = m;
    }

    static UnitaryOperator identity(Index d) { return UnitaryOperator(ComplexMatrix::Identity(d, d)); }

    Index dim() const { return m_.rows(); }
    const ComplexMatrix& matrix() const { return m_; }

private:
    ComplexMatrix m_;
};

/// Positive semidefinite operator with trace in [0, 1]. Eigenvalues down to
/// -kPsdTol are accepted and clipped to zero.
class SubnormalizedState {
public:
    SubnormalizedState() = default;

    explicit SubnormalizedState(const ComplexMatrix& m) {
        HermitianOperator h(m);
        const RealVector ev = detail::eigenvalues_ascending(h.matrix());
        if (ev(0) < -kPsdTol) throw InvalidOperator("state is not positive semidefinite");
        m_ = ev(0) < 0.0 ? detail::clip_negative(h.matrix()) : h.matrix();
        const double tr = m_.trace().real();
        if (tr > 1.0 + kTraceTol) throw InvalidOperator("state trace exceeds one");
    }

    Index dim() const { return m_.rows(); }
    const ComplexMatrix& matrix() const { return m_; }
    double trace() const { return m_.trace().real(); }

protected:
    ComplexMatrix m_;
};

class DensityOperator : public SubnormalizedState {
public:
    DensityOperator() = default;

    explicit DensityOperator(const ComplexMatrix& m) : SubnormalizedState(m) {
        if (std::abs(trace() - 1.0) > kTraceTol) throw InvalidOperator("density operator must have unit trace");
    }

    double purity() const { return (m_ * m_).trace().real(); }
};

enum class Subsystem { System, Ancilla };

/// Joint state of a system S and an ancilla A, joint index s * d_A + a.
class BipartiteState {
public:
    BipartiteState() = default;

    BipartiteState(DensityOperator state, Index d_system, Index d_ancilla)
        : state_(std::move(state)), d_s_(d_system), d_a_(d_ancilla) {
        if (d_s_ <= 0 || d_a_ <= 0) throw DimensionMismatch("subsystem dimensions must be positive");
        if (state_.dim() != d_s_ * d_a_)
            throw DimensionMismatch("state dimension " + std::to_string(state_.dim()) + " != " +
                                    std::to_string(d_s_) + " * " + std::to_string(d_a_));
    }

    BipartiteState(const ComplexMatrix& m, Index d_system, Index d_ancilla)
        : BipartiteState(DensityOperator(m), d_system, d_ancilla) {}

    const DensityOperator& state() const { return state_; }
    const ComplexMatrix& matrix() const { return state_.matrix(); }
    Index dim_system() const { return d_s_; }
    Index dim_ancilla() const { return d_a_; }

private:
    DensityOperator state_;
    Index d_s_ = 0;
    Index d_a_ = 0;
};

/// Finite POVM: PSD effects summing to the identity.
class Povm {
public:
    Povm() = default;

    explicit Povm(std::vector<HermitianOperator> effects) : effects_(std::move(effects)) {
        if (effects_.empty()) throw InvalidOperator("POVM needs at least one effect");
        const Index d = effects_.front().dim();
        ComplexMatrix sum = ComplexMatrix::Zero(d, d);
        for (const auto& e : effects_) {
            if (e.dim() != d) throw DimensionMismatch("POVM effects have different dimensions");
            if (detail::eigenvalues_ascending(e.matrix())(0) < -kPsdTol)
                throw InvalidOperator("POVM effect is not positive semidefinite");
            sum += e.matrix();
        }
        if (detail::max_abs(sum - ComplexMatrix::Identity(d, d)) > kCompletenessTol)
            throw InvalidOperator("POVM effects do not sum to the identity");
    }

    static Povm trivial(Index d) { return Povm({HermitianOperator::identity(d)}); }

    /// Rank-one projective measurement onto the columns of `basis`.
    static Povm projective(const ComplexMatrix& basis) {
        std::vector<HermitianOperator> effects;
        for (Index k = 0; k < basis.cols(); ++k)
            effects.emplace_back(ComplexMatrix(basis.col(k) * basis.col(k).adjoint()));
        return Povm(std::move(effects));
    }

    static Povm computational(Index d) { return projective(ComplexMatrix::Identity(d, d)); }

    Index dim() const { return effects_.front().dim(); }
    std::size_t size() const { return effects_.size(); }
    const std::vector<HermitianOperator>& effects() const { return effects_; }
    const HermitianOperator& operator[](std::size_t i) const { return effects_[i]; }

    double completeness_residual() const {
        ComplexMatrix sum = ComplexMatrix::Zero(dim(), dim());
        for (const auto& e : effects_) sum += e.matrix();
        return detail::max_abs(sum - ComplexMatrix::Identity(dim(), dim()));
    }

private:
    std::vector<HermitianOperator> effects_;
};

inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) { return detail::kron(a, b); }

inline DensityOperator partial_trace(const BipartiteState& rho, Subsystem keep) {
    const Index dims[2] = {rho.dim_system(), rho.dim_ancilla()};
    const bool mask[2] = {keep == Subsystem::System, keep == Subsystem::Ancilla};
    return DensityOperator(detail::partial_trace(rho.matrix(), dims, mask));
}

/// gamma_i = Tr_A[rho (I (x) E_i)].
inline std::vector<SubnormalizedState> conditional_states(const BipartiteState& rho, const Povm& m) {
    if (m.dim() != rho.dim_ancilla())
        throw DimensionMismatch("POVM acts on dimension " + std::to_string(m.dim()) + ", ancilla has " +
                                std::to_string(rho.dim_ancilla()));
    std::vector<SubnormalizedState> out;
    out.reserve(m.size());
    for (const auto& e : m.effects())
        out.emplace_back(detail::contract_ancilla(rho.matrix(), rho.dim_system(), rho.dim_ancilla(), e.matrix()));
    return out;
}

/// Pi(alpha, beta) = (I + cos(alpha) Z + sin(alpha)[cos(beta) X - sin(beta) Y]) / 2
inline HermitianOperator bloch_projector(double alpha, double beta) {
    const double nz = std::cos(alpha);
    const double nx = std::sin(alpha) * std::cos(beta);
    const double ny = -std::sin(alpha) * std::sin(beta);
    ComplexMatrix p(2, 2);
    p(0, 0) = 0.5 * (1.0 + nz);
    p(1, 1) = 0.5 * (1.0 - nz);
    p(0, 1) = 0.5 * Complex(nx, -ny);
    p(1, 0) = 0.5 * Complex(nx, ny);
    return HermitianOperator(p);
}

enum class Order { Ascending, Descending };

struct EigenDecomposition {
    RealVector eigenvalues;
    UnitaryOperator eigenvectors;
};

inline EigenDecomposition eigh(const HermitianOperator& a, Order order = Order::Ascending) {
    detail::Eigensystem es = detail::eigh_matrix(a.matrix(), order == Order::Descending);
    return {std::move(es.values), UnitaryOperator(es.vectors)};
}

}  // namespace ergolab
