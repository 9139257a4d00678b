// sdp.hpp
// Measurement subproblem of the see-saw:
//
//   primal:  min_E  sum_i Tr(tau_i E_i)   s.t. sum_i E_i = I, E_i >= 0
//   dual:    max_Y  Tr(Y)                 s.t. Y <= tau_i for all i
//
// Solved by a log-barrier path-following method on the dual, whose only
// variable is one d x d Hermitian matrix. Along the central path the
// effects E_i = (tau_i - Y)^{-1} / t sum to the identity and the gap is
// n d / t. The recovered effects are projected onto the POVM set before the
// primal value is evaluated, so the reported gap is that of a feasible pair.

#pragma once

#include "ergolab/core.hpp"

#include <limits>
#include <optional>

namespace ergolab {

class SdpFailure : public std::runtime_error {
public:
    SdpFailure(const std::string& what, double gap) : std::runtime_error(what), gap_(gap) {}
    double gap() const { return gap_; }

private:
    double gap_;
};

struct SdpSolution {
    Povm povm;
    double primal = 0.0;
    double dual = 0.0;
    int newton_steps = 0;

    double gap() const { return primal - dual; }
};

namespace detail {

struct RawSdpSolution {
    std::vector<ComplexMatrix> effects;
    double primal = 0.0;
    double dual = 0.0;
    int newton_steps = 0;
};

// Isometric real coordinates of a Hermitian matrix:
// [A_aa ..., sqrt2 Re A_ab ..., sqrt2 Im A_ab ...] for a < b, so that
// Tr(A B) is the Euclidean inner product.
inline RealVector herm_to_vec(const ComplexMatrix& m) {
    const Index d = m.rows();
    RealVector v(d * d);
    Index k = 0;
    for (Index a = 0; a < d; ++a) v(k++) = m(a, a).real();
    for (Index a = 0; a < d; ++a)
        for (Index b = a + 1; b < d; ++b) v(k++) = std::sqrt(2.0) * m(a, b).real();
    for (Index a = 0; a < d; ++a)
        for (Index b = a + 1; b < d; ++b) v(k++) = std::sqrt(2.0) * m(a, b).imag();
    return v;
}

inline ComplexMatrix vec_to_herm(const RealVector& v, Index d) {
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    Index k = 0;
    for (Index a = 0; a < d; ++a) m(a, a) = v(k++);
    for (Index a = 0; a < d; ++a)
        for (Index b = a + 1; b < d; ++b) m(a, b) = v(k++) / std::sqrt(2.0);
    for (Index a = 0; a < d; ++a)
        for (Index b = a + 1; b < d; ++b) {
            m(a, b) += Complex(0.0, v(k++) / std::sqrt(2.0));
            m(b, a) = std::conj(m(a, b));
        }
    return m;
}

class DualBarrier {
public:
    DualBarrier(const std::vector<ComplexMatrix>& taus) : taus_(taus), d_(taus.front().rows()) {}

    // Barrier value -t Tr(Y) - sum log det(tau_i - Y); nullopt outside the domain.
    std::optional<double> value(const ComplexMatrix& y, double t) const {
        double f = -t * y.trace().real();
        for (const auto& tau : taus_) {
            Eigen::LLT<ComplexMatrix> llt(tau - y);
            if (llt.info() != Eigen::Success) return std::nullopt;
            const auto& l = llt.matrixL();
            for (Index a = 0; a < d_; ++a) {
                const double diag = std::real(l(a, a));
                if (!(diag > 0.0)) return std::nullopt;
                f -= 2.0 * std::log(diag);
            }
        }
        return f;
    }

    // Backtracking step along dy. The barrier change is evaluated through the
    // eigenvalues mu of L^{-1} dy L^{-dagger} (tau_i - Y = L L^dagger):
    //   f(Y + a dy) - f(Y) = -a t Tr(dy) - sum log(1 - a mu).
    double line_search(const ComplexMatrix& y, const ComplexMatrix& dy, double t, double decrement) const {
        std::vector<double> mus;
        for (const auto& tau : taus_) {
            Eigen::LLT<ComplexMatrix> llt(tau - y);
            const ComplexMatrix linv = llt.matrixL().solve(ComplexMatrix::Identity(d_, d_));
            const RealVector mu = eigenvalues_ascending(hermitian_part(linv * dy * linv.adjoint()));
            mus.insert(mus.end(), mu.data(), mu.data() + mu.size());
        }
        const double tr = dy.trace().real();
        double alpha = 1.0;
        for (int ls = 0; ls < 80; ++ls, alpha *= 0.5) {
            bool feasible = true;
            double change = -alpha * t * tr;
            for (double mu : mus) {
                if (alpha * mu >= 1.0) {
                    feasible = false;
                    break;
                }
                change -= std::log1p(-alpha * mu);
            }
            if (feasible && change <= -0.25 * alpha * decrement) return alpha;
        }
        return 0.0;
    }

    // Inverse slacks (tau_i - Y)^{-1}.
    std::vector<ComplexMatrix> inverse_slacks(const ComplexMatrix& y) const {
        std::vector<ComplexMatrix> out;
        out.reserve(taus_.size());
        const ComplexMatrix id = ComplexMatrix::Identity(d_, d_);
        for (const auto& tau : taus_) {
            Eigen::LLT<ComplexMatrix> llt(tau - y);
            out.push_back(hermitian_part(llt.solve(id)));
        }
        return out;
    }

    void gradient_hessian(const std::vector<ComplexMatrix>& inv, double t, RealVector& grad, Eigen::MatrixXd& hess) const {
        const Index n = d_ * d_;
        ComplexMatrix sum = ComplexMatrix::Zero(d_, d_);
        for (const auto& s : inv) sum += s;
        grad = herm_to_vec(sum) - t * herm_to_vec(ComplexMatrix::Identity(d_, d_));
        hess = Eigen::MatrixXd::Zero(n, n);
        const double r = 1.0 / std::sqrt(2.0);
        const Complex i(0.0, 1.0);
        for (const auto& s : inv) {
            Index k = 0;
            for (Index a = 0; a < d_; ++a) hess.col(k++) += herm_to_vec(s.col(a) * s.row(a));
            for (Index a = 0; a < d_; ++a)
                for (Index b = a + 1; b < d_; ++b) {
                    const ComplexMatrix m = (s.col(a) * s.row(b) + s.col(b) * s.row(a)) * r;
                    hess.col(k++) += herm_to_vec(m);
                }
            for (Index a = 0; a < d_; ++a)
                for (Index b = a + 1; b < d_; ++b) {
                    const ComplexMatrix m = (s.col(a) * s.row(b) - s.col(b) * s.row(a)) * (i * r);
                    hess.col(k++) += herm_to_vec(m);
                }
        }
        hess = 0.5 * (hess + hess.transpose()).eval();
    }

private:
    const std::vector<ComplexMatrix>& taus_;
    Index d_;
};

// Beyond this barrier weight the slacks fall below double resolution of the
// unit-scaled taus.
inline constexpr double kMaxBarrierWeight = 1e14;

inline RawSdpSolution solve_measurement_sdp_raw(const std::vector<ComplexMatrix>& taus_in, double gap_tol,
                                                int max_newton_steps = 2000) {
    if (taus_in.empty()) throw std::invalid_argument("measurement SDP needs at least one tau");
    const Index d = taus_in.front().rows();
    const auto n = static_cast<Index>(taus_in.size());
    for (const auto& tau : taus_in)
        if (tau.rows() != d || tau.cols() != d) throw DimensionMismatch("tau operators differ in dimension");
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);

    RawSdpSolution out;
    auto evaluate_primal = [&](const std::vector<ComplexMatrix>& effects) {
        double p = 0.0;
        for (Index i = 0; i < n; ++i) p += (taus_in[static_cast<std::size_t>(i)] * effects[static_cast<std::size_t>(i)]).trace().real();
        return p;
    };

    // Identical objectives: every POVM is optimal; return the uniform one.
    double spread = 0.0;
    double scale = 0.0;
    for (const auto& tau : taus_in) {
        spread = std::max(spread, max_abs(tau - taus_in.front()));
        scale = std::max(scale, max_abs(tau));
    }
    if (spread <= 1e-14 * std::max(1.0, scale)) {
        out.effects.assign(static_cast<std::size_t>(n), id / static_cast<double>(n));
        out.primal = evaluate_primal(out.effects);
        double worst = 0.0;
        for (const auto& tau : taus_in) worst = std::max(worst, (tau - taus_in.front()).norm());
        out.dual = taus_in.front().trace().real() - worst * static_cast<double>(d);
        return out;
    }

    // Shift and scale so that every tau is PSD with spectral norm at most one.
    double shift = std::numeric_limits<double>::infinity();
    for (const auto& tau : taus_in) shift = std::min(shift, eigenvalues_ascending(tau)(0));
    double norm = 0.0;
    std::vector<ComplexMatrix> taus;
    taus.reserve(taus_in.size());
    for (const auto& tau : taus_in) {
        taus.push_back(tau - shift * id);
        norm = std::max(norm, eigenvalues_ascending(taus.back())(d - 1));
    }
    norm = std::max(norm, 1e-300);
    for (auto& tau : taus) tau /= norm;

    const DualBarrier barrier(taus);
    ComplexMatrix y = -id;
    double t = 1.0;
    const double nd = static_cast<double>(n * d);
    const double target = 0.5 * gap_tol / norm;
    double best_gap = std::numeric_limits<double>::infinity();
    RealVector grad;
    Eigen::MatrixXd hess;

    while (out.newton_steps < max_newton_steps) {
        // Centering.
        for (int inner = 0; inner < 50 && out.newton_steps < max_newton_steps; ++inner) {
            const auto inv = barrier.inverse_slacks(y);
            barrier.gradient_hessian(inv, t, grad, hess);
            const RealVector step = hess.ldlt().solve(-grad);
            const double decrement = -grad.dot(step);
            ++out.newton_steps;
            if (!std::isfinite(decrement) || decrement < 1e-18) break;
            const ComplexMatrix dy = vec_to_herm(step, d);
            const double alpha = barrier.line_search(y, dy, t, decrement);
            if (alpha <= 0.0) break;
            y += alpha * dy;
            y = hermitian_part(y);
            if (decrement < 1e-9) break;
        }

        if (nd / t <= target) {
            const auto inv = barrier.inverse_slacks(y);
            std::vector<ComplexMatrix> effects;
            effects.reserve(inv.size());
            for (const auto& s : inv) effects.push_back(s / t);
            effects = repair_povm(std::move(effects));
            const double primal = evaluate_primal(effects);
            const double dual = norm * y.trace().real() + shift * static_cast<double>(d);
            best_gap = std::min(best_gap, primal - dual);
            if (primal - dual <= gap_tol) {
                out.effects = std::move(effects);
                out.primal = primal;
                out.dual = dual;
                return out;
            }
        }
        if (t > kMaxBarrierWeight) break;
        t *= 8.0;
    }
    throw SdpFailure("measurement SDP did not reach duality gap " + std::to_string(gap_tol) +
                         " (best " + std::to_string(best_gap) + ")",
                     best_gap);
}

}  // namespace detail

/// Optimal POVM for fixed tau operators with a dual certificate. Throws
/// SdpFailure if the duality gap cannot be brought below `gap_tol`.
inline SdpSolution solve_measurement_sdp(std::span<const HermitianOperator> taus, double gap_tol = 1e-9) {
    if (taus.empty()) throw std::invalid_argument("measurement SDP needs at least one tau");
    std::vector<ComplexMatrix> raw;
    raw.reserve(taus.size());
    for (const auto& tau : taus) raw.push_back(tau.matrix());
    detail::RawSdpSolution sol = detail::solve_measurement_sdp_raw(raw, gap_tol);
    std::vector<HermitianOperator> effects;
    effects.reserve(sol.effects.size());
    for (const auto& e : sol.effects) effects.emplace_back(e);
    return {Povm(std::move(effects)), sol.primal, sol.dual, sol.newton_steps};
}

}  // namespace ergolab
