#include "qdarwin/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qdarwin {

namespace {

void require_square_finite(const ComplexMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw PreconditionError(std::string(what) + ": matrix must be square and non-empty");
    }
    if (!m.allFinite()) {
        throw PreconditionError(std::string(what) + ": matrix has non-finite entries");
    }
}

}  // namespace

double hermiticity_defect(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) return INFINITY;
    if (m.size() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const ComplexMatrix& u) {
    if (u.rows() != u.cols()) return INFINITY;
    const auto n = u.rows();
    return (u.adjoint() * u - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
    require_square_finite(m_, "DensityMatrix");
    if (hermiticity_defect(m_) > tol::kHermitian) {
        throw PreconditionError("DensityMatrix: not Hermitian within 1e-12");
    }
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > tol::kTrace) {
        throw PreconditionError("DensityMatrix: trace " + std::to_string(tr) + " differs from 1");
    }
    ComplexMatrix sym = 0.5 * (m_ + m_.adjoint());
    m_ = std::move(sym);
}

DensityMatrix DensityMatrix::from_pure(const ComplexVector& psi) {
    return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return DensityMatrix(ComplexMatrix::Identity(n, n) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::diagonal(const std::vector<double>& probs) {
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(probs.size()),
                                          static_cast<Eigen::Index>(probs.size()));
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        m(k, k) = probs[i];
    }
    return DensityMatrix(std::move(m));
}

double DensityMatrix::purity() const {
    return (m_ * m_).trace().real();
}

PureState::PureState(ComplexVector amplitudes) : psi_(std::move(amplitudes)) {
    if (psi_.size() == 0 || !psi_.allFinite()) {
        throw PreconditionError("PureState: amplitudes must be finite and non-empty");
    }
    if (std::abs(psi_.norm() - 1.0) > tol::kNorm) {
        throw PreconditionError("PureState: norm differs from 1");
    }
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw PreconditionError("PureState::basis: index out of range");
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState(std::move(v));
}

EigenDecomposition hermitian_eig(const ComplexMatrix& m) {
    require_square_finite(m, "hermitian_eig");
    if (hermiticity_defect(m) > tol::kKernelHermitian) {
        throw PreconditionError("hermitian_eig: input is not Hermitian within 1e-10");
    }
    const ComplexMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("hermitian_eig: eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector clipped_spectrum(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("clipped_spectrum: eigensolver did not converge");
    }
    RealVector ev = solver.eigenvalues();
    for (auto& v : ev) {
        if (v < -tol::kNegativeEigenvalue) {
            throw NumericalFailure("density matrix has eigenvalue " + std::to_string(v) +
                                   " below -1e-12");
        }
        if (v < 0.0) v = 0.0;
    }
    return ev;
}

ComplexMatrix psd_power(const DensityMatrix& rho, double c) {
    if (!(c >= 0.0 && c <= 1.0)) throw DomainError("psd_power: exponent must lie in [0, 1]");
    const auto eig = hermitian_eig(rho.matrix());
    RealVector powered(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < powered.size(); ++i) {
        double lambda = eig.eigenvalues(i);
        if (lambda < -tol::kNegativeEigenvalue) {
            throw NumericalFailure("psd_power: eigenvalue below -1e-12");
        }
        powered(i) = lambda <= tol::kSupport ? 0.0 : std::pow(lambda, c);
    }
    return eig.eigenvectors * powered.asDiagonal() * eig.eigenvectors.adjoint();
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& factor_dims,
                            const std::vector<std::size_t>& keep) {
    const std::size_t total = std::accumulate(factor_dims.begin(), factor_dims.end(),
                                              std::size_t{1}, std::multiplies<>());
    if (factor_dims.empty() || total != rho.dim()) {
        throw PreconditionError("partial_trace: factor dimensions do not multiply to rho.dim");
    }
    std::vector<bool> kept(factor_dims.size(), false);
    for (auto k : keep) {
        if (k >= factor_dims.size()) throw PreconditionError("partial_trace: keep index out of range");
        if (kept[k]) throw PreconditionError("partial_trace: duplicate keep index");
        kept[k] = true;
    }

    // Row-major mixed radix: factor 0 is the most significant digit.
    const std::size_t n = factor_dims.size();
    std::vector<std::size_t> stride(n);
    {
        std::size_t s = 1;
        for (std::size_t i = n; i-- > 0;) {
            stride[i] = s;
            s *= factor_dims[i];
        }
    }
    std::vector<std::size_t> kept_idx, traced_idx;
    for (std::size_t i = 0; i < n; ++i) (kept[i] ? kept_idx : traced_idx).push_back(i);

    auto offsets_for = [&](const std::vector<std::size_t>& which) {
        std::size_t count = 1;
        for (auto i : which) count *= factor_dims[i];
        std::vector<std::size_t> offsets(count, 0);
        for (std::size_t lin = 0; lin < count; ++lin) {
            std::size_t rem = lin, off = 0;
            for (std::size_t j = which.size(); j-- > 0;) {
                const auto f = which[j];
                off += (rem % factor_dims[f]) * stride[f];
                rem /= factor_dims[f];
            }
            offsets[lin] = off;
        }
        return offsets;
    };
    const auto kept_off = offsets_for(kept_idx);
    const auto traced_off = offsets_for(traced_idx);

    const auto dk = static_cast<Eigen::Index>(kept_off.size());
    ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
    const ComplexMatrix& m = rho.matrix();
    for (Eigen::Index r = 0; r < dk; ++r) {
        for (Eigen::Index c = 0; c < dk; ++c) {
            Complex acc = 0.0;
            for (auto t : traced_off) {
                acc += m(static_cast<Eigen::Index>(kept_off[r] + t),
                         static_cast<Eigen::Index>(kept_off[c] + t));
            }
            out(r, c) = acc;
        }
    }
    return DensityMatrix(std::move(out));
}

double von_neumann_entropy(const DensityMatrix& rho) {
    const RealVector ev = clipped_spectrum(rho);
    double h = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const double l = ev(i);
        if (l > 0.0) h -= l * std::log2(l);
    }
    return std::clamp(h, 0.0, std::log2(static_cast<double>(rho.dim())));
}

double shannon_entropy(const std::vector<double>& probs) {
    std::vector<double> sorted = probs;
    std::sort(sorted.begin(), sorted.end());
    double h = 0.0;
    for (double p : sorted) {
        if (p < 0.0) throw DomainError("shannon_entropy: negative probability");
        if (p > 0.0) h -= p * std::log2(p);
    }
    return std::max(h, 0.0);
}

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("binary_entropy: argument outside [0, 1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    // Evaluate on min(x, 1-x) so that h(x) == h(1-x) bit for bit.
    const double a = std::min(x, 1.0 - x);
    const double b = 1.0 - a;
    return -a * std::log2(a) - b * std::log2(b);
}

double trace_norm(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    const auto eig = hermitian_eig(m);
    double s = 0.0;
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) s += std::abs(eig.eigenvalues(i));
    return s;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix kron_all(const std::vector<ComplexMatrix>& factors) {
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (const auto& f : factors) out = kron(out, f);
    return out;
}

}  // namespace qdarwin
