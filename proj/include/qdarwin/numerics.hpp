#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qdarwin {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Error taxonomy shared by every module. The CLI maps these onto exit codes.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DimensionCapExceeded : std::length_error {
    using std::length_error::length_error;
};
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace tol {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kTrace = 1e-12;
inline constexpr double kNegativeEigenvalue = 1e-12;
/// Eigenvalues at or below this count as outside the support (so 0^c = 0 holds
/// for roundoff-level eigenvalues too).
inline constexpr double kSupport = 1e-12;
inline constexpr double kNorm = 1e-12;
inline constexpr double kKernelHermitian = 1e-10;
inline constexpr double kUnitary = 1e-10;
}  // namespace tol

// Entropies and informations are in bits; decay exponents are in nats per
// environment component. These are the only two conversion constants.
inline constexpr double kLn2 = 0.693147180559945309417232121458;
inline constexpr double kBitsPerNat = 1.0 / kLn2;

/// A validated density matrix: Hermitian, unit trace, positive semidefinite
/// up to the clipping tolerance. The stored matrix is exactly Hermitian
/// (symmetrized on construction).
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m);

    static DensityMatrix from_pure(const ComplexVector& psi);
    static DensityMatrix maximally_mixed(std::size_t dim);
    static DensityMatrix diagonal(const std::vector<double>& probs);

    [[nodiscard]] const ComplexMatrix& matrix() const noexcept { return m_; }
    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    [[nodiscard]] double purity() const;

private:
    ComplexMatrix m_;
};

/// A normalized state vector.
class PureState {
public:
    explicit PureState(ComplexVector amplitudes);

    static PureState basis(std::size_t dim, std::size_t index);

    [[nodiscard]] const ComplexVector& amplitudes() const noexcept { return psi_; }
    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(psi_.size()); }
    [[nodiscard]] DensityMatrix projector() const { return DensityMatrix::from_pure(psi_); }

private:
    ComplexVector psi_;
};

struct EigenDecomposition {
    RealVector eigenvalues;     // ascending
    ComplexMatrix eigenvectors; // columns
};

/// Largest entrywise deviation |m - m^dagger|.
double hermiticity_defect(const ComplexMatrix& m);
double unitarity_defect(const ComplexMatrix& u);

EigenDecomposition hermitian_eig(const ComplexMatrix& m);

/// Eigenvalues of a density matrix, ascending, with [-1e-12, 0) clipped to 0.
/// Anything more negative throws NumericalFailure.
RealVector clipped_spectrum(const DensityMatrix& rho);

/// rho^c on the spectral decomposition; 0^0 is taken as 0, so c = 0 yields the
/// support projector.
ComplexMatrix psd_power(const DensityMatrix& rho, double c);

/// Partial trace over every factor not listed in `keep`. Kept factors retain
/// their relative order.
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::size_t>& factor_dims,
                            const std::vector<std::size_t>& keep);

double von_neumann_entropy(const DensityMatrix& rho);

/// Shannon entropy in bits of a probability vector; 0 log 0 = 0.
double shannon_entropy(const std::vector<double>& probs);

double binary_entropy(double x);

double trace_norm(const ComplexMatrix& m);

/// Kronecker product of a list of square matrices; an empty list gives [[1]].
ComplexMatrix kron_all(const std::vector<ComplexMatrix>& factors);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qdarwin
