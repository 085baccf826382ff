#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "qdarwin/measures.hpp"
#include "qdarwin/numerics.hpp"

namespace qdarwin {

/// tr[rho1^c rho2^(1-c)], real part; the imaginary residue must be below 1e-12.
double generalized_overlap(const DensityMatrix& rho1, const DensityMatrix& rho2, double c);

/// Spectral data for one conditional-state pair, so that the generalized
/// overlap can be evaluated at many c without re-diagonalizing:
/// tr[rho1^c rho2^(1-c)] = sum_ij a_i^c b_j^(1-c) |<u_i|v_j>|^2.
class OverlapProfile {
public:
    OverlapProfile(const DensityMatrix& rho1, const DensityMatrix& rho2);

    [[nodiscard]] double operator()(double c) const;
    [[nodiscard]] bool both_pure() const noexcept { return both_pure_; }

private:
    std::vector<double> a_, b_;
    Eigen::MatrixXd weights_;  // |<u_i|v_j>|^2 restricted to the supports
    bool both_pure_ = false;
};

using ConditionalPair = std::pair<DensityMatrix, DensityMatrix>;

/// The QCB objective p1^c p2^(1-c) prod_k tr[rho_{k|1}^c rho_{k|2}^(1-c)] and its log.
class ChernoffObjective {
public:
    ChernoffObjective(double p1, const std::vector<ConditionalPair>& components);

    [[nodiscard]] double log_value(double c) const;
    [[nodiscard]] double value(double c) const;
    /// sum_k ln tr[...] at c (nats; -inf if some overlap vanishes).
    [[nodiscard]] double log_overlap(double c) const;
    [[nodiscard]] double p1() const noexcept { return p1_; }
    [[nodiscard]] std::size_t component_count() const noexcept { return profiles_.size(); }
    [[nodiscard]] bool all_pure() const noexcept;

private:
    double p1_;
    std::vector<OverlapProfile> profiles_;
};

struct ChernoffResult {
    double c_star = 0.0;
    double pe_bound = 0.0;
    /// p1^c* p2^(1-c*)
    double prefactor = 0.0;
    /// -ln(prod_k overlap at c*) / #components, nats per component.
    double exponent_per_component = 0.0;
};

namespace chernoff_solver {
inline constexpr double kTolerance = 1e-10;
inline constexpr int kMaxIterations = 200;
}  // namespace chernoff_solver

/// Minimizes the QCB objective over c in [0, 1] by golden-section search on the
/// log objective (which is convex in c), then compares against both
/// boundaries. Boundary ties go to the smaller prior, i.e. min[p1, p2].
ChernoffResult qcb_error_bound(double p1, const std::vector<ConditionalPair>& components);

enum class PrefactorChoice {
    MinPrior,      // min[p1, p2], exact for pure conditional states
    GeometricMean, // sqrt(p1 p2), the c = 1/2 mixed-state bound
};

double qcb_prefactor(double p1, PrefactorChoice choice);
/// MinPrior when every conditional state has purity >= 1 - 1e-10.
PrefactorChoice default_prefactor_choice(const std::vector<ConditionalPair>& components);

/// X_QCB = H_S - h(C Gamma).
double qcb_info(double hs, double prefactor, double gamma_eff);

/// xi = -ln(gamma_sq), nats per component.
double analytic_exponent(double gamma_sq);

struct CurvePoint {
    std::size_t fragment_size = 0;
    double value = 0.0;
    /// H_S - value computed without cancellation, when available.
    std::optional<double> deficit;
};
using InfoCurve = std::vector<CurvePoint>;

struct FitWindow {
    std::size_t first = 0;
    std::size_t last = 0;  // inclusive
};

/// Least-squares slope of -ln(H_S - X) against fragment size over the window.
double decay_exponent_fit(const InfoCurve& curve, double hs, FitWindow window);

/// Below this Gamma the chi(S-check:F) deficit switches from subtraction to
/// its leading-order expression; relative error of that switch is O(Gamma).
inline constexpr double kLeadingOrderSwitch = 1e-10;

/// Leading-order decay H_S - X for small Gamma (bits).
double leading_order_deficit(InfoMeasure which, double p1, double gamma_eff, double prefactor);
double leading_order_deficit(InfoMeasure which, double p1, double gamma_sq, std::size_t fragment_size,
                             double prefactor);

/// Closed-form value of a measure for aggregate overlap Gamma (bits).
double closed_form_value(InfoMeasure which, double p1, double gamma_eff, double prefactor);
/// H_S minus the closed-form value, evaluated without catastrophic cancellation.
double closed_form_deficit(InfoMeasure which, double p1, double gamma_eff, double prefactor);

}  // namespace qdarwin
