#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "qdarwin/measures.hpp"

namespace qdarwin {

/// Raised when no fragment of the environment reaches the information threshold.
struct InsufficientEnvironment : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Information (bits) carried by a fragment of the given size.
using FragmentMeasure = std::function<double(std::size_t)>;

enum class ThresholdMode {
    Linear,    // X >= H_S (1 - delta)
    Entropic,  // X >= H_S - h(delta)
};

struct RedundancyResult {
    double delta = 0.0;
    std::size_t f_delta = 0;
    double r_delta = 0.0;
    double r_asymptotic = 0.0;
};

/// Above this size the forward scan hands over to bisection.
inline constexpr std::size_t kScanLimit = 1'000'000;

double information_threshold(double hs, double delta, ThresholdMode mode);

/// Smallest fragment size whose information reaches the threshold. The measure
/// must be non-decreasing in fragment size.
std::size_t min_fragment_size(const FragmentMeasure& measure, double hs, double delta, ThresholdMode mode,
                              std::size_t env_size);

/// R_delta = #E / #F_delta.
double redundancy(std::size_t env_size, std::size_t f_delta);

/// Leading-order R_delta = #E (-ln |gamma|^2) / ln(1/delta). delta is limited to
/// (0, 1/2] where the asymptotic form is meaningful.
double asymptotic_redundancy(std::size_t env_size, double gamma_sq, double delta);

/// Closed-form measure for a homogeneous environment, Gamma = gamma_sq^#F.
FragmentMeasure closed_form_measure(InfoMeasure which, double p1, double gamma_sq, double prefactor);
/// Closed-form measure for an inhomogeneous environment; fragments take the
/// first #F components, Gamma = prod_{k < #F} gamma_sq[k].
FragmentMeasure closed_form_measure(InfoMeasure which, double p1, std::vector<double> gamma_sq, double prefactor);

/// min_fragment_size, redundancy and the asymptotic formula together.
RedundancyResult analyze_redundancy(const FragmentMeasure& measure, double hs, double delta, ThresholdMode mode,
                                    std::size_t env_size, double gamma_sq);

}  // namespace qdarwin
