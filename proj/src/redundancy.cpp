#include "qdarwin/redundancy.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "qdarwin/chernoff.hpp"

namespace qdarwin {

double information_threshold(double hs, double delta, ThresholdMode mode) {
    if (!(delta > 0.0)) throw DomainError("delta must be positive: perfect knowledge needs an infinite fragment");
    if (mode == ThresholdMode::Linear) {
        if (!(delta < 1.0)) throw DomainError("delta must be below 1 in linear threshold mode");
        return hs * (1.0 - delta);
    }
    if (!(delta <= 0.5)) throw DomainError("delta must lie in (0, 1/2] in entropic threshold mode");
    return hs - binary_entropy(delta);
}

std::size_t min_fragment_size(const FragmentMeasure& measure, double hs, double delta, ThresholdMode mode,
                              std::size_t env_size) {
    const double threshold = information_threshold(hs, delta, mode);
    if (env_size == 0) throw InsufficientEnvironment("insufficient environment: no components");
    const std::size_t scan_end = std::min(env_size, kScanLimit);
    for (std::size_t f = 1; f <= scan_end; ++f) {
        if (measure(f) >= threshold) return f;
    }
    if (env_size > kScanLimit && measure(env_size) >= threshold) {
        std::size_t lo = kScanLimit, hi = env_size;  // measure(lo) fails, measure(hi) passes
        while (hi - lo > 1) {
            const std::size_t mid = lo + (hi - lo) / 2;
            (measure(mid) >= threshold ? hi : lo) = mid;
        }
        return hi;
    }
    throw InsufficientEnvironment("insufficient environment: threshold " + std::to_string(threshold) +
                                  " bits not reached with " + std::to_string(env_size) + " components");
}

double redundancy(std::size_t env_size, std::size_t f_delta) {
    if (f_delta == 0) throw PreconditionError("redundancy: f_delta must be at least 1");
    if (f_delta > env_size) throw InsufficientEnvironment("redundancy: f_delta exceeds the environment size");
    return static_cast<double>(env_size) / static_cast<double>(f_delta);
}

double asymptotic_redundancy(std::size_t env_size, double gamma_sq, double delta) {
    if (!(delta > 0.0 && delta <= 0.5)) throw DomainError("asymptotic_redundancy: delta must lie in (0, 1/2]");
    return static_cast<double>(env_size) * analytic_exponent(gamma_sq) / std::log(1.0 / delta);
}

FragmentMeasure closed_form_measure(InfoMeasure which, double p1, double gamma_sq, double prefactor) {
    if (!(gamma_sq >= 0.0 && gamma_sq <= 1.0)) throw DomainError("closed_form_measure: |gamma|^2 outside [0, 1]");
    return [=](std::size_t f) {
        return closed_form_value(which, p1, std::pow(gamma_sq, static_cast<double>(f)), prefactor);
    };
}

FragmentMeasure closed_form_measure(InfoMeasure which, double p1, std::vector<double> gamma_sq, double prefactor) {
    auto prefix = std::make_shared<std::vector<double>>(gamma_sq.size() + 1, 1.0);
    for (std::size_t k = 0; k < gamma_sq.size(); ++k) {
        if (!(gamma_sq[k] >= 0.0 && gamma_sq[k] <= 1.0)) throw DomainError("closed_form_measure: |gamma_k|^2 outside [0, 1]");
        (*prefix)[k + 1] = (*prefix)[k] * gamma_sq[k];
    }
    return [=](std::size_t f) {
        if (f >= prefix->size()) throw InsufficientEnvironment("closed_form_measure: fragment larger than environment");
        return closed_form_value(which, p1, (*prefix)[f], prefactor);
    };
}

RedundancyResult analyze_redundancy(const FragmentMeasure& measure, double hs, double delta, ThresholdMode mode,
                                    std::size_t env_size, double gamma_sq) {
    RedundancyResult r;
    r.delta = delta;
    r.f_delta = min_fragment_size(measure, hs, delta, mode, env_size);
    r.r_delta = redundancy(env_size, r.f_delta);
    r.r_asymptotic = asymptotic_redundancy(env_size, gamma_sq, delta);
    return r;
}

}  // namespace qdarwin
