#include "qdarwin/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qdarwin {

namespace {

void check_prior(double p1, const char* who) {
    if (!(p1 >= 0.0 && p1 <= 1.0)) throw DomainError(std::string(who) + ": p1 outside [0, 1]");
}

void check_overlap(double gamma_eff, const char* who) {
    if (!(gamma_eff >= 0.0 && gamma_eff <= 1.0)) throw DomainError(std::string(who) + ": Gamma outside [0, 1]");
}

bool degenerate_prior(double p1) { return p1 == 0.0 || p1 == 1.0; }

double arctanh2(double x) { return 0.5 * std::log2((1.0 + x) / (1.0 - x)); }

}  // namespace

const char* to_string(InfoMeasure m) {
    switch (m) {
        case InfoMeasure::HolevoPointer: return "holevo_pointer";
        case InfoMeasure::Accessible: return "accessible_info";
        case InfoMeasure::Qcb: return "qcb_info";
    }
    return "unknown";
}

double clamp_error_probability(double pe, double upper) {
    if (pe < 0.0) {
        if (pe < -1e-12) throw NumericalFailure("error probability " + std::to_string(pe) + " is negative");
        return 0.0;
    }
    if (pe > upper) {
        if (pe > upper + 1e-12) throw NumericalFailure("error probability " + std::to_string(pe) + " exceeds its bound");
        return upper;
    }
    return pe;
}

double holevo_pointer_numeric(const BranchingState& b) {
    const std::size_t dim = b.fragment_dim();
    if (dim > kMeasureDimCap) {
        throw DimensionCapExceeded("holevo_pointer_numeric: fragment dimension " + std::to_string(dim) +
                                   " exceeds 2^10; use holevo_pointer_closed_form");
    }
    const auto& probs = b.pointer.probabilities();
    const auto n = static_cast<Eigen::Index>(dim);
    ComplexMatrix mixture = ComplexMatrix::Zero(n, n);
    double conditional = 0.0;
    for (std::size_t s = 0; s < probs.size(); ++s) {
        if (probs[s] == 0.0) continue;
        const DensityMatrix rho = b.assemble(s);
        mixture += probs[s] * rho.matrix();
        conditional += probs[s] * von_neumann_entropy(rho);
    }
    // Re-normalize away the 1e-16 drift from summing the probabilities.
    mixture /= mixture.trace().real();
    const double chi = von_neumann_entropy(DensityMatrix(std::move(mixture))) - conditional;
    return std::max(chi, 0.0);
}

double holevo_pointer_closed_form(double p1, double gamma_eff) {
    check_prior(p1, "holevo_pointer_closed_form");
    check_overlap(gamma_eff, "holevo_pointer_closed_form");
    if (degenerate_prior(p1)) return 0.0;
    const double p2 = 1.0 - p1;
    // 1 - 4 p1 p2 (1 - Gamma) = (p2 - p1)^2 + 4 p1 p2 Gamma
    const double x = std::sqrt((p2 - p1) * (p2 - p1) + 4.0 * p1 * p2 * gamma_eff);
    return binary_entropy(std::min(1.0, 0.5 * (1.0 + x)));
}

double accessible_info_closed_form(double p1, double gamma_eff) {
    check_prior(p1, "accessible_info_closed_form");
    check_overlap(gamma_eff, "accessible_info_closed_form");
    if (degenerate_prior(p1)) return 0.0;
    const double p2 = 1.0 - p1;
    const double hs = binary_entropy(p1);
    const double y = std::sqrt(std::max(0.0, 1.0 - 4.0 * p1 * p2 * gamma_eff));
    return std::clamp(hs - binary_entropy(std::min(1.0, 0.5 * (1.0 + y))), 0.0, hs);
}

double holevo_pointer_arctanh_form(double p1, double gamma_eff) {
    check_prior(p1, "holevo_pointer_arctanh_form");
    if (!(gamma_eff > 0.0 && gamma_eff < 1.0)) throw DomainError("holevo_pointer_arctanh_form: Gamma must lie in (0, 1)");
    if (degenerate_prior(p1)) return 0.0;
    const double p2 = 1.0 - p1;
    const double x = std::sqrt(1.0 - 4.0 * p1 * p2 * (1.0 - gamma_eff));
    return -0.5 * std::log2(p1 * p2 * (1.0 - gamma_eff)) - x * arctanh2(x);
}

double accessible_info_arctanh_form(double p1, double gamma_eff) {
    check_prior(p1, "accessible_info_arctanh_form");
    if (!(gamma_eff > 0.0 && gamma_eff < 1.0)) throw DomainError("accessible_info_arctanh_form: Gamma must lie in (0, 1)");
    if (degenerate_prior(p1)) return 0.0;
    const double p2 = 1.0 - p1;
    const double y = std::sqrt(1.0 - 4.0 * p1 * p2 * gamma_eff);
    return binary_entropy(p1) + 0.5 * std::log2(p1 * p2 * gamma_eff) + y * arctanh2(y);
}

double helstrom_error_numeric(double p1, const DensityMatrix& rho1, const DensityMatrix& rho2) {
    check_prior(p1, "helstrom_error_numeric");
    if (rho1.dim() != rho2.dim()) throw PreconditionError("helstrom_error_numeric: dimension mismatch");
    if (rho1.dim() > kMeasureDimCap) throw DimensionCapExceeded("helstrom_error_numeric: dimension exceeds 2^10");
    const double p2 = 1.0 - p1;
    const ComplexMatrix diff = p1 * rho1.matrix() - p2 * rho2.matrix();
    const double pe = 0.5 * (1.0 - trace_norm(diff));
    return clamp_error_probability(pe, std::min(p1, p2));
}

double helstrom_error_pure_product(double p1, double gamma_eff) {
    check_prior(p1, "helstrom_error_pure_product");
    check_overlap(gamma_eff, "helstrom_error_pure_product");
    if (degenerate_prior(p1)) return 0.0;
    const double q = 4.0 * p1 * (1.0 - p1) * gamma_eff;
    // 1 - sqrt(1 - q) = q / (1 + sqrt(1 - q)) avoids cancellation as q -> 0.
    return clamp_error_probability(0.5 * q / (1.0 + std::sqrt(std::max(0.0, 1.0 - q))));
}

double accessible_info_from_pe(double hs, double pe) {
    if (!(pe >= 0.0 && pe <= 0.5)) throw DomainError("accessible_info_from_pe: P_e outside [0, 1/2]");
    if (!(hs >= 0.0)) throw DomainError("accessible_info_from_pe: H_S must be non-negative");
    return hs - binary_entropy(pe);
}

double fano_lower_bound(double hs, double pe, int pointer_dim, FanoLog log) {
    if (pointer_dim < 2) throw DomainError("fano_lower_bound: D must be at least 2");
    const double d = static_cast<double>(pointer_dim);
    if (!(pe >= 0.0 && pe <= 1.0 - 1.0 / d)) throw DomainError("fano_lower_bound: P_e outside [0, 1 - 1/D]");
    const double log_term = log == FanoLog::Bits ? std::log2(d - 1.0) : std::log(d - 1.0);
    return hs - binary_entropy(pe) - pe * log_term;
}

double qmi(const DensityMatrix& rho_joint, const std::vector<std::size_t>& factor_dims,
           const std::vector<std::size_t>& part_a) {
    if (rho_joint.dim() > kJointDimCap) throw DimensionCapExceeded("qmi: joint dimension exceeds 2^13");
    std::vector<bool> in_a(factor_dims.size(), false);
    for (auto i : part_a) {
        if (i >= factor_dims.size()) throw PreconditionError("qmi: factor index out of range");
        in_a[i] = true;
    }
    std::vector<std::size_t> a, b;
    for (std::size_t i = 0; i < factor_dims.size(); ++i) (in_a[i] ? a : b).push_back(i);
    if (a.empty() || b.empty()) return 0.0;
    const double ha = von_neumann_entropy(partial_trace(rho_joint, factor_dims, a));
    const double hb = von_neumann_entropy(partial_trace(rho_joint, factor_dims, b));
    const double hab = von_neumann_entropy(rho_joint);
    const double i_ab = ha + hb - hab;
    if (i_ab < -1e-9) throw NumericalFailure("qmi: negative mutual information");
    return std::max(i_ab, 0.0);
}

}  // namespace qdarwin
