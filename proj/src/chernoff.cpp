#include "qdarwin/chernoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qdarwin {

namespace {

void check_c(double c) {
    if (!(c >= 0.0 && c <= 1.0)) throw DomainError("Chernoff parameter c outside [0, 1]");
}

// Spectrum and eigenvectors restricted to strictly positive (clipped) eigenvalues.
struct Support {
    std::vector<double> values;
    ComplexMatrix vectors;
};

Support support_of(const DensityMatrix& rho) {
    const auto eig = hermitian_eig(rho.matrix());
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        const double l = eig.eigenvalues(i);
        if (l < -tol::kNegativeEigenvalue) throw NumericalFailure("conditional state has a negative eigenvalue");
        if (l > tol::kSupport) keep.push_back(i);
    }
    Support s;
    s.vectors.resize(eig.eigenvectors.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
        s.values.push_back(eig.eigenvalues(keep[j]));
        s.vectors.col(static_cast<Eigen::Index>(j)) = eig.eigenvectors.col(keep[j]);
    }
    return s;
}

}  // namespace

double generalized_overlap(const DensityMatrix& rho1, const DensityMatrix& rho2, double c) {
    check_c(c);
    if (rho1.dim() != rho2.dim()) throw PreconditionError("generalized_overlap: dimension mismatch");
    const Complex t = (psd_power(rho1, c) * psd_power(rho2, 1.0 - c)).trace();
    if (std::abs(t.imag()) > 1e-12) throw NumericalFailure("generalized_overlap: imaginary residue above 1e-12");
    return std::clamp(t.real(), 0.0, 1.0);
}

OverlapProfile::OverlapProfile(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    if (rho1.dim() != rho2.dim()) throw PreconditionError("OverlapProfile: dimension mismatch");
    const Support s1 = support_of(rho1);
    const Support s2 = support_of(rho2);
    a_ = s1.values;
    b_ = s2.values;
    weights_ = (s1.vectors.adjoint() * s2.vectors).cwiseAbs2();
    both_pure_ = rho1.purity() >= 1.0 - 1e-10 && rho2.purity() >= 1.0 - 1e-10;
}

double OverlapProfile::operator()(double c) const {
    check_c(c);
    double total = 0.0;
    for (std::size_t i = 0; i < a_.size(); ++i) {
        const double ai = std::pow(a_[i], c);
        for (std::size_t j = 0; j < b_.size(); ++j) {
            total += ai * std::pow(b_[j], 1.0 - c) *
                     weights_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return std::clamp(total, 0.0, 1.0);
}

ChernoffObjective::ChernoffObjective(double p1, const std::vector<ConditionalPair>& components) : p1_(p1) {
    if (!(p1 >= 0.0 && p1 <= 1.0)) throw DomainError("ChernoffObjective: p1 outside [0, 1]");
    profiles_.reserve(components.size());
    for (const auto& [r1, r2] : components) profiles_.emplace_back(r1, r2);
}

bool ChernoffObjective::all_pure() const noexcept {
    return std::all_of(profiles_.begin(), profiles_.end(), [](const auto& p) { return p.both_pure(); });
}

double ChernoffObjective::log_overlap(double c) const {
    double s = 0.0;
    for (const auto& prof : profiles_) {
        const double o = prof(c);
        if (o == 0.0) return -std::numeric_limits<double>::infinity();
        s += std::log(o);
    }
    return s;
}

double ChernoffObjective::log_value(double c) const {
    check_c(c);
    const double p2 = 1.0 - p1_;
    double prior = 0.0;
    if (c > 0.0) prior += c * std::log(p1_);
    if (c < 1.0) prior += (1.0 - c) * std::log(p2);
    return prior + log_overlap(c);
}

double ChernoffObjective::value(double c) const { return std::exp(log_value(c)); }

ChernoffResult qcb_error_bound(double p1, const std::vector<ConditionalPair>& components) {
    if (components.empty()) throw PreconditionError("qcb_error_bound: need at least one component");
    const ChernoffObjective obj(p1, components);
    const double p2 = 1.0 - p1;
    const auto n = static_cast<double>(components.size());

    auto finish = [&](double c) {
        ChernoffResult r;
        r.c_star = c;
        r.prefactor = std::pow(p1, c) * std::pow(p2, 1.0 - c);
        const double lo = obj.log_overlap(c);
        r.exponent_per_component = -lo / n;
        r.pe_bound = std::isinf(lo) ? 0.0 : clamp_error_probability(r.prefactor * std::exp(lo));
        return r;
    };
    if (p1 == 0.0) return finish(1.0);
    if (p1 == 1.0) return finish(0.0);

    constexpr double kInvPhi = 0.6180339887498948482;
    double lo = 0.0, hi = 1.0;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = obj.log_value(x1);
    double f2 = obj.log_value(x2);
    for (int it = 0; it < chernoff_solver::kMaxIterations && (hi - lo) > chernoff_solver::kTolerance; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = obj.log_value(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = obj.log_value(x2);
        }
    }
    const double c_interior = 0.5 * (lo + hi);
    const double f_interior = obj.log_value(c_interior);

    // Boundary candidates, the smaller prior first so that ties resolve toward it.
    const double c_small = p1 <= p2 ? 1.0 : 0.0;
    const double c_large = 1.0 - c_small;
    const double f_small = obj.log_value(c_small);
    const double f_large = obj.log_value(c_large);
    const double tie = 1e-14 * std::max(1.0, std::abs(f_small));

    double best_c = c_small, best_f = f_small;
    if (f_large < best_f - tie) {
        best_c = c_large;
        best_f = f_large;
    }
    if (f_interior < best_f - tie) best_c = c_interior;
    return finish(best_c);
}

double qcb_prefactor(double p1, PrefactorChoice choice) {
    if (!(p1 >= 0.0 && p1 <= 1.0)) throw DomainError("qcb_prefactor: p1 outside [0, 1]");
    const double p2 = 1.0 - p1;
    return choice == PrefactorChoice::MinPrior ? std::min(p1, p2) : std::sqrt(p1 * p2);
}

PrefactorChoice default_prefactor_choice(const std::vector<ConditionalPair>& components) {
    for (const auto& [r1, r2] : components) {
        if (r1.purity() < 1.0 - 1e-10 || r2.purity() < 1.0 - 1e-10) return PrefactorChoice::GeometricMean;
    }
    return PrefactorChoice::MinPrior;
}

double qcb_info(double hs, double prefactor, double gamma_eff) {
    if (!(gamma_eff >= 0.0 && gamma_eff <= 1.0)) throw DomainError("qcb_info: Gamma outside [0, 1]");
    if (!(prefactor >= 0.0)) throw DomainError("qcb_info: prefactor must be non-negative");
    const double pe = prefactor * gamma_eff;
    if (pe > 0.5 + 1e-12) throw DomainError("qcb_info: C * Gamma exceeds 1/2");
    return hs - binary_entropy(std::min(pe, 0.5));
}

double analytic_exponent(double gamma_sq) {
    if (!(gamma_sq > 0.0 && gamma_sq < 1.0)) throw DomainError("analytic_exponent: |gamma|^2 must lie in (0, 1)");
    return -std::log(gamma_sq);
}

double decay_exponent_fit(const InfoCurve& curve, double hs, FitWindow window) {
    if (window.last < window.first) throw PreconditionError("decay_exponent_fit: empty window");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (const auto& pt : curve) {
        if (pt.fragment_size < window.first || pt.fragment_size > window.last) continue;
        const double deficit = pt.deficit.value_or(hs - pt.value);
        if (!(deficit > 0.0)) {
            throw NumericalFailure("decay_exponent_fit: non-positive deficit at fragment size " +
                                   std::to_string(pt.fragment_size) +
                                   " (plateau reached to machine precision); choose a smaller window");
        }
        const double x = static_cast<double>(pt.fragment_size);
        const double y = -std::log(deficit);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) throw PreconditionError("decay_exponent_fit: window holds fewer than two points");
    const double nn = static_cast<double>(n);
    const double denom = nn * sxx - sx * sx;
    if (denom == 0.0) throw PreconditionError("decay_exponent_fit: degenerate window");
    return (nn * sxy - sx * sy) / denom;
}

double leading_order_deficit(InfoMeasure which, double p1, double gamma_eff, double prefactor) {
    if (!(p1 > 0.0 && p1 < 1.0)) return 0.0;
    if (gamma_eff <= 0.0) return 0.0;
    const double p2 = 1.0 - p1;
    switch (which) {
        case InfoMeasure::HolevoPointer: {
            // log2(p2/p1)/(p2-p1), continuous through p1 = p2 where it is 2/ln 2.
            const double u = (p2 - p1) / p1;
            const double ratio = u == 0.0 ? 1.0 : std::log1p(u) / u;
            return p1 * p2 * ratio / (p1 * kLn2) * gamma_eff;
        }
        case InfoMeasure::Accessible:
            return p1 * p2 * std::log2(std::exp(1.0) / (p1 * p2 * gamma_eff)) * gamma_eff;
        case InfoMeasure::Qcb:
            if (prefactor <= 0.0) return 0.0;
            return prefactor * std::log2(std::exp(1.0) / (prefactor * gamma_eff)) * gamma_eff;
    }
    return 0.0;
}

double leading_order_deficit(InfoMeasure which, double p1, double gamma_sq, std::size_t fragment_size,
                             double prefactor) {
    return leading_order_deficit(which, p1, std::pow(gamma_sq, static_cast<double>(fragment_size)), prefactor);
}

double closed_form_value(InfoMeasure which, double p1, double gamma_eff, double prefactor) {
    switch (which) {
        case InfoMeasure::HolevoPointer: return holevo_pointer_closed_form(p1, gamma_eff);
        case InfoMeasure::Accessible: return accessible_info_closed_form(p1, gamma_eff);
        case InfoMeasure::Qcb:
            if (!(p1 > 0.0 && p1 < 1.0)) return 0.0;
            return qcb_info(binary_entropy(p1), prefactor, gamma_eff);
    }
    return 0.0;
}

double closed_form_deficit(InfoMeasure which, double p1, double gamma_eff, double prefactor) {
    if (!(p1 >= 0.0 && p1 <= 1.0)) throw DomainError("closed_form_deficit: p1 outside [0, 1]");
    if (!(gamma_eff >= 0.0 && gamma_eff <= 1.0)) throw DomainError("closed_form_deficit: Gamma outside [0, 1]");
    if (p1 == 0.0 || p1 == 1.0) return 0.0;
    switch (which) {
        case InfoMeasure::HolevoPointer:
            if (gamma_eff < kLeadingOrderSwitch) return leading_order_deficit(which, p1, gamma_eff, prefactor);
            return binary_entropy(p1) - holevo_pointer_closed_form(p1, gamma_eff);
        case InfoMeasure::Accessible:
            // H_S - chi(S : F-check) = h(P_e) exactly.
            return binary_entropy(helstrom_error_pure_product(p1, gamma_eff));
        case InfoMeasure::Qcb: {
            const double pe = prefactor * gamma_eff;
            if (pe > 0.5 + 1e-12) throw DomainError("closed_form_deficit: C * Gamma exceeds 1/2");
            return binary_entropy(std::min(pe, 0.5));
        }
    }
    return 0.0;
}

}  // namespace qdarwin
