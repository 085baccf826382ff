#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qdarwin/model.hpp"
#include "qdarwin/numerics.hpp"

namespace qdarwin {

/// Fragment dimension cap for the numeric (explicit tensor product) paths.
inline constexpr std::size_t kMeasureDimCap = std::size_t{1} << 10;
/// Joint dimension cap for qmi.
inline constexpr std::size_t kJointDimCap = std::size_t{1} << 13;

/// The three closed-form information measures compared throughout.
enum class InfoMeasure {
    HolevoPointer,  // chi(S-check : F)
    Accessible,     // chi(S : F-check) = H_S - h(P_e)
    Qcb,            // H_S - h(C Gamma)
};

const char* to_string(InfoMeasure m);

/// One row of an information curve. Information values are in bits.
struct InfoPoint {
    std::size_t fragment_size = 0;
    double holevo_pointer = 0.0;
    double accessible_info = 0.0;
    std::optional<double> qcb_info;
    std::optional<double> qmi;
    double pe_helstrom = 0.0;
    std::optional<double> pe_qcb;
};

/// P_e values in (1/2, 1/2 + 1e-12] are clamped to 1/2; larger ones throw.
double clamp_error_probability(double pe, double upper = 0.5);

/// chi(S-check : F) = H(sum_s p_s rho_{F|s}) - sum_s p_s H(rho_{F|s}) on
/// explicitly assembled conditional states.
double holevo_pointer_numeric(const BranchingState& b);

/// h[(1 + sqrt(1 - 4 p1 p2 (1 - Gamma))) / 2]; D = 2, pure conditionals.
double holevo_pointer_closed_form(double p1, double gamma_eff);
/// H_S - h[(1 + sqrt(1 - 4 p1 p2 Gamma)) / 2].
double accessible_info_closed_form(double p1, double gamma_eff);

// The same two quantities written with the base-2 inverse hyperbolic tangent,
// Arctanh2(x) = (1/2) log2[(1 + x)/(1 - x)]. Defined for Gamma in (0, 1).
double holevo_pointer_arctanh_form(double p1, double gamma_eff);
double accessible_info_arctanh_form(double p1, double gamma_eff);

/// Helstrom error (1/2)(1 - ||p1 rho1 - p2 rho2||_1).
double helstrom_error_numeric(double p1, const DensityMatrix& rho1, const DensityMatrix& rho2);
/// (1/2)(1 - sqrt(1 - 4 p1 p2 Gamma)) for pure product conditionals.
double helstrom_error_pure_product(double p1, double gamma_eff);

double accessible_info_from_pe(double hs, double pe);

enum class FanoLog { Bits, Nats };
/// H_S - h(P_e) - P_e log(D - 1). The log term is base 2 by default; FanoLog::Nats
/// reproduces the natural-log variant.
double fano_lower_bound(double hs, double pe, int pointer_dim, FanoLog log = FanoLog::Bits);

/// I(A:B) = H(A) + H(B) - H(AB), where A is the set of factors in `part_a`
/// and B is everything else.
double qmi(const DensityMatrix& rho_joint, const std::vector<std::size_t>& factor_dims,
           const std::vector<std::size_t>& part_a);

}  // namespace qdarwin
