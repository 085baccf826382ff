#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "qdarwin/measures.hpp"
#include "qdarwin/model.hpp"
#include "qdarwin/numerics.hpp"

namespace qdarwin {

/// Joint dimension cap D * prod_k dim_k for the brute-force oracle.
inline constexpr std::size_t kOracleDimCap = std::size_t{1} << 13;
/// Cap on stored amplitudes (ensemble size times dimension).
inline constexpr std::size_t kOracleStorageCap = std::size_t{1} << 22;

/// Global state of system plus environment as a convex ensemble of pure
/// states. Factor 0 is the system, factor k + 1 is environment component k,
/// and factor 0 is the most significant index.
struct FullState {
    struct Member {
        double weight = 0.0;
        ComplexVector psi;
    };

    std::vector<std::size_t> factor_dims;
    std::vector<Member> members;

    [[nodiscard]] std::size_t dim() const;
    [[nodiscard]] double trace() const;
    [[nodiscard]] std::size_t env_size() const { return factor_dims.size() - 1; }
};

using SystemState = std::variant<PureState, DensityMatrix>;

/// Exact evolution of the pure-decoherence model branch by branch: the pointer
/// component s of the system drags the environment through prod_k U_{k|s},
/// and the system self-Hamiltonian contributes pointer-diagonal phases
/// exp(-i H_S) (unit time; frequencies are absorbed into the operators).
FullState evolve_full(const DecoherenceModel& model, const SystemState& initial_system);

/// Reduced state on the listed factors (0 = system, k + 1 = component k).
DensityMatrix reduced_state(const FullState& full, const std::vector<std::size_t>& subsystems);

/// rho_SF for a fragment, with S first.
DensityMatrix system_fragment_state(const FullState& full, const FragmentSpec& frag);

/// ||rho_SF - Phi(rho_SF)||_1 where Phi dephases S in the pointer basis.
double good_decoherence_residual(const FullState& full, const FragmentSpec& frag);

/// qmi(S:F), pointer-measured Holevo quantity, Helstrom and QCB errors on the
/// exact conditional fragment states. Requires D = 2 for the error columns.
InfoPoint oracle_measures(const FullState& full, const FragmentSpec& frag);

/// Best classical mutual information between pointer outcomes on S and a
/// projective qubit measurement on a one-component fragment, over an
/// equal-area (theta, phi) grid of resolution x resolution directions.
double grid_accessible_lower_bound(const FullState& full, const FragmentSpec& frag, std::size_t grid_resolution);

}  // namespace qdarwin
