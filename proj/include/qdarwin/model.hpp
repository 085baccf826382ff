#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qdarwin/numerics.hpp"

namespace qdarwin {

/// Pointer observable of the system: D distinct eigenvalues and the
/// probabilities p_s of finding each pointer state.
class PointerModel {
public:
    PointerModel(std::vector<double> pointer_values, std::vector<double> probabilities);

    /// The two-state pointer {0, 1} with probabilities (p1, 1 - p1).
    static PointerModel binary(double p1);

    [[nodiscard]] std::size_t dimension() const noexcept { return values_.size(); }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] const std::vector<double>& probabilities() const noexcept { return probs_; }
    [[nodiscard]] double probability(std::size_t s) const { return probs_.at(s); }
    /// Missing information H_S in bits.
    [[nodiscard]] double missing_information() const;
    /// diag(pointer_values) in the pointer basis.
    [[nodiscard]] ComplexMatrix observable() const;

private:
    std::vector<double> values_;
    std::vector<double> probs_;
};

/// One environment degree of freedom. Propagators are stored per pointer index
/// as the unitaries exp[-i(s Y_k + W_k) t] at the chosen time; a global sign
/// flip of the coupling conjugates them and leaves |gamma_k| unchanged.
class EnvComponent {
public:
    EnvComponent(PureState initial, std::vector<ComplexMatrix> propagators);
    EnvComponent(DensityMatrix initial, std::vector<ComplexMatrix> propagators);

    [[nodiscard]] std::size_t dim() const noexcept { return initial_.dim(); }
    [[nodiscard]] std::size_t pointer_count() const noexcept { return propagators_.size(); }
    [[nodiscard]] bool is_pure() const noexcept { return initial_pure_.has_value(); }
    [[nodiscard]] const DensityMatrix& initial_state() const noexcept { return initial_; }
    [[nodiscard]] const std::optional<PureState>& initial_pure() const noexcept { return initial_pure_; }
    [[nodiscard]] const ComplexMatrix& propagator(std::size_t s) const;

    [[nodiscard]] DensityMatrix conditional_state(std::size_t s) const;
    /// Only available for pure initial states.
    [[nodiscard]] ComplexVector conditional_vector(std::size_t s) const;

private:
    void validate() const;

    DensityMatrix initial_;
    std::optional<PureState> initial_pure_;
    std::vector<ComplexMatrix> propagators_;
};

/// The c-maybe component: initial |0>, identity for pointer 0 and
/// sin a|0><0| + cos a(|0><1| + |1><0|) - sin a|1><1| for pointer 1.
EnvComponent cmaybe_component(double angle);

/// |gamma| between the conditional states for pointers s1, s2 for pure
/// components, tr[rho1^(1/2) rho2^(1/2)] for mixed ones. Phase is discarded.
double decoherence_factor(const EnvComponent& comp, std::size_t s1, std::size_t s2);

/// The per-component factor entering every distinguishability formula:
/// |gamma|^2 for pure components, tr[rho1^(1/2) rho2^(1/2)] for mixed ones.
double squared_overlap(const EnvComponent& comp, std::size_t s1, std::size_t s2);

struct FragmentSpec {
    std::vector<std::size_t> indices;

    static FragmentSpec first(std::size_t count);
    [[nodiscard]] std::size_t size() const noexcept { return indices.size(); }
};

class DecoherenceModel {
public:
    DecoherenceModel(PointerModel pointer, std::vector<EnvComponent> components,
                     std::optional<ComplexMatrix> system_hamiltonian = std::nullopt);

    static DecoherenceModel homogeneous(PointerModel pointer, const EnvComponent& comp,
                                        std::size_t env_size);

    [[nodiscard]] const PointerModel& pointer() const noexcept { return pointer_; }
    [[nodiscard]] const std::vector<EnvComponent>& components() const noexcept { return components_; }
    [[nodiscard]] const EnvComponent& component(std::size_t k) const { return components_.at(k); }
    [[nodiscard]] std::size_t env_size() const noexcept { return components_.size(); }
    [[nodiscard]] const ComplexMatrix& system_hamiltonian() const noexcept { return system_h_; }

    /// Throws PreconditionError on duplicate or out-of-range indices.
    void validate(const FragmentSpec& frag) const;
    /// Components not in `frag`, ascending.
    [[nodiscard]] FragmentSpec complement(const FragmentSpec& frag) const;

private:
    PointerModel pointer_;
    std::vector<EnvComponent> components_;
    ComplexMatrix system_h_;
};

/// Gamma = prod_{k in F} squared_overlap(k); the empty fragment gives 1.
double fragment_overlap(const DecoherenceModel& model, const FragmentSpec& frag,
                        std::size_t s1, std::size_t s2);

/// Good-decoherence ensemble {(p_s, rho_{F|s})} with product conditionals.
struct BranchingState {
    PointerModel pointer;
    /// conditional_states[s][j] is the state of the j-th fragment component.
    std::vector<std::vector<DensityMatrix>> conditional_states;

    [[nodiscard]] std::size_t fragment_size() const;
    [[nodiscard]] std::size_t fragment_dim() const;
    /// Explicit tensor product rho_{F|s}.
    [[nodiscard]] DensityMatrix assemble(std::size_t s) const;
};

BranchingState branching_state(const DecoherenceModel& model, const FragmentSpec& frag);

}  // namespace qdarwin
