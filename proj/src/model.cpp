#include "qdarwin/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qdarwin {

PointerModel::PointerModel(std::vector<double> pointer_values, std::vector<double> probabilities)
    : values_(std::move(pointer_values)), probs_(std::move(probabilities)) {
    if (values_.size() < 2) throw PreconditionError("PointerModel: need at least two pointer states");
    if (values_.size() != probs_.size()) {
        throw PreconditionError("PointerModel: values and probabilities differ in length");
    }
    double total = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("PointerModel: probability outside [0, 1]");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("PointerModel: probabilities do not sum to 1");
    std::set<double> distinct(values_.begin(), values_.end());
    if (distinct.size() != values_.size()) throw PreconditionError("PointerModel: pointer values must be distinct");
}

PointerModel PointerModel::binary(double p1) {
    if (!(p1 >= 0.0 && p1 <= 1.0)) throw DomainError("PointerModel::binary: p1 outside [0, 1]");
    return PointerModel({0.0, 1.0}, {p1, 1.0 - p1});
}

double PointerModel::missing_information() const { return shannon_entropy(probs_); }

ComplexMatrix PointerModel::observable() const {
    const auto d = static_cast<Eigen::Index>(values_.size());
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) m(i, i) = values_[static_cast<std::size_t>(i)];
    return m;
}

EnvComponent::EnvComponent(PureState initial, std::vector<ComplexMatrix> propagators)
    : initial_(initial.projector()), initial_pure_(std::move(initial)), propagators_(std::move(propagators)) {
    validate();
}

EnvComponent::EnvComponent(DensityMatrix initial, std::vector<ComplexMatrix> propagators)
    : initial_(std::move(initial)), propagators_(std::move(propagators)) {
    validate();
}

void EnvComponent::validate() const {
    if (propagators_.size() < 2) throw PreconditionError("EnvComponent: need one propagator per pointer value");
    for (const auto& u : propagators_) {
        if (static_cast<std::size_t>(u.rows()) != dim() || u.rows() != u.cols()) {
            throw PreconditionError("EnvComponent: propagator dimension mismatch");
        }
        if (unitarity_defect(u) > tol::kUnitary) throw PreconditionError("EnvComponent: propagator not unitary");
    }
}

const ComplexMatrix& EnvComponent::propagator(std::size_t s) const {
    if (s >= propagators_.size()) throw PreconditionError("EnvComponent: invalid pointer index");
    return propagators_[s];
}

DensityMatrix EnvComponent::conditional_state(std::size_t s) const {
    if (initial_pure_) return DensityMatrix::from_pure(conditional_vector(s));
    const auto& u = propagator(s);
    return DensityMatrix(u * initial_.matrix() * u.adjoint());
}

ComplexVector EnvComponent::conditional_vector(std::size_t s) const {
    if (!initial_pure_) throw PreconditionError("EnvComponent: conditional_vector needs a pure initial state");
    return propagator(s) * initial_pure_->amplitudes();
}

EnvComponent cmaybe_component(double angle) {
    const double sa = std::sin(angle);
    const double ca = std::cos(angle);
    ComplexMatrix rotate(2, 2);
    rotate << sa, ca, ca, -sa;
    return EnvComponent(PureState::basis(2, 0), {ComplexMatrix::Identity(2, 2), rotate});
}

double decoherence_factor(const EnvComponent& comp, std::size_t s1, std::size_t s2) {
    if (s1 >= comp.pointer_count() || s2 >= comp.pointer_count()) {
        throw PreconditionError("decoherence_factor: invalid pointer index");
    }
    if (comp.is_pure()) {
        return std::min(1.0, std::abs(comp.conditional_vector(s1).dot(comp.conditional_vector(s2))));
    }
    return squared_overlap(comp, s1, s2);
}

double squared_overlap(const EnvComponent& comp, std::size_t s1, std::size_t s2) {
    if (s1 >= comp.pointer_count() || s2 >= comp.pointer_count()) {
        throw PreconditionError("squared_overlap: invalid pointer index");
    }
    if (comp.is_pure()) {
        const double g = decoherence_factor(comp, s1, s2);
        return g * g;
    }
    const ComplexMatrix a = psd_power(comp.conditional_state(s1), 0.5);
    const ComplexMatrix b = psd_power(comp.conditional_state(s2), 0.5);
    return std::clamp((a * b).trace().real(), 0.0, 1.0);
}

FragmentSpec FragmentSpec::first(std::size_t count) {
    FragmentSpec f;
    f.indices.resize(count);
    for (std::size_t i = 0; i < count; ++i) f.indices[i] = i;
    return f;
}

DecoherenceModel::DecoherenceModel(PointerModel pointer, std::vector<EnvComponent> components,
                                   std::optional<ComplexMatrix> system_hamiltonian)
    : pointer_(std::move(pointer)), components_(std::move(components)) {
    if (components_.empty()) throw PreconditionError("DecoherenceModel: environment must have at least one component");
    for (const auto& c : components_) {
        if (c.pointer_count() != pointer_.dimension()) {
            throw PreconditionError("DecoherenceModel: component propagator count differs from pointer dimension");
        }
    }
    const auto d = static_cast<Eigen::Index>(pointer_.dimension());
    system_h_ = system_hamiltonian.value_or(ComplexMatrix::Zero(d, d));
    if (system_h_.rows() != d || system_h_.cols() != d) {
        throw PreconditionError("DecoherenceModel: system Hamiltonian has wrong dimension");
    }
    if (hermiticity_defect(system_h_) > tol::kKernelHermitian) {
        throw PreconditionError("DecoherenceModel: system Hamiltonian not Hermitian");
    }
    const ComplexMatrix pi = pointer_.observable();
    const double comm = (pi * system_h_ - system_h_ * pi).cwiseAbs().maxCoeff();
    if (comm > 1e-10) throw PreconditionError("DecoherenceModel: system Hamiltonian does not commute with the pointer observable");
}

DecoherenceModel DecoherenceModel::homogeneous(PointerModel pointer, const EnvComponent& comp,
                                               std::size_t env_size) {
    return DecoherenceModel(std::move(pointer), std::vector<EnvComponent>(env_size, comp));
}

void DecoherenceModel::validate(const FragmentSpec& frag) const {
    std::vector<bool> seen(components_.size(), false);
    for (auto k : frag.indices) {
        if (k >= components_.size()) throw PreconditionError("FragmentSpec: component index out of range");
        if (seen[k]) throw PreconditionError("FragmentSpec: duplicate component index");
        seen[k] = true;
    }
}

FragmentSpec DecoherenceModel::complement(const FragmentSpec& frag) const {
    validate(frag);
    std::vector<bool> in(components_.size(), false);
    for (auto k : frag.indices) in[k] = true;
    FragmentSpec rest;
    for (std::size_t k = 0; k < components_.size(); ++k) {
        if (!in[k]) rest.indices.push_back(k);
    }
    return rest;
}

double fragment_overlap(const DecoherenceModel& model, const FragmentSpec& frag, std::size_t s1,
                        std::size_t s2) {
    model.validate(frag);
    double g = 1.0;
    for (auto k : frag.indices) g *= squared_overlap(model.component(k), s1, s2);
    return g;
}

std::size_t BranchingState::fragment_size() const {
    return conditional_states.empty() ? 0 : conditional_states.front().size();
}

std::size_t BranchingState::fragment_dim() const {
    std::size_t d = 1;
    if (!conditional_states.empty()) {
        for (const auto& f : conditional_states.front()) d *= f.dim();
    }
    return d;
}

DensityMatrix BranchingState::assemble(std::size_t s) const {
    std::vector<ComplexMatrix> factors;
    for (const auto& f : conditional_states.at(s)) factors.push_back(f.matrix());
    return DensityMatrix(kron_all(factors));
}

BranchingState branching_state(const DecoherenceModel& model, const FragmentSpec& frag) {
    model.validate(frag);
    BranchingState b{model.pointer(), {}};
    b.conditional_states.resize(model.pointer().dimension());
    for (std::size_t s = 0; s < model.pointer().dimension(); ++s) {
        for (auto k : frag.indices) b.conditional_states[s].push_back(model.component(k).conditional_state(s));
    }
    return b;
}

}  // namespace qdarwin
