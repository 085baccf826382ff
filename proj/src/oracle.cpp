#include "qdarwin/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qdarwin/chernoff.hpp"
#include "qdarwin/kernels.hpp"

namespace qdarwin {

namespace {

struct Ensemble {
    std::vector<double> weights;
    std::vector<ComplexVector> vectors;
};

Ensemble spectral_ensemble(const DensityMatrix& rho) {
    const auto eig = hermitian_eig(rho.matrix());
    Ensemble e;
    for (Eigen::Index i = eig.eigenvalues.size(); i-- > 0;) {
        const double w = eig.eigenvalues(i);
        if (w < -tol::kNegativeEigenvalue) throw NumericalFailure("evolve_full: input state has a negative eigenvalue");
        if (w <= 1e-15) continue;
        e.weights.push_back(w);
        e.vectors.push_back(eig.eigenvectors.col(i));
    }
    return e;
}

Ensemble component_ensemble(const EnvComponent& comp) {
    if (comp.initial_pure()) return {{1.0}, {comp.initial_pure()->amplitudes()}};
    return spectral_ensemble(comp.initial_state());
}

ComplexVector kron_vec(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

std::vector<kernels::WeightedVector> view(const FullState& full) {
    std::vector<kernels::WeightedVector> out;
    out.reserve(full.members.size());
    for (const auto& m : full.members) out.push_back({m.weight, &m.psi});
    return out;
}

// Unnormalized diagonal blocks <s|rho_SF|s> of a state with S as factor 0.
std::vector<ComplexMatrix> pointer_blocks(const ComplexMatrix& rho_sf, std::size_t d) {
    const auto dim_f = rho_sf.rows() / static_cast<Eigen::Index>(d);
    std::vector<ComplexMatrix> blocks;
    for (std::size_t s = 0; s < d; ++s) {
        const auto o = static_cast<Eigen::Index>(s) * dim_f;
        blocks.emplace_back(rho_sf.block(o, o, dim_f, dim_f));
    }
    return blocks;
}

}  // namespace

std::size_t FullState::dim() const {
    return std::accumulate(factor_dims.begin(), factor_dims.end(), std::size_t{1}, std::multiplies<>());
}

double FullState::trace() const {
    double t = 0.0;
    for (const auto& m : members) t += m.weight * m.psi.squaredNorm();
    return t;
}

FullState evolve_full(const DecoherenceModel& model, const SystemState& initial_system) {
    const std::size_t d = model.pointer().dimension();
    FullState full;
    full.factor_dims.push_back(d);
    for (const auto& c : model.components()) full.factor_dims.push_back(c.dim());
    const std::size_t total = full.dim();
    if (total > kOracleDimCap) {
        throw DimensionCapExceeded("evolve_full: joint dimension " + std::to_string(total) + " exceeds 2^13");
    }

    const Ensemble sys = std::visit(
        [&](const auto& st) -> Ensemble {
            using T = std::decay_t<decltype(st)>;
            if (st.dim() != d) throw PreconditionError("evolve_full: system state dimension differs from D");
            if constexpr (std::is_same_v<T, PureState>) {
                return {{1.0}, {st.amplitudes()}};
            } else {
                return spectral_ensemble(st);
            }
        },
        initial_system);

    std::vector<Ensemble> env;
    std::size_t member_count = sys.weights.size();
    for (const auto& c : model.components()) {
        env.push_back(component_ensemble(c));
        member_count *= env.back().weights.size();
    }
    if (member_count * total > kOracleStorageCap) {
        throw DimensionCapExceeded("evolve_full: mixed-state ensemble too large for the oracle");
    }

    // exp(-i H_S): pointer-diagonal because H_S commutes with the pointer observable.
    const auto h_eig = hermitian_eig(model.system_hamiltonian());
    ComplexVector phases(h_eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::exp(Complex(0.0, -h_eig.eigenvalues(i)));
    const ComplexMatrix u_sys = h_eig.eigenvectors * phases.asDiagonal() * h_eig.eigenvectors.adjoint();

    // Mixed-radix walk over one ensemble member per input factor.
    std::vector<std::size_t> choice(env.size() + 1, 0);
    for (std::size_t m = 0; m < member_count; ++m) {
        std::size_t rem = m;
        for (std::size_t f = env.size() + 1; f-- > 0;) {
            const std::size_t n = f == 0 ? sys.weights.size() : env[f - 1].weights.size();
            choice[f] = rem % n;
            rem /= n;
        }
        double weight = sys.weights[choice[0]];
        for (std::size_t k = 0; k < env.size(); ++k) weight *= env[k].weights[choice[k + 1]];

        const ComplexVector amps = u_sys * sys.vectors[choice[0]];
        ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(total));
        const auto branch_dim = static_cast<Eigen::Index>(total / d);
        for (std::size_t s = 0; s < d; ++s) {
            if (amps(static_cast<Eigen::Index>(s)) == Complex(0.0)) continue;
            ComplexVector branch = ComplexVector::Ones(1);
            for (std::size_t k = 0; k < env.size(); ++k) {
                branch = kron_vec(branch, model.component(k).propagator(s) * env[k].vectors[choice[k + 1]]);
            }
            psi.segment(static_cast<Eigen::Index>(s) * branch_dim, branch_dim) = amps(static_cast<Eigen::Index>(s)) * branch;
        }
        full.members.push_back({weight, std::move(psi)});
    }
    if (std::abs(full.trace() - 1.0) > 1e-10) throw NumericalFailure("evolve_full: trace not preserved");
    return full;
}

DensityMatrix reduced_state(const FullState& full, const std::vector<std::size_t>& subsystems) {
    std::vector<std::size_t> keep = subsystems;
    std::sort(keep.begin(), keep.end());
    ComplexMatrix rho = kernels::reduced_density(view(full), full.factor_dims, keep);
    rho /= rho.trace().real();
    return DensityMatrix(std::move(rho));
}

DensityMatrix system_fragment_state(const FullState& full, const FragmentSpec& frag) {
    std::vector<std::size_t> keep{0};
    for (auto k : frag.indices) {
        if (k + 1 >= full.factor_dims.size()) throw PreconditionError("fragment index out of range");
        keep.push_back(k + 1);
    }
    std::sort(keep.begin() + 1, keep.end());
    if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
        throw PreconditionError("fragment has duplicate indices");
    }
    return reduced_state(full, keep);
}

double good_decoherence_residual(const FullState& full, const FragmentSpec& frag) {
    const DensityMatrix rho = system_fragment_state(full, frag);
    const std::size_t d = full.factor_dims[0];
    const auto dim_f = static_cast<Eigen::Index>(rho.dim() / d);
    ComplexMatrix coherent = rho.matrix();
    for (std::size_t s = 0; s < d; ++s) {
        const auto o = static_cast<Eigen::Index>(s) * dim_f;
        coherent.block(o, o, dim_f, dim_f).setZero();
    }
    return trace_norm(coherent);
}

InfoPoint oracle_measures(const FullState& full, const FragmentSpec& frag) {
    const DensityMatrix rho_sf = system_fragment_state(full, frag);
    const std::size_t d = full.factor_dims[0];
    std::vector<std::size_t> dims{d};
    for (auto k : frag.indices) dims.push_back(full.factor_dims[k + 1]);

    InfoPoint pt;
    pt.fragment_size = frag.size();
    if (dims.size() > 1) pt.qmi = qmi(rho_sf, dims, {0});
    else pt.qmi = 0.0;

    const auto blocks = pointer_blocks(rho_sf.matrix(), d);
    std::vector<double> probs;
    std::vector<DensityMatrix> conditional;
    const auto dim_f = blocks.front().rows();
    for (const auto& b : blocks) {
        const double p = b.trace().real();
        probs.push_back(p);
        conditional.emplace_back(p > 0.0 ? ComplexMatrix(b / p) : ComplexMatrix(ComplexMatrix::Identity(dim_f, dim_f) / static_cast<double>(dim_f)));
    }
    const double hs = shannon_entropy(probs);

    ComplexMatrix mixture = ComplexMatrix::Zero(dim_f, dim_f);
    double cond_entropy = 0.0;
    for (std::size_t s = 0; s < d; ++s) {
        if (probs[s] == 0.0) continue;
        mixture += blocks[s];
        cond_entropy += probs[s] * von_neumann_entropy(conditional[s]);
    }
    mixture /= mixture.trace().real();
    pt.holevo_pointer = std::max(0.0, von_neumann_entropy(DensityMatrix(std::move(mixture))) - cond_entropy);

    if (d == 2) {
        const double p1 = std::clamp(probs[0] / (probs[0] + probs[1]), 0.0, 1.0);
        pt.pe_helstrom = helstrom_error_numeric(p1, conditional[0], conditional[1]);
        pt.accessible_info = std::max(0.0, hs - binary_entropy(pt.pe_helstrom));
        if (p1 > 0.0 && p1 < 1.0) {
            const auto qcb = qcb_error_bound(p1, {{conditional[0], conditional[1]}});
            pt.pe_qcb = qcb.pe_bound;
        } else {
            pt.pe_qcb = 0.0;
        }
        pt.qcb_info = hs - binary_entropy(std::min(*pt.pe_qcb, 0.5));
    }
    return pt;
}

double grid_accessible_lower_bound(const FullState& full, const FragmentSpec& frag, std::size_t grid_resolution) {
    if (frag.size() != 1) throw PreconditionError("grid_accessible_lower_bound: only single-component fragments are supported");
    if (grid_resolution < 8) throw PreconditionError("grid_accessible_lower_bound: grid resolution must be at least 8");
    if (full.factor_dims.at(frag.indices[0] + 1) != 2) {
        throw PreconditionError("grid_accessible_lower_bound: fragment component must be a qubit");
    }
    const DensityMatrix rho_sf = system_fragment_state(full, frag);
    const kernels::MeasurementGridInput in{pointer_blocks(rho_sf.matrix(), full.factor_dims[0])};
    const auto values = kernels::measurement_grid(in, grid_resolution);
    return values[kernels::argmax(values)];
}

}  // namespace qdarwin
