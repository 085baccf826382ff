#include "qdarwin/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qdarwin/chernoff.hpp"

namespace qdarwin::kernels {

namespace {

struct Layout {
    std::vector<std::size_t> kept_offsets;
    std::vector<std::size_t> traced_offsets;
};

Layout make_layout(const std::vector<std::size_t>& factor_dims, const std::vector<std::size_t>& keep) {
    const std::size_t n = factor_dims.size();
    std::vector<bool> kept(n, false);
    for (auto k : keep) {
        if (k >= n) throw PreconditionError("reduced_density: keep index out of range");
        if (kept[k]) throw PreconditionError("reduced_density: duplicate keep index");
        kept[k] = true;
    }
    std::vector<std::size_t> stride(n);
    std::size_t s = 1;
    for (std::size_t i = n; i-- > 0;) {
        stride[i] = s;
        s *= factor_dims[i];
    }
    std::vector<std::size_t> kept_idx, traced_idx;
    for (std::size_t i = 0; i < n; ++i) (kept[i] ? kept_idx : traced_idx).push_back(i);
    auto offsets = [&](const std::vector<std::size_t>& which) {
        std::size_t count = 1;
        for (auto i : which) count *= factor_dims[i];
        std::vector<std::size_t> off(count, 0);
        for (std::size_t lin = 0; lin < count; ++lin) {
            std::size_t rem = lin, o = 0;
            for (std::size_t j = which.size(); j-- > 0;) {
                o += (rem % factor_dims[which[j]]) * stride[which[j]];
                rem /= factor_dims[which[j]];
            }
            off[lin] = o;
        }
        return off;
    };
    return {offsets(kept_idx), offsets(traced_idx)};
}

// Row r of sum_m w_m M_m M_m^dagger with M_m(r, t) = psi_m[kept[r] + traced[t]].
void reduced_row(const std::vector<WeightedVector>& members, const Layout& lay, Eigen::Index r, ComplexMatrix& out) {
    const auto dk = static_cast<Eigen::Index>(lay.kept_offsets.size());
    for (Eigen::Index c = 0; c < dk; ++c) {
        Complex total = 0.0;
        for (const auto& m : members) {
            const ComplexVector& psi = *m.psi;
            Complex acc = 0.0;
            const std::size_t kr = lay.kept_offsets[static_cast<std::size_t>(r)];
            const std::size_t kc = lay.kept_offsets[static_cast<std::size_t>(c)];
            for (auto t : lay.traced_offsets) {
                acc += psi(static_cast<Eigen::Index>(kr + t)) * std::conj(psi(static_cast<Eigen::Index>(kc + t)));
            }
            total += m.weight * acc;
        }
        out(r, c) = total;
    }
}

void check_members(const std::vector<WeightedVector>& members, const std::vector<std::size_t>& factor_dims) {
    const std::size_t total =
        std::accumulate(factor_dims.begin(), factor_dims.end(), std::size_t{1}, std::multiplies<>());
    for (const auto& m : members) {
        if (static_cast<std::size_t>(m.psi->size()) != total) {
            throw PreconditionError("reduced_density: member dimension does not match factor dimensions");
        }
    }
}

double mutual_information(const MeasurementGridInput& in, Direction d) {
    const double nx = std::sin(d.theta) * std::cos(d.phi);
    const double ny = std::sin(d.theta) * std::sin(d.phi);
    const double nz = std::cos(d.theta);
    // Pi_+ = (I + n.sigma)/2, Pi_- = I - Pi_+.
    ComplexMatrix plus(2, 2);
    plus << 0.5 * (1.0 + nz), 0.5 * Complex(nx, -ny), 0.5 * Complex(nx, ny), 0.5 * (1.0 - nz);

    const std::size_t d_s = in.blocks.size();
    std::vector<double> joint(2 * d_s);
    double q_plus = 0.0, q_minus = 0.0;
    for (std::size_t s = 0; s < d_s; ++s) {
        const ComplexMatrix& b = in.blocks[s];
        const double ps = b.trace().real();
        const double jp = std::max(0.0, (plus * b).trace().real());
        const double jm = std::max(0.0, ps - jp);
        joint[2 * s] = jp;
        joint[2 * s + 1] = jm;
        q_plus += jp;
        q_minus += jm;
    }
    double mi = 0.0;
    for (std::size_t s = 0; s < d_s; ++s) {
        const double ps = joint[2 * s] + joint[2 * s + 1];
        if (joint[2 * s] > 0.0) mi += joint[2 * s] * std::log2(joint[2 * s] / (ps * q_plus));
        if (joint[2 * s + 1] > 0.0) mi += joint[2 * s + 1] * std::log2(joint[2 * s + 1] / (ps * q_minus));
    }
    return std::max(mi, 0.0);
}

}  // namespace

ComplexMatrix reduced_density(const std::vector<WeightedVector>& members, const std::vector<std::size_t>& factor_dims,
                              const std::vector<std::size_t>& keep) {
    check_members(members, factor_dims);
    const Layout lay = make_layout(factor_dims, keep);
    const auto dk = static_cast<Eigen::Index>(lay.kept_offsets.size());
    ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
#pragma omp parallel for schedule(static)
    for (Eigen::Index r = 0; r < dk; ++r) reduced_row(members, lay, r, out);
    return out;
}

ComplexMatrix reduced_density_serial(const std::vector<WeightedVector>& members,
                                     const std::vector<std::size_t>& factor_dims,
                                     const std::vector<std::size_t>& keep) {
    check_members(members, factor_dims);
    const Layout lay = make_layout(factor_dims, keep);
    const auto dk = static_cast<Eigen::Index>(lay.kept_offsets.size());
    ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
    for (Eigen::Index r = 0; r < dk; ++r) reduced_row(members, lay, r, out);
    return out;
}

Direction grid_direction(std::size_t flat_index, std::size_t resolution) {
    const std::size_t i = flat_index / resolution;
    const std::size_t j = flat_index % resolution;
    const double u = 1.0 - 2.0 * static_cast<double>(i) / static_cast<double>(resolution - 1);
    return {std::acos(std::clamp(u, -1.0, 1.0)),
            2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(resolution)};
}

std::vector<double> measurement_grid(const MeasurementGridInput& in, std::size_t resolution) {
    if (resolution < 2) throw PreconditionError("measurement_grid: resolution must be at least 2");
    const auto n = static_cast<std::ptrdiff_t>(resolution * resolution);
    std::vector<double> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        out[idx] = mutual_information(in, grid_direction(idx, resolution));
    }
    return out;
}

std::vector<double> measurement_grid_serial(const MeasurementGridInput& in, std::size_t resolution) {
    if (resolution < 2) throw PreconditionError("measurement_grid: resolution must be at least 2");
    std::vector<double> out(resolution * resolution);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = mutual_information(in, grid_direction(k, resolution));
    return out;
}

std::vector<double> chernoff_scan(const ChernoffObjective& objective, std::size_t points) {
    if (points < 2) throw PreconditionError("chernoff_scan: need at least two points");
    const auto n = static_cast<std::ptrdiff_t>(points);
    std::vector<double> out(points);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = objective.log_value(static_cast<double>(i) / static_cast<double>(points - 1));
    }
    return out;
}

std::vector<double> chernoff_scan_serial(const ChernoffObjective& objective, std::size_t points) {
    if (points < 2) throw PreconditionError("chernoff_scan: need at least two points");
    std::vector<double> out(points);
    for (std::size_t i = 0; i < points; ++i) {
        out[i] = objective.log_value(static_cast<double>(i) / static_cast<double>(points - 1));
    }
    return out;
}

std::size_t argmax(const std::vector<double>& values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

std::size_t argmin(const std::vector<double>& values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] < values[best]) best = i;
    }
    return best;
}

}  // namespace qdarwin::kernels
