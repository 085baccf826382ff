#pragma once

#include <cstddef>
#include <vector>

#include "qdarwin/numerics.hpp"

namespace qdarwin {

class ChernoffObjective;

// Data-parallel kernels. Each has an OpenMP version (used by the library) and
// a serial reference kept for tests and the benchmark. Both produce
// bit-identical results: per-point work is independent and all reductions run
// serially in index order.
namespace kernels {

struct WeightedVector {
    double weight;
    const ComplexVector* psi;
};

/// sum_m w_m tr_{not keep} |psi_m><psi_m| for row-major factor layout.
ComplexMatrix reduced_density(const std::vector<WeightedVector>& members, const std::vector<std::size_t>& factor_dims,
                              const std::vector<std::size_t>& keep);
ComplexMatrix reduced_density_serial(const std::vector<WeightedVector>& members,
                                     const std::vector<std::size_t>& factor_dims,
                                     const std::vector<std::size_t>& keep);

/// Unnormalized pointer blocks <s|rho_SF|s> (2x2 each) of a system-qubit state.
struct MeasurementGridInput {
    std::vector<ComplexMatrix> blocks;
};

/// Classical mutual information (bits) for every grid direction, flattened as
/// theta_index * resolution + phi_index.
std::vector<double> measurement_grid(const MeasurementGridInput& in, std::size_t resolution);
std::vector<double> measurement_grid_serial(const MeasurementGridInput& in, std::size_t resolution);

/// Grid direction (theta, phi) for a flattened index: cos(theta) uniform on
/// [-1, 1] including both poles, phi uniform on [0, 2 pi).
struct Direction {
    double theta;
    double phi;
};
Direction grid_direction(std::size_t flat_index, std::size_t resolution);

/// log QCB objective at c_i = i / (points - 1).
std::vector<double> chernoff_scan(const ChernoffObjective& objective, std::size_t points);
std::vector<double> chernoff_scan_serial(const ChernoffObjective& objective, std::size_t points);

/// Index of the maximum (first one on ties).
std::size_t argmax(const std::vector<double>& values);
std::size_t argmin(const std::vector<double>& values);

}  // namespace kernels
}  // namespace qdarwin
