#pragma once

#include <cstddef>
#include <vector>

#include "qdarwin/chernoff.hpp"
#include "qdarwin/model.hpp"
#include "qdarwin/oracle.hpp"

namespace qdarwin {

/// One row of an information-curve sweep (bits, probabilities).
struct SweepRow {
    std::size_t fragment_size = 0;
    double gamma_eff = 1.0;
    double holevo_pointer = 0.0;
    double accessible_info = 0.0;
    double qcb_info = 0.0;
    double pe_helstrom = 0.0;
    double pe_qcb = 0.0;
    double deficit_holevo = 0.0;
    double deficit_accessible = 0.0;
    double deficit_qcb = 0.0;
};

/// Closed-form sweep. gamma_sq[k] is |gamma_k|^2 of component k; fragments of
/// size F take the first F components. Rows come back in the order of
/// `fragment_sizes`.
std::vector<SweepRow> closed_form_curve(double p1, const std::vector<double>& gamma_sq,
                                        const std::vector<std::size_t>& fragment_sizes, double prefactor);
std::vector<SweepRow> closed_form_curve_serial(double p1, const std::vector<double>& gamma_sq,
                                               const std::vector<std::size_t>& fragment_sizes, double prefactor);

/// Explicit-state sweep on the model: numeric Holevo and Helstrom on assembled
/// branching states, QCB by minimization over c.
std::vector<SweepRow> numeric_curve(const DecoherenceModel& model, const std::vector<std::size_t>& fragment_sizes);

/// Brute-force sweep from the evolved global state.
std::vector<SweepRow> oracle_curve(const DecoherenceModel& model, const SystemState& initial_system,
                                   const std::vector<std::size_t>& fragment_sizes);

InfoCurve to_info_curve(const std::vector<SweepRow>& rows, InfoMeasure which);

}  // namespace qdarwin
