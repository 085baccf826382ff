#include "qdarwin/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

namespace qdarwin {

namespace {

std::vector<double> prefix_products(const std::vector<double>& gamma_sq) {
    std::vector<double> prefix(gamma_sq.size() + 1, 1.0);
    for (std::size_t k = 0; k < gamma_sq.size(); ++k) {
        if (!(gamma_sq[k] >= 0.0 && gamma_sq[k] <= 1.0)) throw DomainError("|gamma_k|^2 outside [0, 1]");
        prefix[k + 1] = prefix[k] * gamma_sq[k];
    }
    return prefix;
}

SweepRow closed_form_row(double p1, double gamma_eff, std::size_t f, double prefactor) {
    SweepRow r;
    r.fragment_size = f;
    r.gamma_eff = gamma_eff;
    r.holevo_pointer = holevo_pointer_closed_form(p1, gamma_eff);
    r.accessible_info = accessible_info_closed_form(p1, gamma_eff);
    r.qcb_info = closed_form_value(InfoMeasure::Qcb, p1, gamma_eff, prefactor);
    r.pe_helstrom = helstrom_error_pure_product(p1, gamma_eff);
    r.pe_qcb = (p1 > 0.0 && p1 < 1.0) ? prefactor * gamma_eff : 0.0;
    r.deficit_holevo = closed_form_deficit(InfoMeasure::HolevoPointer, p1, gamma_eff, prefactor);
    r.deficit_accessible = closed_form_deficit(InfoMeasure::Accessible, p1, gamma_eff, prefactor);
    r.deficit_qcb = closed_form_deficit(InfoMeasure::Qcb, p1, gamma_eff, prefactor);
    return r;
}

void check_sizes(const std::vector<std::size_t>& sizes, std::size_t env_size) {
    for (auto f : sizes) {
        if (f > env_size) {
            throw PreconditionError("fragment size " + std::to_string(f) + " exceeds environment size " +
                                    std::to_string(env_size));
        }
    }
}

// Runs fn(i) for every index in parallel and rethrows the first failure in
// index order once the loop is done.
template <typename Fn>
void parallel_rows(std::size_t n, Fn&& fn) {
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

std::vector<SweepRow> closed_form_curve(double p1, const std::vector<double>& gamma_sq,
                                        const std::vector<std::size_t>& fragment_sizes, double prefactor) {
    check_sizes(fragment_sizes, gamma_sq.size());
    const auto prefix = prefix_products(gamma_sq);
    std::vector<SweepRow> rows(fragment_sizes.size());
    parallel_rows(rows.size(), [&](std::size_t i) {
        const auto f = fragment_sizes[i];
        rows[i] = closed_form_row(p1, prefix[f], f, prefactor);
    });
    return rows;
}

std::vector<SweepRow> closed_form_curve_serial(double p1, const std::vector<double>& gamma_sq,
                                               const std::vector<std::size_t>& fragment_sizes, double prefactor) {
    check_sizes(fragment_sizes, gamma_sq.size());
    const auto prefix = prefix_products(gamma_sq);
    std::vector<SweepRow> rows;
    rows.reserve(fragment_sizes.size());
    for (auto f : fragment_sizes) rows.push_back(closed_form_row(p1, prefix[f], f, prefactor));
    return rows;
}

std::vector<SweepRow> numeric_curve(const DecoherenceModel& model, const std::vector<std::size_t>& fragment_sizes) {
    if (model.pointer().dimension() != 2) throw PreconditionError("numeric_curve: requires a two-state pointer");
    check_sizes(fragment_sizes, model.env_size());
    const double p1 = model.pointer().probability(0);
    const double hs = model.pointer().missing_information();
    std::vector<SweepRow> rows(fragment_sizes.size());
    parallel_rows(rows.size(), [&](std::size_t i) {
        const auto frag = FragmentSpec::first(fragment_sizes[i]);
        const BranchingState b = branching_state(model, frag);
        SweepRow& r = rows[i];
        r.fragment_size = frag.size();
        r.gamma_eff = fragment_overlap(model, frag, 0, 1);
        r.holevo_pointer = holevo_pointer_numeric(b);
        const DensityMatrix rho1 = b.assemble(0);
        const DensityMatrix rho2 = b.assemble(1);
        r.pe_helstrom = helstrom_error_numeric(p1, rho1, rho2);
        r.accessible_info = hs - binary_entropy(r.pe_helstrom);
        if (frag.size() == 0 || p1 == 0.0 || p1 == 1.0) {
            r.pe_qcb = (p1 > 0.0 && p1 < 1.0) ? std::min(p1, 1.0 - p1) : 0.0;
        } else {
            std::vector<ConditionalPair> pairs;
            for (std::size_t j = 0; j < frag.size(); ++j) {
                pairs.emplace_back(b.conditional_states[0][j], b.conditional_states[1][j]);
            }
            r.pe_qcb = qcb_error_bound(p1, pairs).pe_bound;
        }
        r.qcb_info = hs - binary_entropy(std::min(r.pe_qcb, 0.5));
        r.deficit_holevo = hs - r.holevo_pointer;
        r.deficit_accessible = binary_entropy(r.pe_helstrom);
        r.deficit_qcb = binary_entropy(std::min(r.pe_qcb, 0.5));
    });
    return rows;
}

std::vector<SweepRow> oracle_curve(const DecoherenceModel& model, const SystemState& initial_system,
                                   const std::vector<std::size_t>& fragment_sizes) {
    if (model.pointer().dimension() != 2) throw PreconditionError("oracle_curve: requires a two-state pointer");
    check_sizes(fragment_sizes, model.env_size());
    const FullState full = evolve_full(model, initial_system);
    const double hs = model.pointer().missing_information();
    std::vector<SweepRow> rows(fragment_sizes.size());
    parallel_rows(rows.size(), [&](std::size_t i) {
        const auto frag = FragmentSpec::first(fragment_sizes[i]);
        const InfoPoint pt = oracle_measures(full, frag);
        SweepRow& r = rows[i];
        r.fragment_size = frag.size();
        r.gamma_eff = fragment_overlap(model, frag, 0, 1);
        r.holevo_pointer = pt.holevo_pointer;
        r.accessible_info = pt.accessible_info;
        r.qcb_info = pt.qcb_info.value_or(0.0);
        r.pe_helstrom = pt.pe_helstrom;
        r.pe_qcb = pt.pe_qcb.value_or(0.0);
        r.deficit_holevo = hs - r.holevo_pointer;
        r.deficit_accessible = binary_entropy(r.pe_helstrom);
        r.deficit_qcb = binary_entropy(std::min(r.pe_qcb, 0.5));
    });
    return rows;
}

InfoCurve to_info_curve(const std::vector<SweepRow>& rows, InfoMeasure which) {
    InfoCurve curve;
    curve.reserve(rows.size());
    for (const auto& r : rows) {
        switch (which) {
            case InfoMeasure::HolevoPointer: curve.push_back({r.fragment_size, r.holevo_pointer, r.deficit_holevo}); break;
            case InfoMeasure::Accessible: curve.push_back({r.fragment_size, r.accessible_info, r.deficit_accessible}); break;
            case InfoMeasure::Qcb: curve.push_back({r.fragment_size, r.qcb_info, r.deficit_qcb}); break;
        }
    }
    return curve;
}

}  // namespace qdarwin
