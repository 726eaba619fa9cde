#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scatterwave/errors.hpp"
#include "scatterwave/grid_medium.hpp"
#include "scatterwave/initial_data.hpp"

namespace scatterwave {

/// Interleaved amplitudes: v[2j] right-moving, v[2j+1] left-moving at node j.
struct StateVector {
    std::vector<double> v;
};

enum class FieldMode { regular, dirac_coefficients };

/// Grid trace u[k][j] = v^k[2j] + v^k[2j+1] of the solution.
///
/// A field may hold every time row 0..m or only a selected subset; `steps()`
/// lists the stored step indices in increasing order. In dirac mode the
/// entries are Dirac coefficients gamma rather than point values.
class SolutionField {
public:
    SolutionField(SpatialGrid grid, TemporalGrid temporal, FieldMode mode, std::vector<std::size_t> steps)
        : grid_(grid), temporal_(temporal), mode_(mode), steps_(std::move(steps)),
          values_(steps_.size() * grid_.node_count(), 0.0) {}

    const SpatialGrid& grid() const { return grid_; }
    const TemporalGrid& temporal() const { return temporal_; }
    FieldMode mode() const { return mode_; }
    const std::vector<std::size_t>& steps() const { return steps_; }
    std::size_t rows() const { return steps_.size(); }
    std::size_t cols() const { return grid_.node_count(); }

    double& at(std::size_t row, std::size_t j) { return values_[row * cols() + j]; }
    double at(std::size_t row, std::size_t j) const { return values_[row * cols() + j]; }

    std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols(), cols()}; }
    std::span<double> row(std::size_t r) { return {values_.data() + r * cols(), cols()}; }

    /// Row index holding time step k, or rows() if k is not stored.
    std::size_t row_of_step(std::size_t k) const {
        auto it = std::lower_bound(steps_.begin(), steps_.end(), k);
        return (it != steps_.end() && *it == k) ? static_cast<std::size_t>(it - steps_.begin()) : rows();
    }
    bool has_step(std::size_t k) const { return row_of_step(k) < rows(); }

    /// Row of time step k; throws if it was not stored.
    std::span<const double> at_step(std::size_t k) const {
        auto r = row_of_step(k);
        if (r == rows()) throw StructuralError("time step " + std::to_string(k) + " not stored in field");
        return row(r);
    }

private:
    SpatialGrid grid_;
    TemporalGrid temporal_;
    FieldMode mode_;
    std::vector<std::size_t> steps_;
    std::vector<double> values_;
};

/// One scattering step written into `out` (no allocation).
///
/// Interior stencil first, then the prescribed boundary amplitudes:
///   out[2j]   = (1 + r[j-1]) v[2j-2] - r[j-1] v[2j+1]   (1 <= j <= n)
///   out[2j+1] = r[j] v[2j] + (1 - r[j]) v[2j+3]         (0 <= j <  n)
///   out[0] = left_in, out[2n+1] = right_in
inline void step_into(std::span<const double> v, std::span<const double> r, double left_in, double right_in,
                      std::span<double> out) {
    const std::size_t n = r.size();
    if (v.size() != 2 * n + 2 || out.size() != v.size()) {
        throw StructuralError("state length " + std::to_string(v.size()) + " does not match 2n+2 for n=" +
                              std::to_string(n));
    }
    // Interface j (between nodes j and j+1) feeds the left-mover at j and the
    // right-mover at j+1.
    for (std::size_t j = 0; j < n; ++j) {
        const double rj = r[j];
        out[2 * j + 1] = rj * v[2 * j] + (1.0 - rj) * v[2 * j + 3];
        out[2 * j + 2] = (1.0 + rj) * v[2 * j] - rj * v[2 * j + 3];
    }
    out[0] = left_in;
    out[2 * n + 1] = right_in;
}

inline StateVector step(const StateVector& state, const ReflectionWeights& weights, double left_in, double right_in) {
    StateVector next{std::vector<double>(state.v.size())};
    step_into(state.v, weights.r, left_in, right_in, next.v);
    return next;
}

/// Drives the recursion from v^0 through v^m, calling observer(k, v^k) for
/// every k. Only two state buffers are kept alive.
template <class Observer>
void propagate(const InitialState& state, const ReflectionWeights& weights, const TemporalGrid& temporal,
               Observer&& observer) {
    const std::size_t n = weights.r.size();
    if (state.v0.size() != 2 * n + 2 || state.left_boundary.size() != temporal.m() ||
        state.right_boundary.size() != temporal.m()) {
        throw StructuralError("initial state does not match weights/time grid");
    }
    std::vector<double> cur = state.v0;
    std::vector<double> next(cur.size());
    observer(std::size_t{0}, std::span<const double>(cur));
    for (std::size_t k = 1; k <= temporal.m(); ++k) {
        step_into(cur, weights.r, state.left_boundary[k - 1], state.right_boundary[k - 1], next);
        cur.swap(next);
        observer(k, std::span<const double>(cur));
    }
}

inline void fold_state(std::span<const double> v, std::span<double> u) {
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = v[2 * j] + v[2 * j + 1];
}

inline std::vector<std::size_t> all_steps(const TemporalGrid& temporal) {
    std::vector<std::size_t> steps(temporal.m() + 1);
    for (std::size_t k = 0; k < steps.size(); ++k) steps[k] = k;
    return steps;
}

/// Runs and keeps only the requested time steps (sorted, duplicates removed,
/// steps beyond m dropped).
inline SolutionField run_steps(const InitialState& state, const ReflectionWeights& weights, const SpatialGrid& grid,
                               const TemporalGrid& temporal, std::vector<std::size_t> steps,
                               FieldMode mode = FieldMode::regular) {
    if (weights.r.size() != grid.n()) throw StructuralError("weight count does not match grid");
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
    steps.erase(std::remove_if(steps.begin(), steps.end(), [&](std::size_t k) { return k > temporal.m(); }),
                steps.end());
    SolutionField field(grid, temporal, mode, std::move(steps));
    std::size_t next_row = 0;
    propagate(state, weights, temporal, [&](std::size_t k, std::span<const double> v) {
        if (next_row < field.rows() && field.steps()[next_row] == k) fold_state(v, field.row(next_row++));
    });
    return field;
}

inline SolutionField run(const InitialState& state, const ReflectionWeights& weights, const SpatialGrid& grid,
                         const TemporalGrid& temporal) {
    return run_steps(state, weights, grid, temporal, all_steps(temporal));
}

/// Same recursion with comb coefficients in place of point values; entries
/// of the result are the coefficients of delta(x - x_j).
inline SolutionField run_dirac(const DiracCombData& comb, const ReflectionWeights& weights, const SpatialGrid& grid,
                               const TemporalGrid& temporal) {
    return run_steps(initialize(comb, grid, temporal), weights, grid, temporal, all_steps(temporal),
                     FieldMode::dirac_coefficients);
}

inline SolutionField run_dirac_steps(const DiracCombData& comb, const ReflectionWeights& weights,
                                     const SpatialGrid& grid, const TemporalGrid& temporal,
                                     std::vector<std::size_t> steps) {
    return run_steps(initialize(comb, grid, temporal), weights, grid, temporal, std::move(steps),
                     FieldMode::dirac_coefficients);
}

/// Thresholds for telling singular from regular nodes across refinement levels.
struct SeparationOptions {
    double relative_tolerance = 0.1;  // |S_f - S_{f-1}| <= tol * S_f counts as stabilized
    double floor = 1e-8;              // coefficients at or below this are never singular
};

/// Regular/singular split of a multi-resolution Dirac computation, laid out on
/// the coarsest level's nodes at the shared time steps.
struct DiracSeparation {
    SpatialGrid grid;                     // coarsest level
    std::vector<std::size_t> steps;       // coarse step indices
    std::vector<double> regular;          // rows x (n_coarse+1), gamma pair-sum / (2 delta_finest)
    std::vector<unsigned char> singular;  // same shape, 1 on detected singular support
    std::vector<double> raw;              // finest-level gamma at the shared nodes

    std::size_t cols() const { return grid.node_count(); }
    double regular_at(std::size_t row, std::size_t j) const { return regular[row * cols() + j]; }
    bool singular_at(std::size_t row, std::size_t j) const { return singular[row * cols() + j] != 0; }
    double raw_at(std::size_t row, std::size_t j) const { return raw[row * cols() + j]; }
};

namespace detail {

// Largest |gamma| among node j and its immediate neighbours. An atom whose
// position shifts by one cell between levels (jump snapped to a different
// midpoint) still lands inside the window.
inline double window_peak(std::span<const double> row, std::size_t j) {
    double s = std::abs(row[j]);
    if (j > 0) s = std::max(s, std::abs(row[j - 1]));
    if (j + 1 < row.size()) s = std::max(s, std::abs(row[j + 1]));
    return s;
}

inline bool same_scenario(const SpatialGrid& coarse, const SpatialGrid& fine) {
    return coarse.a() == fine.a() && coarse.b() == fine.b() && fine.n() == 2 * coarse.n();
}

}  // namespace detail

/// Separates the singular (Dirac) and regular parts of u from dirac-mode runs
/// at n, 2n, 4n, ... of the same scenario.
///
/// Unscaled coefficients stabilize on the singular support and shrink like
/// delta elsewhere. A coarse node is flagged singular when the windowed peak of
/// |gamma| at the two finest levels agrees within the relative tolerance and
/// exceeds the floor. Elsewhere the regular value is the sum of gamma at the
/// matching finest node and its right neighbour divided by 2 delta: right- and
/// left-moving coefficients occupy alternate nodes, so a pair holds one of each.
inline DiracSeparation separate_scales(const std::vector<SolutionField>& runs, const SeparationOptions& options = {}) {
    if (runs.size() < 3) throw RefinementError("scale separation needs at least 3 refinement levels");
    for (std::size_t l = 0; l < runs.size(); ++l) {
        if (runs[l].mode() != FieldMode::dirac_coefficients) {
            throw RefinementError("scale separation needs dirac-mode fields");
        }
        if (l > 0 && !detail::same_scenario(runs[l - 1].grid(), runs[l].grid())) {
            throw RefinementError("levels must share [a, b] and double n each time");
        }
    }
    const SolutionField& coarse = runs.front();
    const SolutionField& fine = runs.back();
    const SolutionField& second = runs[runs.size() - 2];
    const std::size_t levels = runs.size() - 1;
    const std::size_t fine_factor = std::size_t{1} << levels;
    const std::size_t second_factor = fine_factor / 2;

    DiracSeparation sep{coarse.grid(), {}, {}, {}, {}};
    for (std::size_t k : coarse.steps()) {
        if (fine.has_step(k * fine_factor) && second.has_step(k * second_factor)) sep.steps.push_back(k);
    }
    if (sep.steps.empty()) throw RefinementError("levels share no stored time steps");

    const std::size_t cols = coarse.cols();
    const double two_delta = 2.0 * fine.grid().delta();
    sep.regular.assign(sep.steps.size() * cols, 0.0);
    sep.singular.assign(sep.steps.size() * cols, 0);
    sep.raw.assign(sep.steps.size() * cols, 0.0);
    for (std::size_t r = 0; r < sep.steps.size(); ++r) {
        auto frow = fine.at_step(sep.steps[r] * fine_factor);
        auto srow = second.at_step(sep.steps[r] * second_factor);
        for (std::size_t j = 0; j < cols; ++j) {
            const std::size_t jf = j * fine_factor;
            const std::size_t js = j * second_factor;
            double peak_f = detail::window_peak(frow, jf);
            double peak_s = detail::window_peak(srow, js);
            bool singular = peak_f > options.floor && std::abs(peak_f - peak_s) <= options.relative_tolerance * peak_f;
            const std::size_t idx = r * cols + j;
            sep.raw[idx] = frow[jf];
            sep.singular[idx] = singular ? 1 : 0;
            if (!singular) {
                double pair = frow[jf] + (jf + 1 < frow.size() ? frow[jf + 1] : 0.0);
                sep.regular[idx] = pair / two_delta;
            }
        }
    }
    return sep;
}

}  // namespace scatterwave
