#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "scatterwave/engine.hpp"
#include "scatterwave/errors.hpp"
#include "scatterwave/grid_medium.hpp"
#include "scatterwave/initial_data.hpp"

namespace scatterwave {

struct WaveformSnapshot {
    double time = 0.0;
    std::vector<double> x;
    std::vector<double> u;
    std::vector<unsigned char> singular;  // empty for regular-mode runs
    double display_scale = 1.0;           // presentation only, never applied to u
};

struct ConvergenceEntry {
    std::size_t n;
    double error;
};

struct ConvergenceReport {
    std::vector<ConvergenceEntry> entries;  // ascending n
    double slope = 0.0;                     // least-squares slope of log E against log n
    double constant = 0.0;                  // exp(intercept) of the same fit
    double mean_scaled_error = 0.0;         // mean of E(n) * n
};

/// Dirac pulse crossing the smooth ramp: unit right-moving atom at x = -5 on
/// [-15, 25], run to T = 20 so the pulse ends at x = 15, past the ramp.
struct RampScenario {
    static constexpr double a = -15.0;
    static constexpr double b = 25.0;
    static constexpr double horizon = 20.0;
    static constexpr double source = -5.0;
    static constexpr double display_scale = 32.0;
};

/// Random 40-jump layered zone on [1, 10] with a right-moving Gaussian source
/// 2 exp(-0.05 (x + 10 - shift)^2).
struct OscillatoryScenario {
    static constexpr double a = -45.0;
    static constexpr double b = 55.0;
    static constexpr double horizon = 35.0;
    static constexpr std::size_t jumps = 40;
    static constexpr double zone_lo = 1.0;
    static constexpr double zone_hi = 10.0;
    static constexpr double amplitude = 2.0;
    static constexpr double rate = 0.05;
    static constexpr double center = -10.0;
};

namespace detail {

inline void check_ramp_level(int p) {
    if (p < 2 || p > 20) throw ParameterError("ramp level p must lie in [2, 20], got " + std::to_string(p));
}

}  // namespace detail

/// Dirac-mode ramp run at n = 2^p keeping only the listed steps.
inline SolutionField ramp_dirac_run(int p, const std::vector<std::size_t>& steps) {
    detail::check_ramp_level(p);
    auto g = build_grid(RampScenario::a, RampScenario::b, std::size_t{1} << p, RampScenario::horizon);
    auto weights = compute_weights(sample_medium(ramp_medium(), g.space));
    auto comb = comb_from_positions({{RampScenario::source, 1.0, 0.0}}, g.space);
    return run_dirac_steps(comb, weights, g.space, g.time, steps);
}

/// Rescaled regular waveform (gamma_j + gamma_{j+1}) / (2 delta) of one
/// dirac-mode row; the last node has no right neighbour and uses gamma_n alone.
inline std::vector<double> pair_rescaled(std::span<const double> gamma, double delta) {
    std::vector<double> w(gamma.size());
    for (std::size_t j = 0; j < gamma.size(); ++j) {
        double right = j + 1 < gamma.size() ? gamma[j + 1] : 0.0;
        w[j] = (gamma[j] + right) / (2.0 * delta);
    }
    return w;
}

struct RampResult {
    WaveformSnapshot before;
    WaveformSnapshot after;
    DiracSeparation separation;
};

/// Ramp traversal at n = 2^p (7 <= p <= 15). The separation uses the levels
/// 2^p, 2^{p+1}, 2^{p+2}; both snapshots live on the 2^p grid.
inline RampResult ramp_experiment(int p, const SeparationOptions& options = {}) {
    if (p < 7 || p > 15) throw ParameterError("ramp experiment needs 7 <= p <= 15, got " + std::to_string(p));
    std::vector<SolutionField> levels;
    for (int l = 0; l < 3; ++l) {
        std::size_t m = (std::size_t{1} << (p + l)) / 2;  // T / delta = 20 n / 40
        levels.push_back(ramp_dirac_run(p + l, {0, m}));
    }
    DiracSeparation sep = separate_scales(levels, options);

    auto snapshot = [&](std::size_t row) {
        WaveformSnapshot s;
        s.time = levels.front().temporal().time(sep.steps[row]);
        s.x = sep.grid.nodes();
        s.u.resize(sep.cols());
        s.singular.resize(sep.cols());
        for (std::size_t j = 0; j < sep.cols(); ++j) {
            s.u[j] = sep.regular_at(row, j);
            s.singular[j] = sep.singular_at(row, j) ? 1 : 0;
        }
        s.display_scale = RampScenario::display_scale;
        return s;
    };
    return RampResult{snapshot(0), snapshot(sep.steps.size() - 1), std::move(sep)};
}

/// Relative rms difference between the rescaled waveform of `candidate` and of
/// `reference` (same scenario, reference n a power-of-two multiple) at the
/// final step, over the candidate's nodes. Nodes where the windowed |gamma|
/// agrees between the two runs within `options` are singular; they and their
/// two neighbours are excluded.
inline double relative_rms_error(const SolutionField& candidate, const SolutionField& reference,
                                 const SeparationOptions& options = {}) {
    const auto& cg = candidate.grid();
    const auto& rg = reference.grid();
    if (cg.a() != rg.a() || cg.b() != rg.b() || rg.n() % cg.n() != 0) {
        throw RefinementError("reference must refine the candidate grid by an integer factor");
    }
    const std::size_t factor = rg.n() / cg.n();
    if ((factor & (factor - 1)) != 0) throw RefinementError("refinement factor must be a power of two");
    const std::size_t kc = candidate.steps().back();
    auto crow = candidate.at_step(kc);
    auto rrow = reference.at_step(kc * factor);
    auto cw = pair_rescaled(crow, cg.delta());
    auto rw = pair_rescaled(rrow, rg.delta());

    std::vector<unsigned char> excluded(crow.size(), 0);
    for (std::size_t j = 0; j < crow.size(); ++j) {
        double pc = detail::window_peak(crow, j);
        double pr = detail::window_peak(rrow, j * factor);
        if (pr > options.floor && std::abs(pc - pr) <= options.relative_tolerance * pr) {
            excluded[j] = 1;
            if (j > 0) excluded[j - 1] = 1;
            if (j + 1 < excluded.size()) excluded[j + 1] = 1;
        }
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < crow.size(); ++j) {
        if (excluded[j]) continue;
        double ref = rw[j * factor];
        double diff = cw[j] - ref;
        num += diff * diff;
        den += ref * ref;
    }
    if (den == 0.0) return 0.0;
    return std::sqrt(num / den);
}

/// Least-squares line through (log x, log y); returns {slope, intercept}.
inline std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double count = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double lx = std::log(x[i]);
        double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    return {slope, (sy - slope * sx) / count};
}

/// E(n) for n = 2^p_min .. 2^p_max against the self-convergence reference at
/// 2^p_ref, all at the final time of the ramp scenario.
inline ConvergenceReport convergence_study(int p_min, int p_max, int p_ref, const SeparationOptions& options = {}) {
    if (p_min < 2 || p_min > p_max) throw ParameterError("convergence study needs 2 <= p_min <= p_max");
    if (p_ref < p_max + 2) throw ParameterError("reference level must satisfy p_ref >= p_max + 2");
    auto final_step = [](int p) { return (std::size_t{1} << p) / 2; };
    SolutionField reference = ramp_dirac_run(p_ref, {final_step(p_ref)});

    ConvergenceReport report;
    std::vector<double> ns;
    std::vector<double> errors;
    for (int p = p_min; p <= p_max; ++p) {
        SolutionField candidate = ramp_dirac_run(p, {final_step(p)});
        double e = relative_rms_error(candidate, reference, options);
        std::size_t n = std::size_t{1} << p;
        report.entries.push_back({n, e});
        ns.push_back(static_cast<double>(n));
        errors.push_back(e);
        report.mean_scaled_error += e * static_cast<double>(n);
    }
    report.mean_scaled_error /= static_cast<double>(report.entries.size());
    if (report.entries.size() >= 2) {
        auto [slope, intercept] = loglog_fit(ns, errors);
        report.slope = slope;
        report.constant = std::exp(intercept);
    }
    return report;
}

/// Regular-mode run of the layered-zone scenario with the source shifted by
/// `source_shift`; snapshots at t = 0, about T/2 and T on a grid of n cells.
inline std::vector<WaveformSnapshot> oscillatory_experiment(std::uint64_t seed, double source_shift,
                                                            std::size_t n = 4096) {
    auto g = build_grid(OscillatoryScenario::a, OscillatoryScenario::b, n, OscillatoryScenario::horizon);
    Medium medium = random_step_medium(seed, OscillatoryScenario::jumps, OscillatoryScenario::zone_lo,
                                       OscillatoryScenario::zone_hi);
    auto weights = compute_weights(sample_medium(medium, g.space));
    RegularData data{gaussian(OscillatoryScenario::amplitude, OscillatoryScenario::rate,
                              OscillatoryScenario::center + source_shift),
                     zero_sampler()};
    const std::size_t m = g.time.m();
    std::vector<std::size_t> steps{0, m / 2, m};
    SolutionField field = run_steps(initialize(data, g.space, g.time), weights, g.space, g.time, steps);

    std::vector<WaveformSnapshot> out;
    for (std::size_t r = 0; r < field.rows(); ++r) {
        WaveformSnapshot s;
        s.time = g.time.time(field.steps()[r]);
        s.x = g.space.nodes();
        auto row = field.row(r);
        s.u.assign(row.begin(), row.end());
        out.push_back(std::move(s));
    }
    return out;
}

/// Largest jump between neighbouring nodes of a snapshot.
inline double jump_metric(const WaveformSnapshot& s) {
    double best = 0.0;
    for (std::size_t j = 0; j + 1 < s.u.size(); ++j) best = std::max(best, std::abs(s.u[j + 1] - s.u[j]));
    return best;
}

struct SingleInterfaceResult {
    double reflection;       // r at the interface
    double max_error;        // max |(u - incident) - r * incident mirrored| on the left side
    std::size_t nodes_checked;
};

/// Smooth right-moving Gaussian meeting one impedance jump placed on a
/// midpoint. Left of the jump the field must be the incident wave plus r times
/// the incident profile mirrored about the jump.
inline SingleInterfaceResult single_interface_experiment(std::size_t n = 2048, double zeta_right = 3.0) {
    // The source sits far enough left that its tail is below roundoff at the
    // jump at t = 0, so all of it arrives from the left.
    const double a = -60.0, b = 60.0, horizon = 50.0;
    auto g = build_grid(a, b, n, horizon);
    const std::size_t jump_cell = n / 2;
    const double x_jump = g.space.midpoint(jump_cell);
    Medium medium = step_medium({x_jump}, {1.0, zeta_right});
    auto samples = sample_medium(medium, g.space);
    auto weights = compute_weights(samples);
    Sampler incident = gaussian(OscillatoryScenario::amplitude, OscillatoryScenario::rate, -30.0);
    RegularData data{incident, zero_sampler()};
    const std::size_t m = g.time.m();
    SolutionField field = run_steps(initialize(data, g.space, g.time), weights, g.space, g.time, {m});

    SingleInterfaceResult res{weights.r[jump_cell], 0.0, 0};
    const double t = g.time.time(m);
    auto row = field.at_step(m);
    for (std::size_t j = 0; j <= jump_cell; ++j) {
        double x = g.space.node(j);
        double reflected = row[j] - incident(x - t);
        double expected = res.reflection * incident(2.0 * x_jump - x - t);
        res.max_error = std::max(res.max_error, std::abs(reflected - expected));
        ++res.nodes_checked;
    }
    return res;
}

struct TimingEntry {
    std::size_t n;
    double seconds;
};

/// Wall time of the scattering recursion on the ramp medium with a smooth
/// source, same [a, b] and T for every n. Only the final row is retained so the
/// measurement follows the stencil cost rather than the memory hierarchy's
/// response to an O(mn) output buffer. Each n is repeated at least
/// `min_repeats` times and until `min_seconds` have accumulated; the fastest
/// run is reported.
inline std::vector<TimingEntry> performance_probe(const std::vector<std::size_t>& n_values, double horizon,
                                                  int min_repeats = 5, double min_seconds = 0.2) {
    if (n_values.size() < 3) throw ParameterError("performance probe needs at least 3 grid sizes");
    if (!std::is_sorted(n_values.begin(), n_values.end())) throw ParameterError("grid sizes must be ascending");
    std::vector<TimingEntry> out;
    for (std::size_t n : n_values) {
        auto g = build_grid(RampScenario::a, RampScenario::b, n, horizon);
        auto weights = compute_weights(sample_medium(ramp_medium(), g.space));
        RegularData data{gaussian(2.0, 0.05, -5.0), zero_sampler()};
        InitialState state = initialize(data, g.space, g.time);
        double best = std::numeric_limits<double>::infinity();
        double total = 0.0;
        for (int r = 0; r < min_repeats || total < min_seconds; ++r) {
            auto start = std::chrono::steady_clock::now();
            SolutionField field = run_steps(state, weights, g.space, g.time, {g.time.m()});
            auto stop = std::chrono::steady_clock::now();
            volatile double sink = field.at(0, n / 2);
            (void)sink;
            double dt = std::chrono::duration<double>(stop - start).count();
            best = std::min(best, dt);
            total += dt;
        }
        out.push_back({n, best});
    }
    return out;
}

}  // namespace scatterwave
