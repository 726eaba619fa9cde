#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "scatterwave/engine.hpp"
#include "scatterwave/grid_medium.hpp"
#include "scatterwave/initial_data.hpp"
#include "scatterwave/oracle.hpp"
#include "scatterwave/spectral.hpp"

namespace scatterwave {

/// Random reflection weights, each uniform in [-limit, limit].
inline ReflectionWeights random_weights(std::mt19937_64& gen, std::size_t n, double limit = 0.9) {
    ReflectionWeights w;
    w.r.resize(n);
    for (auto& r : w.r) r = limit * (2.0 * detail::unit_uniform(gen) - 1.0);
    return w;
}

/// Node impedances reproducing the given weights, normalized to zeta(x_n) = 1.
inline MediumSamples samples_from_weights(const ReflectionWeights& w) {
    MediumSamples s;
    s.values.resize(w.r.size() + 1);
    s.values.back() = 1.0;
    for (std::size_t j = w.r.size(); j-- > 0;) s.values[j] = s.values[j + 1] * (1.0 + w.r[j]) / (1.0 - w.r[j]);
    return s;
}

/// Up to `max_atoms` atoms with amplitudes in [-1, 1] at offsets that can
/// reach [a, b] within m steps.
inline DiracCombData random_comb(std::mt19937_64& gen, std::size_t n, std::size_t m, std::size_t max_atoms = 8) {
    DiracCombData comb;
    const auto atoms = 1 + static_cast<std::size_t>(detail::unit_uniform(gen) * static_cast<double>(max_atoms));
    const auto lo = -static_cast<std::int64_t>(m);
    const auto span = static_cast<double>(n + 2 * m + 1);
    for (std::size_t i = 0; i < atoms; ++i) {
        auto off = lo + static_cast<std::int64_t>(detail::unit_uniform(gen) * span);
        double amp = 2.0 * detail::unit_uniform(gen) - 1.0;
        if (detail::unit_uniform(gen) < 0.5) {
            comb.c[off] += amp;
        } else {
            comb.d[off] += amp;
        }
    }
    return comb;
}

struct SuiteResult {
    std::string name;
    bool passed = true;
    double worst = 0.0;      // worst residual (or radius) observed
    double tolerance = 0.0;  // pass threshold for `worst`
    std::size_t trials = 0;
};

struct VerifyOptions {
    std::size_t n = 16;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    double weight_limit = 0.9;
    bool corrupt_weight = false;  // forces r[0] = 1 to exercise the range check
};

/// Factorization, unitarity, spectral radius, norm dissipation and
/// oracle-equivalence checks over `trials` random media of size n.
inline std::vector<SuiteResult> run_verification(const VerifyOptions& opt) {
    if (opt.n < 2) throw ParameterError("verify needs n >= 2");
    if (opt.n > kDenseLimitN) {
        throw SizeError("verify needs n <= " + std::to_string(kDenseLimitN) + " for dense eigen-solves");
    }
    std::vector<SuiteResult> out{{"factorization", true, 0.0, 1e-12, 0},
                                 {"unitarity", true, 0.0, 1e-12, 0},
                                 {"spectral-radius", true, 0.0, 1.0 - 1e-8, 0},
                                 {"norm-dissipation", true, 0.0, 1e-12, 0},
                                 {"oracle-equivalence", true, 0.0, 1e-12, 0}};
    std::mt19937_64 gen(opt.seed);
    const std::size_t n = opt.n;
    for (std::size_t t = 0; t < opt.trials; ++t) {
        ReflectionWeights w = random_weights(gen, n, opt.weight_limit);
        if (opt.corrupt_weight && t == 0) w.r[0] = 1.0;
        MediumSamples samples = samples_from_weights(w);
        SpectralBundle b = build_bundle(w, samples);

        out[0].worst = std::max(out[0].worst, factorization_residual(b));
        out[1].worst = std::max(out[1].worst, unitarity_residual(b));
        out[2].worst = std::max(out[2].worst, spectral_radius(b.A));

        // Norm of v D must not grow when nothing is injected at the ends.
        std::vector<double> v(2 * n + 2), next(2 * n + 2);
        for (auto& x : v) x = 2.0 * detail::unit_uniform(gen) - 1.0;
        double prev = weighted_norm(v, b);
        for (std::size_t k = 0; k < 2 * n + 2; ++k) {
            step_into(v, w.r, 0.0, 0.0, next);
            v.swap(next);
            double cur = weighted_norm(v, b);
            out[3].worst = std::max(out[3].worst, cur - prev);
            prev = cur;
        }

        auto g = build_grid(0.0, 1.0, n, 2.0);
        DiracCombData comb = random_comb(gen, n, g.time.m());
        SolutionField engine = run_dirac(comb, w, g.space, g.time);
        SolutionField oracle = trace_dirac_exact(comb, w, g.space, g.time);
        for (std::size_t r = 0; r < engine.rows(); ++r) {
            for (std::size_t j = 0; j < engine.cols(); ++j) {
                out[4].worst = std::max(out[4].worst, std::abs(engine.at(r, j) - oracle.at(r, j)));
            }
        }
    }
    for (auto& s : out) {
        s.trials = opt.trials;
        s.passed = s.name == "spectral-radius" ? s.worst < s.tolerance : s.worst <= s.tolerance;
    }
    return out;
}

}  // namespace scatterwave
