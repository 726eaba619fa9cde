// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "scatterwave/scatterwave.hpp"

using namespace scatterwave;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// Piecewise-constant medium with jumps on randomly chosen midpoints of the grid.
Medium random_midpoint_medium(std::mt19937_64& gen, const SpatialGrid& grid) {
    const std::size_t n = grid.n();
    const std::size_t jumps = 1 + static_cast<std::size_t>(detail::unit_uniform(gen) * static_cast<double>(n / 2));
    std::vector<std::size_t> cells;
    for (std::size_t i = 0; i < jumps; ++i) {
        cells.push_back(static_cast<std::size_t>(detail::unit_uniform(gen) * static_cast<double>(n)));
    }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    std::vector<double> breaks;
    std::vector<double> values{0.2 + 4.8 * detail::unit_uniform(gen)};
    for (std::size_t c : cells) {
        breaks.push_back(grid.midpoint(c));
        values.push_back(0.2 + 4.8 * detail::unit_uniform(gen));
    }
    return step_medium(std::move(breaks), std::move(values));
}

double max_field_diff(const SolutionField& a, const SolutionField& b) {
    double worst = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto x = a.row(r), y = b.row(r);
        for (std::size_t j = 0; j < x.size(); ++j) worst = std::max(worst, std::abs(x[j] - y[j]));
    }
    return worst;
}

const std::size_t kSizes[] = {16, 64, 256};

Outcome ac1() {
    auto start = Clock::now();
    std::mt19937_64 gen(101);
    double worst = 0.0;
    bool long_enough = true;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = kSizes[trial % 3];
        auto g = build_grid(0.0, 1.0, n, 2.0);
        long_enough = long_enough && g.time.m() >= 2 * n;
        auto w = compute_weights(sample_medium(random_midpoint_medium(gen, g.space), g.space));
        auto comb = random_comb(gen, n, g.time.m(), 8);
        worst = std::max(worst, max_field_diff(run_dirac(comb, w, g.space, g.time),
                                               trace_dirac_exact(comb, w, g.space, g.time)));
    }
    double secs = seconds_since(start);
    bool pass = worst <= 1e-12 && secs <= 60.0 && long_enough;
    return {pass, fmt("max|diff|=%.3g", worst) + (long_enough ? " steps>=2n" : " steps<2n") +
                      fmt(" time=%.2fs", secs)};
}

Outcome ac2() {
    std::mt19937_64 gen(202);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = kSizes[trial % 3];
        auto g = build_grid(0.0, 1.0, n, 2.0);
        auto w = compute_weights(sample_medium(random_midpoint_medium(gen, g.space), g.space));
        double ca = -1.0 + 3.0 * detail::unit_uniform(gen);
        double cb = -1.0 + 3.0 * detail::unit_uniform(gen);
        RegularData data{gaussian(1.0, 20.0, ca), gaussian(-0.7, 35.0, cb)};
        worst = std::max(worst, max_field_diff(run(initialize(data, g.space, g.time), w, g.space, g.time),
                                               trace_regular_exact(data, w, g.space, g.time)));
    }

    // Constant medium: entries must equal the translated samples bit for bit.
    auto g = build_grid(-10.0, 10.0, 512, 8.0);
    auto w = compute_weights(sample_medium(constant_medium(1.3), g.space));
    Sampler alpha = gaussian(1.0, 0.5, -2.0);
    Sampler beta = gaussian(-0.5, 1.0, 3.0);
    auto u = run(initialize(RegularData{alpha, beta}, g.space, g.time), w, g.space, g.time);
    double translation = 0.0;
    for (std::size_t k = 0; k <= g.time.m(); ++k) {
        for (std::size_t j = 0; j <= g.space.n(); ++j) {
            auto jj = static_cast<std::int64_t>(j), kk = static_cast<std::int64_t>(k);
            double expect = alpha(g.space.extended_node(jj - kk)) + beta(g.space.extended_node(jj + kk));
            translation = std::max(translation, std::abs(u.at(k, j) - expect));
        }
    }
    bool pass = worst <= 1e-12 && translation == 0.0;
    return {pass, fmt("max|diff|=%.3g", worst) + fmt(" constant-medium translation error=%.3g", translation)};
}

bool ap_matches_display() {
    const double a = 0.1, b = -0.2, c = 0.3, d = -0.4;
    auto A = propagation_matrix(ReflectionWeights{{a, b, c, d}});
    Eigen::MatrixXd E(10, 10);
    // clang-format off
    E << 0,     a, 1 + a, 0,     0,     0,     0,     0,     0,     0,
         0,     0, 0,     0,     0,     0,     0,     0,     0,     0,
         0,     0, 0,     b,     1 + b, 0,     0,     0,     0,     0,
         0, 1 - a, -a,    0,     0,     0,     0,     0,     0,     0,
         0,     0, 0,     0,     0,     c,     1 + c, 0,     0,     0,
         0,     0, 0,     1 - b, -b,    0,     0,     0,     0,     0,
         0,     0, 0,     0,     0,     0,     0,     d,     1 + d, 0,
         0,     0, 0,     0,     0,     1 - c, -c,    0,     0,     0,
         0,     0, 0,     0,     0,     0,     0,     0,     0,     0,
         0,     0, 0,     0,     0,     0,     0,     1 - d, -d,    0;
    // clang-format on
    return A == E;
}

Outcome ac3() {
    auto start = Clock::now();
    std::mt19937_64 gen(303);
    double rho_max = 0.0, fact = 0.0, unit = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = std::size_t{4} << (trial % 4);
        auto w = random_weights(gen, n);
        auto bundle = build_bundle(w, samples_from_weights(w));
        rho_max = std::max(rho_max, spectral_radius(bundle.A));
        fact = std::max(fact, factorization_residual(bundle));
        unit = std::max(unit, unitarity_residual(bundle));
    }
    bool ap = ap_matches_display();
    double secs = seconds_since(start);
    bool pass = rho_max < 1.0 - 1e-8 && fact <= 1e-12 && unit <= 1e-12 && ap && secs <= 30.0;
    return {pass, fmt("max rho=%.10f", rho_max) + fmt(" factorization=%.3g", fact) + fmt(" unitarity=%.3g", unit) +
                      std::string(" n=4 display ") + (ap ? "matches" : "DIFFERS") + fmt(" time=%.2fs", secs)};
}

Outcome ac4() {
    std::mt19937_64 gen(404);
    double worst_growth = -1e300;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 8 + static_cast<std::size_t>(detail::unit_uniform(gen) * 120.0);
        auto w = random_weights(gen, n);
        auto bundle = build_bundle(w, samples_from_weights(w));
        TemporalGrid t(3.0 * static_cast<double>(n), 1.0);
        std::vector<double> v0(2 * n + 2);
        for (auto& x : v0) x = 2.0 * detail::unit_uniform(gen) - 1.0;
        InitialState s{v0, std::vector<double>(t.m(), 0.0), std::vector<double>(t.m(), 0.0)};
        double prev = weighted_norm(s.v0, bundle);
        propagate(s, w, t, [&](std::size_t k, std::span<const double> v) {
            if (k == 0) return;
            double now = weighted_norm(v, bundle);
            worst_growth = std::max(worst_growth, now - prev);
            prev = now;
        });
    }
    return {worst_growth <= 1e-12, fmt("max step growth of |vD|=%.3g", worst_growth)};
}

Outcome ac5() {
    auto start = Clock::now();
    auto report = convergence_study(7, 12, 14);
    double study_secs = seconds_since(start);

    auto t10 = Clock::now();
    ramp_experiment(10);
    double p10_secs = seconds_since(t10);

    bool scaled_ok = true;
    std::string en;
    for (const auto& e : report.entries) {
        double s = e.error * static_cast<double>(e.n);
        scaled_ok = scaled_ok && s >= 3.7 && s <= 14.8;
        en += fmt(" %.2f", s);
    }
    bool pass = report.slope >= -1.15 && report.slope <= -0.85 && scaled_ok && study_secs <= 900.0 && p10_secs <= 60.0;
    return {pass, fmt("slope=%.4f", report.slope) + " E*n=[" + en + " ]" + fmt(" study=%.2fs", study_secs) +
                      fmt(" p10=%.3fs", p10_secs)};
}

Outcome ac6() {
    const std::size_t ns[] = {2048, 4096, 8192};
    std::vector<double> outside, inside;
    for (std::size_t n : ns) {
        outside.push_back(jump_metric(oscillatory_experiment(7, 0.0, n).back()));
        inside.push_back(jump_metric(oscillatory_experiment(7, 15.0, n).back()));
    }
    double min_ratio = 1e300;
    for (std::size_t i = 1; i < outside.size(); ++i) min_ratio = std::min(min_ratio, outside[i - 1] / outside[i]);
    double retention = inside.back() / inside.front();
    auto iface = single_interface_experiment();

    bool continuity = min_ratio >= 2.0;
    bool discontinuity = retention >= 0.5;
    bool interface = iface.max_error <= 1e-10;
    return {continuity && discontinuity && interface,
            fmt("out-of-region min decay ratio=%.4f", min_ratio) + (continuity ? " (>=2 ok)" : " (<2)") +
                fmt(" in-region retention=%.3f", retention) + (discontinuity ? " (>=0.5 ok)" : " (<0.5)") +
                fmt(" single-interface err=%.3g", iface.max_error)};
}

Outcome ac7() {
    auto t = performance_probe({1024, 2048, 4096}, RampScenario::horizon, 5, 0.5);
    double lo = 1e300, hi = 0.0;
    std::string s;
    for (std::size_t i = 1; i < t.size(); ++i) {
        double ratio = t[i].seconds / t[i - 1].seconds;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        s += fmt(" %.2f", ratio);
    }
    return {lo >= 2.5 && hi <= 6.0, "ratios=[" + s + " ]" + fmt(" t(4096)=%.4fs", t.back().seconds)};
}

Outcome ac8() {
    std::mt19937_64 gen(808);
    const std::size_t n = 16;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        auto w = random_weights(gen, n);
        auto bundle = build_bundle(w, samples_from_weights(w));
        StateVector s{std::vector<double>(2 * n + 2)};
        for (auto& x : s.v) x = 2.0 * detail::unit_uniform(gen) - 1.0;
        double l = 2.0 * detail::unit_uniform(gen) - 1.0;
        double r = 2.0 * detail::unit_uniform(gen) - 1.0;
        auto fast = step(s, w, l, r);
        auto slow = matrix_step_reference(s, bundle, l, r);
        for (std::size_t i = 0; i < fast.v.size(); ++i) worst = std::max(worst, std::abs(fast.v[i] - slow.v[i]));
    }
    return {worst <= 1e-13, fmt("max|step - matrix|=%.3g", worst)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"AC1 Dirac exactness vs characteristics oracle", ac1},
        {"AC2 regular exactness and constant-medium translation", ac2},
        {"AC3 spectral radius, factorization, unitarity", ac3},
        {"AC4 weighted norm dissipation", ac4},
        {"AC5 ramp convergence rate", ac5},
        {"AC6 oscillatory continuity/discontinuity and single interface", ac6},
        {"AC7 run-time scaling", ac7},
        {"AC8 stencil vs dense matrix step", ac8},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
