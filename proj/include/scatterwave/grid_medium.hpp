#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "scatterwave/errors.hpp"

namespace scatterwave {

/// Uniform spatial lattice on [a, b] with n cells.
///
/// Nodes are indexed from 0 (x_0 = a) to n (x_n = b). The same spacing is
/// used for the extended lattice outside [a, b], where negative offsets and
/// offsets above n address nodes a + offset * delta.
class SpatialGrid {
public:
    SpatialGrid(double a, double b, std::size_t n) : a_(a), b_(b), n_(n), delta_((b - a) / static_cast<double>(n)) {}

    double a() const { return a_; }
    double b() const { return b_; }
    std::size_t n() const { return n_; }
    double delta() const { return delta_; }
    std::size_t node_count() const { return n_ + 1; }

    /// Node position, computed directly from a (never by accumulation) so the
    /// right endpoint is exactly b.
    double node(std::size_t j) const { return j == n_ ? b_ : a_ + static_cast<double>(j) * delta_; }

    /// Node of the extended lattice; offset may be negative or exceed n.
    double extended_node(std::int64_t offset) const {
        if (offset == 0) return a_;
        if (offset == static_cast<std::int64_t>(n_)) return b_;
        return a_ + static_cast<double>(offset) * delta_;
    }

    /// Midpoint between node j and node j+1 (0 <= j < n); these are the jump
    /// points of the step surrogate.
    double midpoint(std::size_t j) const { return a_ + (static_cast<double>(j) + 0.5) * delta_; }

    std::vector<double> nodes() const {
        std::vector<double> x(n_ + 1);
        for (std::size_t j = 0; j <= n_; ++j) x[j] = node(j);
        return x;
    }

private:
    double a_;
    double b_;
    std::size_t n_;
    double delta_;
};

/// Time lattice t_k = k * delta, 0 <= k <= m, with m = floor(T / delta).
class TemporalGrid {
public:
    TemporalGrid(double horizon, double delta) : horizon_(horizon), delta_(delta) {
        double q = std::floor(horizon / delta);
        auto m = q < 0 ? std::size_t{0} : static_cast<std::size_t>(q);
        // floor() of a rounded quotient can land one off; repair against t_k directly.
        while (static_cast<double>(m + 1) * delta <= horizon) ++m;
        while (m > 0 && static_cast<double>(m) * delta > horizon) --m;
        m_ = m;
    }

    double horizon() const { return horizon_; }
    double delta() const { return delta_; }
    std::size_t m() const { return m_; }
    double time(std::size_t k) const { return static_cast<double>(k) * delta_; }
    double final_time() const { return time(m_); }

private:
    double horizon_;
    double delta_;
    std::size_t m_ = 0;
};

struct Grids {
    SpatialGrid space;
    TemporalGrid time;
};

inline Grids build_grid(double a, double b, std::size_t n, double horizon) {
    if (!(std::isfinite(a) && std::isfinite(b)) || !(b > a)) {
        std::ostringstream os;
        os << "invalid interval: need a < b, got a=" << a << " b=" << b;
        throw ParameterError(os.str());
    }
    if (n < 2) throw ParameterError("invalid cell count: need n >= 2, got n=" + std::to_string(n));
    if (!std::isfinite(horizon) || !(horizon > 0.0)) {
        std::ostringstream os;
        os << "invalid horizon: need T > 0, got T=" << horizon;
        throw ParameterError(os.str());
    }
    SpatialGrid space(a, b, n);
    return Grids{space, TemporalGrid(horizon, space.delta())};
}

/// Impedance coefficient zeta(x) with constant tails.
///
/// zeta equals zeta_minus for x <= x_minus and zeta_plus for x >= x_plus.
/// Every grid evaluation is checked against the open band (lower, upper).
struct Medium {
    std::function<double(double)> sampler;
    double zeta_minus = 1.0;
    double zeta_plus = 1.0;
    double x_minus = 0.0;
    double x_plus = 0.0;
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    // Jump locations, sorted, for step-function media; empty otherwise.
    std::vector<double> breakpoints;
    // Layer values for step media: values[i] holds on [breakpoints[i-1], breakpoints[i]).
    std::vector<double> layer_values;

    double operator()(double x) const { return sampler(x); }
};

/// Samples zeta(x_j) at the n+1 grid nodes.
struct MediumSamples {
    std::vector<double> values;
};

/// Reflection weights r_j for the n interfaces between consecutive nodes.
struct ReflectionWeights {
    std::vector<double> r;
};

inline Medium constant_medium(double zeta) {
    if (!(zeta > 0.0)) throw MediumBoundsError("constant impedance must be positive");
    Medium m;
    m.sampler = [zeta](double) { return zeta; };
    m.zeta_minus = m.zeta_plus = zeta;
    m.lower = 0.5 * zeta;
    m.upper = 2.0 * zeta;
    return m;
}

/// Right-continuous step function: values[0] left of breakpoints[0],
/// values[i] on [breakpoints[i-1], breakpoints[i]), values.back() beyond.
inline Medium step_medium(std::vector<double> breakpoints, std::vector<double> values) {
    if (values.size() != breakpoints.size() + 1) {
        throw StructuralError("step medium needs one more value than breakpoints");
    }
    if (!std::is_sorted(breakpoints.begin(), breakpoints.end())) {
        throw ParameterError("step medium breakpoints must be sorted");
    }
    for (double v : values) {
        if (!(v > 0.0)) throw MediumBoundsError("step medium values must be positive");
    }
    Medium m;
    m.zeta_minus = values.front();
    m.zeta_plus = values.back();
    m.x_minus = breakpoints.empty() ? 0.0 : breakpoints.front();
    m.x_plus = breakpoints.empty() ? 0.0 : breakpoints.back();
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    m.lower = 0.5 * *lo;
    m.upper = 2.0 * *hi;
    m.breakpoints = breakpoints;
    m.layer_values = values;
    m.sampler = [bp = std::move(breakpoints), vals = std::move(values)](double x) {
        auto it = std::upper_bound(bp.begin(), bp.end(), x);
        return vals[static_cast<std::size_t>(it - bp.begin())];
    };
    return m;
}

/// Smooth monotone ramp from 1 (x <= 1) to 3 (x >= 9).
inline double ramp_coefficient(double x) {
    if (x <= 1.0) return 1.0;
    if (x >= 9.0) return 3.0;
    double s = x - 5.0;
    return 2.0 + std::tanh(8.0 * s / (16.0 - s * s));
}

inline Medium ramp_medium() {
    Medium m;
    m.sampler = [](double x) { return ramp_coefficient(x); };
    m.zeta_minus = 1.0;
    m.zeta_plus = 3.0;
    m.x_minus = 1.0;
    m.x_plus = 9.0;
    m.lower = 0.5;
    m.upper = 4.0;
    return m;
}

namespace detail {

// 53-bit uniform draw in [0, 1); fixed formula so results do not depend on the
// standard library's distribution implementation.
inline double unit_uniform(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Random layered medium: jump_count sorted jumps drawn uniformly in [lo, hi],
/// zeta = 1 on the left tail, 2/3 on the right tail, interior layer values
/// uniform in [0.5, 1.5]. Generator is mt19937_64 seeded with `seed`.
inline Medium random_step_medium(std::uint64_t seed, std::size_t jump_count, double lo, double hi) {
    if (jump_count < 1) throw ParameterError("random step medium needs at least one jump");
    if (!(lo < hi)) throw ParameterError("random step medium needs lo < hi");
    std::mt19937_64 gen(seed);
    std::vector<double> jumps(jump_count);
    for (auto& x : jumps) x = lo + (hi - lo) * detail::unit_uniform(gen);
    std::sort(jumps.begin(), jumps.end());
    std::vector<double> values(jump_count + 1);
    values.front() = 1.0;
    values.back() = 2.0 / 3.0;
    for (std::size_t i = 1; i < jump_count; ++i) values[i] = 0.5 + detail::unit_uniform(gen);
    Medium m = step_medium(std::move(jumps), std::move(values));
    m.lower = 0.25;
    m.upper = 3.0;
    return m;
}

/// zeta(x_j) at every node, checked against the medium's admissible band.
inline MediumSamples sample_medium(const Medium& medium, const SpatialGrid& grid) {
    MediumSamples s;
    s.values.resize(grid.node_count());
    for (std::size_t j = 0; j < s.values.size(); ++j) {
        double x = grid.node(j);
        double z = medium(x);
        if (!(z > medium.lower && z < medium.upper)) {
            std::ostringstream os;
            os << "impedance " << z << " at x=" << x << " outside (" << medium.lower << ", " << medium.upper << ")";
            throw MediumBoundsError(os.str());
        }
        s.values[j] = z;
    }
    return s;
}

inline ReflectionWeights compute_weights(const MediumSamples& samples) {
    const auto& z = samples.values;
    if (z.size() < 3) throw StructuralError("need at least 3 samples (n >= 2)");
    ReflectionWeights w;
    w.r.resize(z.size() - 1);
    for (std::size_t j = 0; j < z.size(); ++j) {
        if (!(z[j] > 0.0)) {
            std::ostringstream os;
            os << "non-positive impedance sample " << z[j] << " at node " << j;
            throw MediumBoundsError(os.str());
        }
    }
    for (std::size_t j = 0; j + 1 < z.size(); ++j) w.r[j] = (z[j] - z[j + 1]) / (z[j] + z[j + 1]);
    return w;
}

/// Step surrogate zeta^P: jumps at the node midpoints, intervals closed on the
/// left. Left of the first midpoint it is zeta_minus; from the last midpoint on
/// it is zeta_plus; in between it takes the value of the enclosed node.
inline double evaluate_zeta_P(const MediumSamples& samples, const SpatialGrid& grid, const Medium& medium, double x) {
    const std::size_t n = grid.n();
    if (samples.values.size() != n + 1) throw StructuralError("sample count does not match grid");
    if (x < grid.midpoint(0)) return medium.zeta_minus;
    if (x >= grid.midpoint(n - 1)) return medium.zeta_plus;
    auto j = static_cast<std::size_t>(std::floor((x - grid.a()) / grid.delta() + 0.5));
    j = std::clamp<std::size_t>(j, 1, n - 1);
    // The estimate may be off by one right at a midpoint; settle it against the
    // same midpoint formula used for the range checks above.
    while (j > 1 && x < grid.midpoint(j - 1)) --j;
    while (j < n - 1 && x >= grid.midpoint(j)) ++j;
    return samples.values[j];
}

}  // namespace scatterwave
