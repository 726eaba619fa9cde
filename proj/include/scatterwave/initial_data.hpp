#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <charconv>
#include <functional>
#include <string>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "scatterwave/errors.hpp"
#include "scatterwave/grid_medium.hpp"

namespace scatterwave {

using Sampler = std::function<double(double)>;

namespace detail {

// Shortest text that reads back to the same double.
inline std::string shortest(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

/// Right-moving (alpha) and left-moving (beta) components as ordinary
/// functions. They must be defined on the extended domain
/// [a - (m+1) delta, b + (m+1) delta].
struct RegularData {
    Sampler alpha;
    Sampler beta;
};

/// Dirac combs alpha = sum c_i delta(x - a - i*Delta), beta = sum d_i delta(...).
/// Keys are integer offsets on the extended lattice, so alignment holds by
/// construction; use comb_from_positions to build one from physical positions.
struct DiracCombData {
    std::map<std::int64_t, double> c;
    std::map<std::int64_t, double> d;
};

/// Initial interleaved state and the boundary sequences injected at steps 1..m.
///
/// v0[2j] is the right-moving amplitude at node j, v0[2j+1] the left-moving
/// one. left_boundary[k-1] is alpha(x_0 - t_k), right_boundary[k-1] is
/// beta(x_n + t_k).
struct InitialState {
    std::vector<double> v0;
    std::vector<double> left_boundary;
    std::vector<double> right_boundary;
};

/// Offsets spanned by the extended lattice: every node that any boundary
/// evaluation touches, plus one guard cell on each side.
struct ExtendedRange {
    std::int64_t first;
    std::int64_t last;
};

inline ExtendedRange extended_range(const SpatialGrid& grid, const TemporalGrid& temporal) {
    auto guard = static_cast<std::int64_t>(temporal.m()) + 1;
    return {-guard, static_cast<std::int64_t>(grid.n()) + guard};
}

/// Preliminary conversion of (f, g) to (alpha, beta):
///
///   alpha = (f - H / zeta) / 2,  beta = (f + H / zeta) / 2,
///   H(x) = integral of zeta(s) g(s) ds from -infinity to x.
///
/// H is a cumulative trapezoid sum on the extended lattice starting at its left
/// end (g is taken as zero below it) and is interpolated linearly between
/// nodes; zeta and f are evaluated pointwise.
inline RegularData convert_fg(Sampler f, Sampler g, const Medium& medium, const SpatialGrid& grid,
                              const TemporalGrid& temporal) {
    const auto range = extended_range(grid, temporal);
    const auto count = static_cast<std::size_t>(range.last - range.first + 1);
    auto cumulative = std::make_shared<std::vector<double>>(count, 0.0);
    double prev = medium(grid.extended_node(range.first)) * g(grid.extended_node(range.first));
    for (std::size_t i = 1; i < count; ++i) {
        double x = grid.extended_node(range.first + static_cast<std::int64_t>(i));
        double cur = medium(x) * g(x);
        (*cumulative)[i] = (*cumulative)[i - 1] + 0.5 * grid.delta() * (prev + cur);
        prev = cur;
    }

    auto integral = [cumulative, grid, first = range.first](double x) {
        const auto& h = *cumulative;
        double s = (x - grid.extended_node(first)) / grid.delta();
        if (s <= 0.0) return 0.0;
        auto i = static_cast<std::size_t>(std::floor(s));
        if (i + 1 >= h.size()) return h.back();
        // Exact at nodes; linear in between.
        double w = s - static_cast<double>(i);
        if (w == 0.0) return h[i];
        return (1.0 - w) * h[i] + w * h[i + 1];
    };

    RegularData out;
    out.alpha = [f, integral, medium](double x) { return 0.5 * (f(x) - integral(x) / medium(x)); };
    out.beta = [f, integral, medium](double x) { return 0.5 * (f(x) + integral(x) / medium(x)); };
    return out;
}

namespace detail {

inline void check_lengths(const InitialState& s, const SpatialGrid& grid, const TemporalGrid& temporal) {
    if (s.v0.size() != 2 * grid.n() + 2 || s.left_boundary.size() != temporal.m() ||
        s.right_boundary.size() != temporal.m()) {
        throw StructuralError("initial state lengths do not match the grids");
    }
}

inline double comb_at(const std::map<std::int64_t, double>& comb, std::int64_t offset) {
    auto it = comb.find(offset);
    return it == comb.end() ? 0.0 : it->second;
}

}  // namespace detail

inline InitialState initialize(const RegularData& data, const SpatialGrid& grid, const TemporalGrid& temporal) {
    const std::size_t n = grid.n();
    const std::size_t m = temporal.m();
    InitialState s;
    s.v0.resize(2 * n + 2);
    for (std::size_t j = 0; j <= n; ++j) {
        double x = grid.node(j);
        s.v0[2 * j] = data.alpha(x);
        s.v0[2 * j + 1] = data.beta(x);
    }
    s.left_boundary.resize(m);
    s.right_boundary.resize(m);
    for (std::size_t k = 1; k <= m; ++k) {
        // x_0 - t_k and x_n + t_k are extended-lattice nodes since t_k = k delta.
        auto kk = static_cast<std::int64_t>(k);
        s.left_boundary[k - 1] = data.alpha(grid.extended_node(-kk));
        s.right_boundary[k - 1] = data.beta(grid.extended_node(static_cast<std::int64_t>(n) + kk));
    }
    return s;
}

inline InitialState initialize(const DiracCombData& comb, const SpatialGrid& grid, const TemporalGrid& temporal) {
    const std::size_t n = grid.n();
    const std::size_t m = temporal.m();
    InitialState s;
    s.v0.resize(2 * n + 2);
    for (std::size_t j = 0; j <= n; ++j) {
        auto off = static_cast<std::int64_t>(j);
        s.v0[2 * j] = detail::comb_at(comb.c, off);
        s.v0[2 * j + 1] = detail::comb_at(comb.d, off);
    }
    s.left_boundary.resize(m);
    s.right_boundary.resize(m);
    for (std::size_t k = 1; k <= m; ++k) {
        auto kk = static_cast<std::int64_t>(k);
        s.left_boundary[k - 1] = detail::comb_at(comb.c, -kk);
        s.right_boundary[k - 1] = detail::comb_at(comb.d, static_cast<std::int64_t>(n) + kk);
    }
    return s;
}

/// One Dirac atom at a physical position: weight c moving right, d moving left.
struct DiracAtom {
    double x;
    double c;
    double d;
};

/// Maps atoms at physical positions onto extended-lattice offsets. Rejects the
/// whole comb if any atom misses a node by more than `relative_tolerance * delta`;
/// nothing is snapped silently.
inline DiracCombData comb_from_positions(const std::vector<DiracAtom>& atoms, const SpatialGrid& grid,
                                         double relative_tolerance = 1e-9) {
    DiracCombData comb;
    for (const auto& atom : atoms) {
        double s = (atom.x - grid.a()) / grid.delta();
        double nearest = std::round(s);
        if (!std::isfinite(s) || std::abs(s - nearest) > relative_tolerance) {
            throw AlignmentError("Dirac atom at x=" + detail::shortest(atom.x) + " is not on the extended grid (a=" +
                                 detail::shortest(grid.a()) + ", delta=" + detail::shortest(grid.delta()) + ")");
        }
        auto off = static_cast<std::int64_t>(nearest);
        if (atom.c != 0.0) comb.c[off] += atom.c;
        if (atom.d != 0.0) comb.d[off] += atom.d;
    }
    return comb;
}

/// Samples alpha and beta at every node of the extended lattice and uses the
/// samples as comb coefficients. The two problems share their grid trace.
inline DiracCombData sample_to_comb(const RegularData& data, const SpatialGrid& grid, const TemporalGrid& temporal) {
    DiracCombData comb;
    const auto range = extended_range(grid, temporal);
    for (auto off = range.first; off <= range.last; ++off) {
        double x = grid.extended_node(off);
        comb.c[off] = data.alpha(x);
        comb.d[off] = data.beta(x);
    }
    return comb;
}

inline Sampler gaussian(double amplitude, double rate, double center) {
    return [=](double x) { return amplitude * std::exp(-rate * (x - center) * (x - center)); };
}

inline Sampler zero_sampler() {
    return [](double) { return 0.0; };
}

}  // namespace scatterwave
