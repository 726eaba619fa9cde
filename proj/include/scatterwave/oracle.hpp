#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "scatterwave/engine.hpp"
#include "scatterwave/grid_medium.hpp"
#include "scatterwave/initial_data.hpp"

namespace scatterwave {

// Ground-truth solvers that share no code with the vector stencil in engine.hpp.

enum class Direction { right, left };

struct Impulse {
    std::int64_t node;  // extended-lattice offset
    Direction direction;
    double amplitude;
};

/// Live impulses after each step k = 0..m.
struct ImpulseLedger {
    std::vector<std::vector<Impulse>> steps;
};

/// Outcome of one impulse crossing one interface.
struct Split {
    Impulse transmitted;
    Impulse reflected;
};

/// Scattering of a single impulse at the interface it meets during the next
/// step. A right-mover at node i meets the interface between i and i+1 with
/// weight w; a left-mover at node i the one between i-1 and i.
///
///   right, amplitude a:  (1 + w) a right at i+1,   w a left at i
///   left,  amplitude b:  (1 - w) b left at i-1,   -w b right at i
inline Split split_impulse(const Impulse& p, double w) {
    if (p.direction == Direction::right) {
        return {{p.node + 1, Direction::right, (1.0 + w) * p.amplitude}, {p.node, Direction::left, w * p.amplitude}};
    }
    return {{p.node - 1, Direction::left, (1.0 - w) * p.amplitude}, {p.node, Direction::right, -w * p.amplitude}};
}

namespace detail {

using ImpulseKey = std::pair<std::int64_t, Direction>;

inline double interface_weight(const ReflectionWeights& weights, std::int64_t left_node) {
    // Outside [x_0, x_n] the medium is constant: transparent interfaces.
    if (left_node < 0 || left_node >= static_cast<std::int64_t>(weights.r.size())) return 0.0;
    return weights.r[static_cast<std::size_t>(left_node)];
}

inline bool can_still_matter(const ImpulseKey& key, std::int64_t n) {
    // Outgoing impulses past the ends travel through constant tails forever.
    return key.second == Direction::right ? key.first <= n : key.first >= 0;
}

}  // namespace detail

/// Event-driven characteristics tracer for Dirac-comb data.
///
/// Each atom is an impulse on the extended lattice; incoming atoms outside
/// [a, b] simply travel in through the transparent tails. Impulses landing on
/// the same node and direction are merged by summation. Output entries are
/// the Dirac coefficients at the nodes of [a, b], for every k.
inline SolutionField trace_dirac_exact(const DiracCombData& comb, const ReflectionWeights& weights,
                                       const SpatialGrid& grid, const TemporalGrid& temporal,
                                       ImpulseLedger* ledger = nullptr,
                                       FieldMode mode = FieldMode::dirac_coefficients) {
    if (weights.r.size() != grid.n()) throw StructuralError("weight count does not match grid");
    const auto n = static_cast<std::int64_t>(grid.n());

    std::map<detail::ImpulseKey, double> live;
    for (const auto& [off, c] : comb.c) {
        detail::ImpulseKey key{off, Direction::right};
        if (c != 0.0 && detail::can_still_matter(key, n)) live[key] += c;
    }
    for (const auto& [off, d] : comb.d) {
        detail::ImpulseKey key{off, Direction::left};
        if (d != 0.0 && detail::can_still_matter(key, n)) live[key] += d;
    }

    SolutionField field(grid, temporal, mode, all_steps(temporal));
    auto record = [&](std::size_t k) {
        auto row = field.row(k);
        std::vector<Impulse> snapshot;
        for (const auto& [key, amp] : live) {
            if (key.first >= 0 && key.first <= n) row[static_cast<std::size_t>(key.first)] += amp;
            if (ledger) snapshot.push_back({key.first, key.second, amp});
        }
        if (ledger) ledger->steps.push_back(std::move(snapshot));
    };

    if (ledger) ledger->steps.clear();
    record(0);
    for (std::size_t k = 1; k <= temporal.m(); ++k) {
        std::map<detail::ImpulseKey, double> next;
        for (const auto& [key, amp] : live) {
            std::int64_t left_node = key.second == Direction::right ? key.first : key.first - 1;
            double w = detail::interface_weight(weights, left_node);
            Split s = split_impulse({key.first, key.second, amp}, w);
            auto emit = [&](const Impulse& out) {
                detail::ImpulseKey out_key{out.node, out.direction};
                if (detail::can_still_matter(out_key, n)) next[out_key] += out.amplitude;
            };
            emit(s.transmitted);
            if (w != 0.0) emit(s.reflected);
        }
        live.swap(next);
        record(k);
    }
    return field;
}

/// Exact grid trace for regular data: samples alpha and beta at the extended
/// nodes and pushes the samples through the same split laws.
inline SolutionField trace_regular_exact(const RegularData& data, const ReflectionWeights& weights,
                                         const SpatialGrid& grid, const TemporalGrid& temporal) {
    return trace_dirac_exact(sample_to_comb(data, grid, temporal), weights, grid, temporal, nullptr,
                             FieldMode::regular);
}

/// Constant-medium solution alpha(x - t) + beta(x + t).
inline double dalembert_constant(const Sampler& alpha, const Sampler& beta, double x, double t) {
    return alpha(x - t) + beta(x + t);
}

}  // namespace scatterwave
