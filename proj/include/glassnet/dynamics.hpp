#pragma once

// Exact event-driven simulation. Inside a part the flow is linear with the
// closed-form solution x(t) = W_a + (x(0) - W_a) * exp(-t), so the only
// work is computing zero-crossing times in closed form and switching parts
// at the crossings. No numerical integrator is involved.

#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "glassnet/core.hpp"
#include "glassnet/network.hpp"

namespace glassnet {

inline constexpr double kConvergenceTol = 1e-9;
inline constexpr double kCrossingTieTol = 1e-15;
inline constexpr double kChatterTimeTol = 1e-12;
inline constexpr double kChatterDistTol = 1e-9;

struct Crossing {
    double time = 0.0;  // strictly positive
    int coordinate = 0; // 1-based; lowest index on (near-)ties
};

/// Earliest zero crossing of the flow started at x0 inside the given part,
/// or nothing when the flow reaches the attractor without leaving. A
/// coordinate crosses exactly when its value and its attractor component
/// are nonzero with opposite signs, at t = log((W_a - x0)/W_a).
inline std::optional<Crossing> step_to_boundary(const WeightMatrix& w, const IndexSet& part,
                                                const Vec& x0) {
    if (part.n() != w.n() || static_cast<int>(x0.size()) != w.n())
        throw std::invalid_argument("step_to_boundary: dimension mismatch");
    const Vec wa = attractor_vector(w, part);
    std::optional<Crossing> best;
    for (int i = 1; i <= w.n(); ++i) {
        const double xi = x0[static_cast<std::size_t>(i - 1)];
        const double wi = wa[static_cast<std::size_t>(i - 1)];
        if (xi == 0.0 || wi == 0.0 || (xi > 0.0) == (wi > 0.0)) continue;
        const double t = std::log((wi - xi) / wi);
        if (!best || t < best->time) best = Crossing{t, i};
    }
    return best;
}

enum class TerminationKind { ConvergedToFixedPoint, MaxSwitches, MaxTime, ChatterDetected };

inline std::string to_string(TerminationKind t) {
    switch (t) {
        case TerminationKind::ConvergedToFixedPoint: return "converged";
        case TerminationKind::MaxSwitches: return "max-switches";
        case TerminationKind::MaxTime: return "max-time";
        case TerminationKind::ChatterDetected: return "chatter";
    }
    return "?";
}

struct TrajectorySegment {
    IndexSet part;
    Vec entry_state;
    double duration = 0.0;
    std::optional<int> exit_coordinate;  // absent for the final segment
};

struct Trajectory {
    std::vector<TrajectorySegment> segments;
    TerminationKind termination = TerminationKind::MaxTime;
    std::optional<IndexSet> converged_part;
    Vec final_state;
    double elapsed = 0.0;
    int switches = 0;
};

namespace detail {

inline Vec flow_at(const Vec& x0, const Vec& wa, double t) {
    const double decay = std::exp(-t);
    Vec x(x0.size());
    for (std::size_t i = 0; i < x0.size(); ++i) x[i] = wa[i] + (x0[i] - wa[i]) * decay;
    return x;
}

inline void check_finite(const Vec& x) {
    if (!all_finite(x)) throw Error("simulate: state became non-finite");
}

}  // namespace detail

/// Simulates from x0 until convergence, the time horizon, the switch budget
/// or chatter. Crossing coordinates land exactly on zero and are assigned
/// to the side the flow is entering; a coordinate sitting exactly on zero
/// while the flow pushes it across is flipped in its own zero-duration
/// segment, lowest index first, which is also how simultaneous crossings
/// are serialized. Three switches within 1e-12 time of each other around
/// one boundary point are reported as chatter and not resolved.
inline Trajectory simulate(const GlassNetwork& net, const Vec& x0, double max_time = 50.0,
                           int max_switches = 10000) {
    const int n = net.n();
    if (static_cast<int>(x0.size()) != n)
        throw std::invalid_argument("simulate: initial state has wrong dimension");
    if (!all_finite(x0)) throw std::invalid_argument("simulate: initial state must be finite");
    if (!(max_time > 0.0)) throw std::invalid_argument("simulate: max_time must be positive");
    if (max_switches < 1) throw std::invalid_argument("simulate: max_switches must be positive");
    if (net.is_embedded() && x0[static_cast<std::size_t>(n - 1)] != 1.0)
        throw std::invalid_argument(
            "simulate: clamped coordinate must start at 1 in embedded-input mode");

    Vec x = x0;
    IndexSet part = IndexSet::empty(n);
    for (int i = 1; i <= n; ++i)
        if (theta(x[static_cast<std::size_t>(i - 1)])) part = part.with(i);

    Trajectory traj;
    std::deque<std::pair<double, Vec>> recent_switches;

    auto record_switch = [&](const Vec& state) {
        recent_switches.emplace_back(traj.elapsed, state);
        if (recent_switches.size() > 3) recent_switches.pop_front();
    };
    auto chattering = [&]() {
        if (recent_switches.size() < 3) return false;
        if (recent_switches.back().first - recent_switches.front().first >= kChatterTimeTol)
            return false;
        for (const auto& [t, s] : recent_switches)
            if (inf_dist(s, recent_switches.front().second) >= kChatterDistTol) return false;
        return true;
    };
    auto finish = [&](TerminationKind kind) {
        traj.termination = kind;
        if (kind == TerminationKind::ConvergedToFixedPoint) traj.converged_part = part;
        traj.final_state = x;
        return traj;
    };

    while (true) {
        detail::check_finite(x);
        const Vec wa = attractor_point(net, part);

        // Boundary coordinates being pushed across flip instantly.
        int flip = 0;
        for (int i = 1; i <= n && flip == 0; ++i) {
            if (x[static_cast<std::size_t>(i - 1)] != 0.0) continue;
            const double wi = wa[static_cast<std::size_t>(i - 1)];
            if ((part.contains(i) && wi < 0.0) || (!part.contains(i) && wi > 0.0)) flip = i;
        }
        if (flip != 0) {
            traj.segments.push_back(TrajectorySegment{part, x, 0.0, flip});
            part = part.toggled(flip);
            ++traj.switches;
            record_switch(x);
            if (chattering()) return finish(TerminationKind::ChatterDetected);
            if (traj.switches >= max_switches) return finish(TerminationKind::MaxSwitches);
            continue;
        }

        const std::optional<Crossing> crossing = step_to_boundary(net.weights(), part, x);
        const double remaining = max_time - traj.elapsed;

        if (!crossing) {
            // The attractor lies in the closure of this part; ride the flow
            // until it is within tolerance of the fixed point. The target is
            // pulled slightly inside the tolerance so rounding cannot leave
            // the final state outside it.
            const double target = kConvergenceTol * 0.999;
            const double dist = inf_dist(x, wa);
            const double t_reach = dist <= target ? 0.0 : std::log(dist / target);
            const double duration = std::min(t_reach, remaining);
            traj.segments.push_back(TrajectorySegment{part, x, duration, std::nullopt});
            x = detail::flow_at(x, wa, duration);
            traj.elapsed += duration;
            detail::check_finite(x);
            return finish(t_reach <= remaining ? TerminationKind::ConvergedToFixedPoint
                                               : TerminationKind::MaxTime);
        }

        if (crossing->time >= remaining) {
            traj.segments.push_back(TrajectorySegment{part, x, remaining, std::nullopt});
            x = detail::flow_at(x, wa, remaining);
            traj.elapsed += remaining;
            detail::check_finite(x);
            return finish(TerminationKind::MaxTime);
        }

        const Vec entry = x;
        x = detail::flow_at(entry, wa, crossing->time);
        x[static_cast<std::size_t>(crossing->coordinate - 1)] = 0.0;
        // Coordinates whose crossings (near-)tie with the winner are pinned
        // to the boundary as well and then flipped one by one above.
        for (int i = 1; i <= n; ++i) {
            if (i == crossing->coordinate) continue;
            const double xi = entry[static_cast<std::size_t>(i - 1)];
            const double wi = wa[static_cast<std::size_t>(i - 1)];
            if (xi == 0.0 || wi == 0.0 || (xi > 0.0) == (wi > 0.0)) continue;
            const double ti = std::log((wi - xi) / wi);
            if (ti <= crossing->time + kCrossingTieTol) x[static_cast<std::size_t>(i - 1)] = 0.0;
        }
        traj.segments.push_back(TrajectorySegment{part, entry, crossing->time,
                                                  crossing->coordinate});
        traj.elapsed += crossing->time;
        part = part.toggled(crossing->coordinate);
        ++traj.switches;
        record_switch(x);
        if (chattering()) return finish(TerminationKind::ChatterDetected);
        if (traj.switches >= max_switches) return finish(TerminationKind::MaxSwitches);
    }
}

/// State at global time t, reconstructed from the segment parameters via
/// the closed-form flow.
inline Vec state_at(const GlassNetwork& net, const Trajectory& traj, double t) {
    if (t < 0.0) throw std::invalid_argument("state_at: time must be nonnegative");
    double start = 0.0;
    for (const TrajectorySegment& seg : traj.segments) {
        if (t <= start + seg.duration && seg.duration > 0.0) {
            return detail::flow_at(seg.entry_state, attractor_point(net, seg.part), t - start);
        }
        start += seg.duration;
    }
    return traj.final_state;
}

/// Dense samples at multiples of dt, ending with the trajectory's final
/// state at its final time.
inline std::vector<std::pair<double, Vec>> sample_trajectory(const GlassNetwork& net,
                                                             const Trajectory& traj, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("sample_trajectory: dt must be positive");
    std::vector<std::pair<double, Vec>> samples;
    for (double t = 0.0; t < traj.elapsed; t += dt) samples.emplace_back(t, state_at(net, traj, t));
    samples.emplace_back(traj.elapsed, traj.final_state);
    return samples;
}

/// Right-hand side -x + W*theta(x) of the network, evaluated exactly.
inline Vec velocity(const GlassNetwork& net, const Vec& x) {
    const int n = net.n();
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("velocity: state has wrong dimension");
    IndexSet active = IndexSet::empty(n);
    for (int i = 1; i <= n; ++i)
        if (theta(x[static_cast<std::size_t>(i - 1)])) active = active.with(i);
    Vec v = attractor_point(net, active);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] -= x[static_cast<std::size_t>(i)];
    return v;
}

struct AxisRange {
    double lo = 0.0;
    double hi = 0.0;
    int steps = 2;  // number of grid points, endpoints included
};

struct FieldPoint {
    double x = 0.0;
    double y = 0.0;
    double vx = 0.0;
    double vy = 0.0;
};

/// Velocity table over a 2-d grid. Every unit not listed in `fixed` is a
/// free axis and there must be exactly two of them; the lower-numbered one
/// sweeps `xr`, the other `yr`. Grid order: x sweeps fastest.
inline std::vector<FieldPoint> vector_field_grid(const GlassNetwork& net, const AxisRange& xr,
                                                 const AxisRange& yr,
                                                 const std::map<int, double>& fixed = {}) {
    const int n = net.n();
    std::vector<int> free_axes;
    for (int i = 1; i <= n; ++i)
        if (!fixed.count(i)) free_axes.push_back(i);
    for (const auto& [unit, value] : fixed) {
        if (unit < 1 || unit > n)
            throw std::invalid_argument("vector_field_grid: fixed unit outside 1.." +
                                        std::to_string(n));
        if (!std::isfinite(value))
            throw std::invalid_argument("vector_field_grid: fixed values must be finite");
    }
    if (free_axes.size() != 2)
        throw std::invalid_argument("vector_field_grid: exactly 2 free axes required, got " +
                                    std::to_string(free_axes.size()));
    if (xr.steps < 1 || yr.steps < 1)
        throw std::invalid_argument("vector_field_grid: steps must be positive");

    auto coordinate = [](const AxisRange& r, int i) {
        return r.steps == 1 ? r.lo
                            : r.lo + (r.hi - r.lo) * static_cast<double>(i) /
                                         static_cast<double>(r.steps - 1);
    };

    Vec state(static_cast<std::size_t>(n), 0.0);
    for (const auto& [unit, value] : fixed) state[static_cast<std::size_t>(unit - 1)] = value;

    std::vector<FieldPoint> rows;
    rows.reserve(static_cast<std::size_t>(xr.steps) * static_cast<std::size_t>(yr.steps));
    for (int yi = 0; yi < yr.steps; ++yi) {
        for (int xi = 0; xi < xr.steps; ++xi) {
            const double xv = coordinate(xr, xi);
            const double yv = coordinate(yr, yi);
            state[static_cast<std::size_t>(free_axes[0] - 1)] = xv;
            state[static_cast<std::size_t>(free_axes[1] - 1)] = yv;
            const Vec v = velocity(net, state);
            rows.push_back(FieldPoint{xv, yv, v[static_cast<std::size_t>(free_axes[0] - 1)],
                                      v[static_cast<std::size_t>(free_axes[1] - 1)]});
        }
    }
    return rows;
}

}  // namespace glassnet
