#pragma once

// Validated Glass networks: weight matrix plus input mode. A constant
// external input is embedded as an extra clamped feedforward unit whose
// state is pinned at 1, which keeps every analysis purely matrix-driven.

#include <string>
#include <utility>
#include <vector>

#include "glassnet/core.hpp"

namespace glassnet {

enum class InputMode { Vanishing, EmbeddedNonvanishing };

/// Per-subset outcome of the non-vanishing output check. A violation is a
/// code whose column sum is identically the zero vector; near_zero lists
/// codes with some component within 1e-12 of zero, which make downstream
/// strict verdicts fragile.
struct ConstraintReport {
    std::vector<IndexSet> violations;
    std::vector<IndexSet> near_zero;

    bool ok() const { return violations.empty(); }
};

inline constexpr double kNearZeroWarn = 1e-12;

/// Attractor point of the part indexed by `a`: the sum of the columns of
/// `w` selected by `a` (the zero vector for the empty set).
inline Vec attractor_vector(const WeightMatrix& w, const IndexSet& a) {
    if (a.n() != w.n()) throw std::invalid_argument("attractor_vector: dimension mismatch");
    Vec r(static_cast<std::size_t>(w.n()), 0.0);
    for (int i = 1; i <= w.n(); ++i) r[static_cast<std::size_t>(i - 1)] = block_row_sum(w, i, a);
    return r;
}

class GlassNetwork;

ConstraintReport validate_constraint(const GlassNetwork& net, int cap = kDefaultEnumerationCap);

class GlassNetwork {
public:
    /// Network with no external input. Construction fails when the output
    /// constraint is violated unless `allow_violations` is set.
    static GlassNetwork vanishing(WeightMatrix w, bool allow_violations = false,
                                  int cap = kDefaultEnumerationCap) {
        GlassNetwork net(std::move(w), InputMode::Vanishing);
        net.check_or_throw(allow_violations, cap);
        return net;
    }

    /// Wraps an already-embedded matrix whose last unit is the clamped
    /// feedforward input (last row must be (0,...,0,1)).
    static GlassNetwork embedded(WeightMatrix w, bool allow_violations = false,
                                 int cap = kDefaultEnumerationCap) {
        const int n = w.n();
        if (n < 2)
            throw std::invalid_argument("GlassNetwork: embedded network needs at least 2 units");
        for (int j = 1; j <= n; ++j) {
            const double expected = (j == n) ? 1.0 : 0.0;
            if (w(n, j) != expected)
                throw std::invalid_argument(
                    "GlassNetwork: embedded matrix must have last row (0,...,0,1)");
        }
        GlassNetwork net(std::move(w), InputMode::EmbeddedNonvanishing);
        net.check_or_throw(allow_violations, cap);
        return net;
    }

    /// No constraint validation; for exploratory use and sign-level tests
    /// where only the margin algebra matters.
    static GlassNetwork unchecked(WeightMatrix w, InputMode mode = InputMode::Vanishing) {
        return GlassNetwork(std::move(w), mode);
    }

    const WeightMatrix& weights() const { return w_; }
    InputMode input_mode() const { return mode_; }
    int n() const { return w_.n(); }

    bool is_embedded() const { return mode_ == InputMode::EmbeddedNonvanishing; }

    /// Index of the clamped feedforward unit (always the last one).
    int clamped_unit() const {
        if (!is_embedded())
            throw std::logic_error("GlassNetwork: no clamped unit in vanishing-input mode");
        return n();
    }

    /// True when `a` indexes a part the dynamics can actually visit: any
    /// subset in vanishing mode, subsets containing the clamped unit otherwise.
    bool admissible(const IndexSet& a) const {
        if (a.n() != n()) return false;
        return !is_embedded() || a.contains(clamped_unit());
    }

private:
    GlassNetwork(WeightMatrix w, InputMode mode) : w_(std::move(w)), mode_(mode) {}

    void check_or_throw(bool allow_violations, int cap) const {
        if (allow_violations) return;
        const ConstraintReport rep = validate_constraint(*this, cap);
        if (!rep.ok()) {
            std::string msg = "output constraint violated for codes:";
            for (const IndexSet& s : rep.violations) msg += " " + s.to_string();
            throw ConstraintViolationError(msg);
        }
    }

    WeightMatrix w_;
    InputMode mode_;
};

/// Builds the (n+1)-dimensional block matrix [w | mu; 0 | 1] with the input
/// clamped as an always-active last unit.
inline GlassNetwork embed_input(const WeightMatrix& w, const Vec& mu,
                                bool allow_violations = false,
                                int cap = kDefaultEnumerationCap) {
    const int n = w.n();
    if (static_cast<int>(mu.size()) != n)
        throw std::invalid_argument("embed_input: input vector length " +
                                    std::to_string(mu.size()) + " does not match n=" +
                                    std::to_string(n));
    if (!all_finite(mu)) throw std::invalid_argument("embed_input: input must be finite");
    WeightMatrix big(n + 1);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) big(i, j) = w(i, j);
        big(i, n + 1) = mu[static_cast<std::size_t>(i - 1)];
    }
    big(n + 1, n + 1) = 1.0;
    return GlassNetwork::embedded(std::move(big), allow_violations, cap);
}

/// Every admissible code whose output W*p is identically zero. The empty
/// code is exempt in vanishing mode (the fully inactive state may settle
/// in the origin); in embedded mode only codes containing the clamped unit
/// are checked since the dynamics lives on the clamped hyperplane.
inline ConstraintReport validate_constraint(const GlassNetwork& net, int cap) {
    const int n = net.n();
    ConstraintReport rep;
    auto inspect = [&](const IndexSet& a) {
        const Vec wa = attractor_vector(net.weights(), a);
        bool all_zero = true;
        bool near = false;
        for (double c : wa) {
            if (c != 0.0) all_zero = false;
            if (std::abs(c) < kNearZeroWarn) near = true;
        }
        if (all_zero)
            rep.violations.push_back(a);
        else if (near)
            rep.near_zero.push_back(a);
    };

    if (net.is_embedded()) {
        const int clamped = net.clamped_unit();
        const std::uint64_t clamped_bit = std::uint64_t{1} << (clamped - 1);
        if (n - 1 > cap)
            throw EnumerationLimitError("enumeration over n=" + std::to_string(n - 1) +
                                        " free units exceeds the cap of " + std::to_string(cap) +
                                        " (2^n subsets)");
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask)
            inspect(IndexSet(n, mask | clamped_bit));
    } else {
        for (const IndexSet& a : all_subsets(n, cap)) {
            if (a.is_empty()) continue;
            inspect(a);
        }
    }
    return rep;
}

/// Attractor point of the part of `net` indexed by `a`.
inline Vec attractor_point(const GlassNetwork& net, const IndexSet& a) {
    return attractor_vector(net.weights(), a);
}

}  // namespace glassnet
