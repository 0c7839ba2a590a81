#pragma once

// Block-structure predicates and the composition / decomposition / coupling
// theorems. Each check evaluates the algebraic predicate AND recomputes the
// stability it is supposed to decide; the two must agree, and a mismatch is
// raised as an internal-consistency error since the equivalences are exact.

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "glassnet/core.hpp"
#include "glassnet/network.hpp"
#include "glassnet/stability.hpp"

namespace glassnet {

struct CouplingWitness {
    int index = 0;   // unit certifying or violating the condition
    double lhs = 0;  // first factor at that unit
    double rhs = 0;  // second factor at that unit
};

struct CouplingVerdict {
    bool holds = false;
    std::optional<CouplingWitness> witness;
    bool degenerate = false;  // some compared quantity was exactly tied at zero
};

/// Strict blockwise diagonal dominance of W[g] split along a: rows inside a
/// are dominated by the a-columns, rows of g\a by the complementary block.
inline bool is_block_diag_dominant(const WeightMatrix& w, const IndexSet& a, const IndexSet& g) {
    if (a.n() != w.n() || g.n() != w.n())
        throw std::invalid_argument("is_block_diag_dominant: dimension mismatch");
    if (!a.subset_of(g))
        throw std::invalid_argument("is_block_diag_dominant: first set must be a subset of the "
                                    "second");
    const IndexSet rest = g.difference(a);
    for (int i : g.members()) {
        const double in_a = std::abs(block_row_sum(w, i, a));
        const double in_rest = std::abs(block_row_sum(w, i, rest));
        if (a.contains(i) ? !(in_a > in_rest) : !(in_rest > in_a)) return false;
    }
    return true;
}

/// Strict blockwise Z-matrix condition on W[g] split along a: both
/// off-block row sums are negative.
inline bool is_block_z_matrix(const WeightMatrix& w, const IndexSet& a, const IndexSet& g) {
    if (a.n() != w.n() || g.n() != w.n())
        throw std::invalid_argument("is_block_z_matrix: dimension mismatch");
    if (!a.subset_of(g))
        throw std::invalid_argument("is_block_z_matrix: first set must be a subset of the second");
    const IndexSet rest = g.difference(a);
    for (int i : g.members()) {
        const double off = a.contains(i) ? block_row_sum(w, i, rest) : block_row_sum(w, i, a);
        if (!(off < 0.0)) return false;
    }
    return true;
}

namespace detail {

inline void require_consistent(bool predicate, bool truth, bool degenerate, const char* what) {
    // An exact tie makes the strict predicate false while floating point can
    // leave the recomputation on either side; that is reported as degenerate
    // instead of as a library bug.
    if (predicate != truth && !degenerate)
        throw TheoremConsistencyError(std::string(what) +
                                      ": algebraic predicate and direct stability recomputation "
                                      "disagree; this is a library bug");
}

inline bool margin_degenerate(const StableSetReport& r) {
    return r.near_degenerate;
}

}  // namespace detail

/// Do two disjoint stable sets compose into a stable union? True exactly
/// when W[a+b] is a-block diagonally dominant; the direct stability of the
/// union is recomputed and compared.
inline CouplingVerdict compose_check(const GlassNetwork& net, const IndexSet& a,
                                     const IndexSet& b) {
    if (a.is_empty() || b.is_empty())
        throw std::invalid_argument("compose_check: sets must be nonempty");
    if (!a.disjoint_from(b)) throw std::invalid_argument("compose_check: sets must be disjoint");
    if (!is_stable_set(net, a).stable() || !is_stable_set(net, b).stable())
        throw std::invalid_argument("compose_check: both sets must be stable");

    const IndexSet g = a.union_with(b);
    const bool predicate = is_block_diag_dominant(net.weights(), a, g);
    const StableSetReport rep = is_stable_set(net, g);
    const bool truth = rep.stable();
    detail::require_consistent(predicate, truth, detail::margin_degenerate(rep), "compose_check");

    CouplingVerdict v;
    v.holds = truth;
    v.degenerate = rep.near_degenerate;
    const IndexSet rest = g.difference(a);
    for (int i : g.members()) {
        const double in_a = block_row_sum(net.weights(), i, a);
        const double in_rest = block_row_sum(net.weights(), i, rest);
        const bool row_ok = a.contains(i) ? std::abs(in_a) > std::abs(in_rest)
                                          : std::abs(in_rest) > std::abs(in_a);
        if (!row_ok || !v.witness) v.witness = CouplingWitness{i, in_a, in_rest};
        if (!row_ok) break;
    }
    return v;
}

/// Does a stable set g decompose into stable parts a and g\a? True exactly
/// when W[g] is an a-block Z-matrix and the two attractors agree in sign
/// outside g; both subsets' stability is recomputed and compared.
inline CouplingVerdict decompose_check(const GlassNetwork& net, const IndexSet& g,
                                       const IndexSet& a) {
    if (a.is_empty()) throw std::invalid_argument("decompose_check: subset must be nonempty");
    if (!a.proper_subset_of(g))
        throw std::invalid_argument("decompose_check: need a proper nonempty subset of the set");
    if (!is_stable_set(net, g).stable())
        throw std::invalid_argument("decompose_check: the set to decompose must be stable");

    const IndexSet b = g.difference(a);
    const Vec wa = attractor_point(net, a);
    const Vec wb = attractor_point(net, b);

    bool predicate = is_block_z_matrix(net.weights(), a, g);
    bool outside_ok = true;
    CouplingVerdict v;
    for (int i = 1; i <= net.n(); ++i) {
        if (g.contains(i)) continue;
        const double pa = wa[static_cast<std::size_t>(i - 1)];
        const double pb = wb[static_cast<std::size_t>(i - 1)];
        if (!(pa * pb > 0.0)) {
            outside_ok = false;
            if (!v.witness) v.witness = CouplingWitness{i, pa, pb};
            if (pa * pb == 0.0) v.degenerate = true;
        }
    }
    predicate = predicate && outside_ok;

    const StableSetReport ra = is_stable_set(net, a);
    const StableSetReport rb = is_stable_set(net, b);
    const bool truth = ra.stable() && rb.stable();
    const bool degenerate =
        v.degenerate || detail::margin_degenerate(ra) || detail::margin_degenerate(rb);
    detail::require_consistent(predicate, truth, degenerate, "decompose_check");

    v.holds = truth;
    v.degenerate = degenerate;
    return v;
}

/// Coupling: given a stable set a, another set b is stable exactly when the
/// componentwise product of the signed attractors is positive.
inline CouplingVerdict coupling_check(const GlassNetwork& net, const IndexSet& a,
                                      const IndexSet& b) {
    if (b.is_empty()) throw std::invalid_argument("coupling_check: second set must be nonempty");
    if (!is_stable_set(net, a).stable())
        throw std::invalid_argument("coupling_check: first set must be stable");

    const Signature sa = signature(a);
    const Signature sb = signature(b);
    const Vec wa = attractor_point(net, a);
    const Vec wb = attractor_point(net, b);

    CouplingVerdict v;
    bool predicate = true;
    double min_product = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= net.n(); ++i) {
        const double fa = sa.sign(i) * wa[static_cast<std::size_t>(i - 1)];
        const double fb = sb.sign(i) * wb[static_cast<std::size_t>(i - 1)];
        const double prod = fa * fb;
        if (!(prod > 0.0) && predicate) {
            predicate = false;
            v.witness = CouplingWitness{i, fa, fb};
            if (prod == 0.0) v.degenerate = true;
        }
        if (predicate && prod < min_product) {
            min_product = prod;
            v.witness = CouplingWitness{i, fa, fb};
        }
    }

    const StableSetReport rb = is_stable_set(net, b);
    const bool truth = rb.stable();
    const bool degenerate = v.degenerate || detail::margin_degenerate(rb);
    detail::require_consistent(predicate, truth, degenerate, "coupling_check");

    v.holds = truth;
    v.degenerate = degenerate;
    return v;
}

/// Generalized three-way coupling: with a and b stable, g is stable exactly
/// when the triple componentwise product of signed attractors is positive.
inline CouplingVerdict triple_coupling_check(const GlassNetwork& net, const IndexSet& a,
                                             const IndexSet& b, const IndexSet& g) {
    if (g.is_empty())
        throw std::invalid_argument("triple_coupling_check: third set must be nonempty");
    if (!is_stable_set(net, a).stable() || !is_stable_set(net, b).stable())
        throw std::invalid_argument("triple_coupling_check: first two sets must be stable");

    const Signature sa = signature(a);
    const Signature sb = signature(b);
    const Signature sg = signature(g);
    const Vec wa = attractor_point(net, a);
    const Vec wb = attractor_point(net, b);
    const Vec wg = attractor_point(net, g);

    CouplingVerdict v;
    bool predicate = true;
    for (int i = 1; i <= net.n(); ++i) {
        const double fa = sa.sign(i) * wa[static_cast<std::size_t>(i - 1)];
        const double fb = sb.sign(i) * wb[static_cast<std::size_t>(i - 1)];
        const double fg = sg.sign(i) * wg[static_cast<std::size_t>(i - 1)];
        const double prod = fa * fb * fg;
        if (!(prod > 0.0)) {
            predicate = false;
            if (!v.witness) v.witness = CouplingWitness{i, fa * fb, fg};
            if (prod == 0.0) v.degenerate = true;
        }
    }

    const StableSetReport rg = is_stable_set(net, g);
    const bool truth = rg.stable();
    const bool degenerate = v.degenerate || detail::margin_degenerate(rg);
    detail::require_consistent(predicate, truth, degenerate, "triple_coupling_check");

    v.holds = truth;
    v.degenerate = degenerate;
    return v;
}

}  // namespace glassnet
