#pragma once

// Deterministic random generation for oracles and property tests. The
// engine is the fully specified mt19937_64; doubles and bounded ints are
// derived by hand so that identical seeds give identical streams on every
// platform, independent of the standard library's distribution internals.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <random>
#include <vector>

#include "glassnet/core.hpp"
#include "glassnet/network.hpp"
#include "glassnet/signs.hpp"

namespace glassnet {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

    int coin_sign() { return uniform_int(0, 1) == 0 ? -1 : 1; }

    bool chance(double p) { return uniform() < p; }

private:
    std::mt19937_64 eng_;
};

inline WeightMatrix random_weight_matrix(Rng& rng, int n, double lo = -2.0, double hi = 2.0) {
    WeightMatrix w(n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) w(i, j) = rng.uniform(lo, hi);
    return w;
}

/// Constraint-satisfying network with vanishing input; resamples on the
/// measure-zero violations.
inline GlassNetwork random_network(Rng& rng, int n, double lo = -2.0, double hi = 2.0) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        WeightMatrix w = random_weight_matrix(rng, n, lo, hi);
        if (validate_constraint(GlassNetwork::unchecked(w)).ok())
            return GlassNetwork::vanishing(std::move(w));
    }
    throw Error("random_network: could not satisfy the output constraint");
}

/// Constraint-satisfying embedded network with a random constant input.
inline GlassNetwork random_embedded_network(Rng& rng, int free_units, double lo = -2.0,
                                            double hi = 2.0) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        WeightMatrix w = random_weight_matrix(rng, free_units, lo, hi);
        Vec mu(static_cast<std::size_t>(free_units));
        for (double& m : mu) m = rng.uniform(lo, hi);
        try {
            return embed_input(w, mu);
        } catch (const ConstraintViolationError&) {
        }
    }
    throw Error("random_embedded_network: could not satisfy the output constraint");
}

inline IndexSet random_subset(Rng& rng, int n, bool allow_empty = false) {
    while (true) {
        std::uint64_t bits = rng.next_u64() & IndexSet::full(n).bits();
        if (allow_empty || bits != 0) return IndexSet(n, bits);
    }
}

inline IndexSet random_subset_of_size(Rng& rng, int n, int k) {
    IndexSet s = IndexSet::empty(n);
    while (s.size() < k) s = s.with(rng.uniform_int(1, n));
    return s;
}

inline SignPattern random_sign_pattern(Rng& rng, int n) {
    SignPattern p(n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) p.set(i, j, rng.uniform_int(-1, 1));
    return p;
}

/// Random well-formed family. In nonvanishing-input mode members are built
/// over the free units and the clamped unit n is added to each, so disjoint
/// members intersect in exactly that unit; the innermost nested member may
/// come out as the clamped unit alone.
inline StableFamily random_family(Rng& rng, int n, FamilyKind kind,
                                  SignatureMode mode = SignatureMode::Unconstrained) {
    const bool clamped = mode == SignatureMode::NonvanishingInput;
    const int free_units = clamped ? n - 1 : n;
    if (free_units < 1) throw std::invalid_argument("random_family: dimension too small");

    auto lift = [&](std::uint64_t free_bits) {
        std::uint64_t bits = free_bits;
        if (clamped) bits |= std::uint64_t{1} << (n - 1);
        return IndexSet(n, bits);
    };

    switch (kind) {
        case FamilyKind::Single: {
            const int k = rng.uniform_int(clamped ? 0 : 1, free_units);
            return StableFamily::single(lift(random_subset_of_size(rng, free_units, k).bits()));
        }
        case FamilyKind::Disjoint: {
            const int count = rng.uniform_int(1, std::max(1, free_units / 2));
            std::vector<IndexSet> sets;
            std::uint64_t used = 0;
            for (int t = 0; t < count; ++t) {
                std::vector<int> avail;
                for (int u = 1; u <= free_units; ++u)
                    if (!((used >> (u - 1)) & 1)) avail.push_back(u);
                if (avail.empty()) break;
                const int k = rng.uniform_int(1, static_cast<int>(avail.size()));
                std::uint64_t bits = 0;
                for (int picked = 0; picked < k;) {
                    const int u = avail[static_cast<std::size_t>(
                        rng.uniform_int(0, static_cast<int>(avail.size()) - 1))];
                    if ((bits >> (u - 1)) & 1) continue;
                    bits |= std::uint64_t{1} << (u - 1);
                    ++picked;
                }
                used |= bits;
                sets.push_back(lift(bits));
            }
            return StableFamily::disjoint(std::move(sets));
        }
        case FamilyKind::Nested: {
            // Strictly increasing chain, realized by drawing distinct member
            // sizes and growing one bitmask through them. With a clamped unit
            // the innermost member may be the clamped unit alone (size 0 over
            // the free units).
            const int min_size = clamped ? 0 : 1;
            const int distinct_sizes = free_units - min_size + 1;
            const int depth = rng.uniform_int(1, std::min(3, distinct_sizes));
            std::vector<int> sizes;
            while (static_cast<int>(sizes.size()) < depth) {
                const int k = rng.uniform_int(min_size, free_units);
                if (std::find(sizes.begin(), sizes.end(), k) == sizes.end()) sizes.push_back(k);
            }
            std::sort(sizes.begin(), sizes.end());
            std::vector<IndexSet> sets;
            std::uint64_t bits = 0;
            for (int target : sizes) {
                while (std::popcount(bits) < target)
                    bits |= std::uint64_t{1} << (rng.uniform_int(1, free_units) - 1);
                sets.push_back(lift(bits));
            }
            return StableFamily::nested(std::move(sets));
        }
    }
    throw std::logic_error("random_family: unreachable");
}

/// Positive matrix sharing the given sign pattern (uniform magnitudes).
inline WeightMatrix random_member_of_pattern(Rng& rng, const SignPattern& s, double lo = 0.05,
                                             double hi = 2.0) {
    WeightMatrix w(s.n());
    for (int i = 1; i <= s.n(); ++i)
        for (int j = 1; j <= s.n(); ++j) w(i, j) = s(i, j) * rng.uniform(lo, hi);
    return w;
}

/// Deterministic witness for a pattern that allows stability of `a`: the
/// first entry of the required sign in each row gets magnitude n, every
/// other nonzero entry magnitude 1/(2n), which forces the margin positive.
inline WeightMatrix stability_witness(const SignPattern& s, const IndexSet& a) {
    const int n = s.n();
    const Signature sa = signature(a);
    WeightMatrix w(n);
    for (int i = 1; i <= n; ++i) {
        int witness_col = 0;
        for (int j : a.members())
            if (s(i, j) == sa.sign(i)) {
                witness_col = j;
                break;
            }
        if (witness_col == 0)
            throw std::invalid_argument("stability_witness: pattern does not allow the set");
        for (int j = 1; j <= n; ++j) {
            const double magnitude = j == witness_col ? static_cast<double>(n) : 1.0 / (2.0 * n);
            w(i, j) = s(i, j) * magnitude;
        }
    }
    return w;
}

}  // namespace glassnet
