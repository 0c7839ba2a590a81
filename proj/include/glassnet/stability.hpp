#pragma once

// Stable-set analysis. A part contains its attractor point, and is then
// automatically a stable state, exactly when every component of the
// signature-weighted attractor is strictly positive.

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "glassnet/core.hpp"
#include "glassnet/network.hpp"

namespace glassnet {

enum class Verdict { Stable, Unstable, OriginCandidate };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Stable: return "stable";
        case Verdict::Unstable: return "unstable";
        case Verdict::OriginCandidate: return "origin-candidate";
    }
    return "?";
}

struct StableSetReport {
    IndexSet set;
    Verdict verdict;
    Vec attractor;
    double margin = 0.0;          // min over units of s_i * attractor_i
    bool near_degenerate = false; // |margin| below the warning threshold

    bool stable() const { return verdict == Verdict::Stable; }
};

inline constexpr double kDegeneracyWarn = 1e-12;

/// Decides whether the part indexed by `a` contains its attractor point.
/// The test is strict: a zero margin component means the attractor sits on
/// the part boundary and the set is reported unstable with the
/// near-degenerate flag raised.
inline StableSetReport is_stable_set(const GlassNetwork& net, const IndexSet& a,
                                     double degeneracy_warn = kDegeneracyWarn) {
    const int n = net.n();
    if (a.n() != n) throw std::invalid_argument("is_stable_set: dimension mismatch");
    if (net.is_embedded()) {
        if (a.is_empty() || !a.contains(net.clamped_unit()))
            throw std::invalid_argument(
                "is_stable_set: set must contain the clamped unit " +
                std::to_string(net.clamped_unit()) + " in embedded-input mode");
    }

    Vec wa = attractor_point(net, a);

    if (a.is_empty()) {
        // Fully inactive state: the attractor is the origin, on the corner of
        // the part. Deciding its stability needs more than the margin test,
        // so it is only reported as a candidate.
        return StableSetReport{a, Verdict::OriginCandidate, std::move(wa), 0.0, true};
    }

    const Signature s = signature(a);
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= n; ++i)
        margin = std::min(margin, s.sign(i) * wa[static_cast<std::size_t>(i - 1)]);

    const Verdict verdict = margin > 0.0 ? Verdict::Stable : Verdict::Unstable;
    return StableSetReport{a, verdict, std::move(wa), margin,
                           std::abs(margin) < degeneracy_warn};
}

inline void sort_reports(std::vector<StableSetReport>& reports) {
    std::stable_sort(reports.begin(), reports.end(),
                     [](const StableSetReport& a, const StableSetReport& b) {
                         if (a.set.size() != b.set.size()) return a.set.size() < b.set.size();
                         return a.set.bits() < b.set.bits();
                     });
}

/// Reports for every admissible subset: all 2^n in vanishing mode, the
/// 2^(n-1) containing the clamped unit otherwise. By default only Stable
/// and OriginCandidate entries are returned; `full` keeps everything.
/// Output is ordered by ascending set size, then ascending bitmask.
inline std::vector<StableSetReport> enumerate_stable_sets(const GlassNetwork& net,
                                                          bool full = false,
                                                          int cap = kDefaultEnumerationCap,
                                                          double degeneracy_warn = kDegeneracyWarn) {
    const int n = net.n();
    std::vector<StableSetReport> reports;
    if (net.is_embedded()) {
        const std::uint64_t clamped_bit = std::uint64_t{1} << (net.clamped_unit() - 1);
        if (n - 1 > cap)
            throw EnumerationLimitError("enumeration over n=" + std::to_string(n - 1) +
                                        " free units exceeds the cap of " + std::to_string(cap) +
                                        " (2^n subsets)");
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask)
            reports.push_back(is_stable_set(net, IndexSet(n, mask | clamped_bit), degeneracy_warn));
    } else {
        for (const IndexSet& a : all_subsets(n, cap))
            reports.push_back(is_stable_set(net, a, degeneracy_warn));
    }
    if (!full) {
        std::erase_if(reports, [](const StableSetReport& r) {
            return r.verdict == Verdict::Unstable;
        });
    }
    sort_reports(reports);
    return reports;
}

/// Number of stable states of the network.
inline int multistability_degree(const std::vector<StableSetReport>& reports) {
    return static_cast<int>(std::count_if(reports.begin(), reports.end(),
                                          [](const StableSetReport& r) { return r.stable(); }));
}

inline int multistability_degree(const GlassNetwork& net, int cap = kDefaultEnumerationCap) {
    return multistability_degree(enumerate_stable_sets(net, false, cap));
}

/// Stable sets of the output-activated model y' = -y + theta(W y), computed
/// from its own fixed-point condition theta(W p) = p rather than from the
/// margin test, so the two routes can be compared against each other.
inline std::vector<IndexSet> stable_sets_output_model(const GlassNetwork& net,
                                                      int cap = kDefaultEnumerationCap) {
    const int n = net.n();
    std::vector<IndexSet> out;
    auto contains_fixed_point = [&](const IndexSet& a) {
        if (a.is_empty()) return false;
        const Vec wa = attractor_vector(net.weights(), a);
        for (int i = 1; i <= n; ++i)
            if (theta(wa[static_cast<std::size_t>(i - 1)]) != (a.contains(i) ? 1 : 0))
                return false;
        return true;
    };
    if (net.is_embedded()) {
        const std::uint64_t clamped_bit = std::uint64_t{1} << (net.clamped_unit() - 1);
        if (n - 1 > cap)
            throw EnumerationLimitError("enumeration over n=" + std::to_string(n - 1) +
                                        " free units exceeds the cap of " + std::to_string(cap) +
                                        " (2^n subsets)");
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
            IndexSet a(n, mask | clamped_bit);
            if (contains_fixed_point(a)) out.push_back(a);
        }
    } else {
        for (const IndexSet& a : all_subsets(n, cap))
            if (contains_fixed_point(a)) out.push_back(a);
    }
    std::stable_sort(out.begin(), out.end(), [](const IndexSet& a, const IndexSet& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.bits() < b.bits();
    });
    return out;
}

}  // namespace glassnet
