#pragma once

// Qualitative (sign-level) analysis of the weight matrix: which wiring
// diagrams allow or force the stability of a set or a family of sets,
// lower bounds on excitatory/inhibitory connection counts, and exact
// counts of the row signatures a stable family leaves available.
//
// All counting is done in 128-bit integer arithmetic; the closed forms are
// integer-valued and floating point would corrupt equality tests against
// the enumeration oracle.

#include <string>
#include <vector>

#include "glassnet/core.hpp"

namespace glassnet {

// ---------------------------------------------------------------------------
// Sign patterns
// ---------------------------------------------------------------------------

/// n x n array over {-1,0,+1}: the unique S with W = W+ o S (Hadamard
/// product) for some positive W+.
class SignPattern {
public:
    explicit SignPattern(int n)
        : n_(n), s_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0) {
        if (n < 1) throw std::invalid_argument("SignPattern: dimension must be positive");
    }

    static SignPattern from_rows(const std::vector<std::vector<int>>& rows) {
        const int n = static_cast<int>(rows.size());
        SignPattern p(n);
        for (int i = 1; i <= n; ++i) {
            if (static_cast<int>(rows[static_cast<std::size_t>(i - 1)].size()) != n)
                throw std::invalid_argument("SignPattern: matrix must be square");
            for (int j = 1; j <= n; ++j)
                p.set(i, j, rows[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]);
        }
        return p;
    }

    int n() const { return n_; }

    int operator()(int i, int j) const { return s_[index(i, j)]; }

    void set(int i, int j, int v) {
        if (v < -1 || v > 1)
            throw std::invalid_argument("SignPattern: entries must be -1, 0 or +1");
        s_[index(i, j)] = v;
    }

    friend bool operator==(const SignPattern& a, const SignPattern& b) {
        return a.n_ == b.n_ && a.s_ == b.s_;
    }

    std::vector<std::vector<int>> to_rows() const {
        std::vector<std::vector<int>> rows(static_cast<std::size_t>(n_),
                                           std::vector<int>(static_cast<std::size_t>(n_)));
        for (int i = 1; i <= n_; ++i)
            for (int j = 1; j <= n_; ++j)
                rows[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] =
                    (*this)(i, j);
        return rows;
    }

private:
    std::size_t index(int i, int j) const {
        if (i < 1 || i > n_ || j < 1 || j > n_)
            throw std::out_of_range("SignPattern: index outside matrix");
        return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n_) +
               static_cast<std::size_t>(j - 1);
    }

    int n_;
    std::vector<int> s_;
};

inline int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

/// Elementwise sign of the weight matrix.
inline SignPattern sign_pattern(const WeightMatrix& w) {
    SignPattern p(w.n());
    for (int i = 1; i <= w.n(); ++i)
        for (int j = 1; j <= w.n(); ++j) p.set(i, j, sign_of(w(i, j)));
    return p;
}

// ---------------------------------------------------------------------------
// Families of stable sets
// ---------------------------------------------------------------------------

enum class FamilyKind { Single, Disjoint, Nested };
enum class SignatureMode { Unconstrained, VanishingInput, NonvanishingInput };

inline std::string to_string(FamilyKind k) {
    switch (k) {
        case FamilyKind::Single: return "single";
        case FamilyKind::Disjoint: return "disjoint";
        case FamilyKind::Nested: return "nested";
    }
    return "?";
}

inline std::string to_string(SignatureMode m) {
    switch (m) {
        case SignatureMode::Unconstrained: return "unconstrained";
        case SignatureMode::VanishingInput: return "vanishing";
        case SignatureMode::NonvanishingInput: return "nonvanishing";
    }
    return "?";
}

/// Ordered family of index sets, either mutually disjoint or strictly
/// nested. In nonvanishing-input queries every member must contain the
/// clamped unit (the last one), and "disjoint" then means the members
/// pairwise intersect in exactly that unit.
struct StableFamily {
    FamilyKind kind = FamilyKind::Single;
    std::vector<IndexSet> sets;

    static StableFamily single(IndexSet a) {
        StableFamily f{FamilyKind::Single, {std::move(a)}};
        f.check_members();
        return f;
    }

    static StableFamily disjoint(std::vector<IndexSet> members) {
        StableFamily f{FamilyKind::Disjoint, std::move(members)};
        f.check_members();
        return f;
    }

    static StableFamily nested(std::vector<IndexSet> members) {
        StableFamily f{FamilyKind::Nested, std::move(members)};
        f.check_members();
        for (std::size_t t = 1; t < f.sets.size(); ++t)
            if (!f.sets[t - 1].proper_subset_of(f.sets[t]))
                throw FamilyShapeError("nested family must be strictly increasing: " +
                                       f.sets[t - 1].to_string() + " is not a proper subset of " +
                                       f.sets[t].to_string());
        return f;
    }

    int n() const { return sets.front().n(); }
    int count() const { return static_cast<int>(sets.size()); }

    std::vector<int> sizes() const {
        std::vector<int> k;
        k.reserve(sets.size());
        for (const IndexSet& a : sets) k.push_back(a.size());
        return k;
    }

    /// Full shape check for the given query mode.
    void validate(SignatureMode mode) const {
        check_members();
        const int dim = n();
        if (mode == SignatureMode::NonvanishingInput) {
            for (const IndexSet& a : sets)
                if (!a.contains(dim))
                    throw FamilyShapeError(
                        "nonvanishing-input family members must contain the clamped unit " +
                        std::to_string(dim) + ": " + a.to_string());
        }
        switch (kind) {
            case FamilyKind::Single:
                if (sets.size() != 1)
                    throw FamilyShapeError("single family must have exactly one set");
                break;
            case FamilyKind::Disjoint:
                for (std::size_t i = 0; i < sets.size(); ++i)
                    for (std::size_t j = i + 1; j < sets.size(); ++j) {
                        const IndexSet inter = sets[i].intersection(sets[j]);
                        const bool ok = mode == SignatureMode::NonvanishingInput
                                            ? inter == IndexSet::of(dim, {dim})
                                            : inter.is_empty();
                        if (!ok)
                            throw FamilyShapeError("disjoint family members overlap: " +
                                                   sets[i].to_string() + " and " +
                                                   sets[j].to_string());
                    }
                break;
            case FamilyKind::Nested:
                for (std::size_t t = 1; t < sets.size(); ++t)
                    if (!sets[t - 1].proper_subset_of(sets[t]))
                        throw FamilyShapeError("nested family must be strictly increasing");
                break;
        }
    }

private:
    void check_members() const {
        if (sets.empty()) throw FamilyShapeError("family must have at least one set");
        const int dim = sets.front().n();
        for (const IndexSet& a : sets) {
            if (a.n() != dim) throw FamilyShapeError("family members must share one dimension");
            if (a.is_empty()) throw FamilyShapeError("family members must be nonempty");
        }
    }
};

// ---------------------------------------------------------------------------
// Necessary and sufficient sign patterns
// ---------------------------------------------------------------------------

/// Necessary condition for `a` to be stable for some matrix with pattern
/// `s`: every row i must hold some entry of sign s_a^i in the a-columns.
inline bool allows_stable(const SignPattern& s, const IndexSet& a) {
    if (a.n() != s.n()) throw std::invalid_argument("allows_stable: dimension mismatch");
    if (a.is_empty()) throw std::invalid_argument("allows_stable: set must be nonempty");
    const Signature sa = signature(a);
    for (int i = 1; i <= s.n(); ++i) {
        bool found = false;
        for (int j : a.members())
            if (s(i, j) == sa.sign(i)) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

/// Necessary condition for a whole family. Disjoint members constrain
/// disjoint column blocks, so the conditions combine independently. For a
/// nested chain the first set carries the full signed condition and each
/// further set only adds, on the rows it newly activates, the demand for a
/// positive entry among its columns.
inline bool allows_family(const SignPattern& s, const StableFamily& fam) {
    fam.validate(SignatureMode::Unconstrained);
    if (fam.n() != s.n()) throw std::invalid_argument("allows_family: dimension mismatch");
    switch (fam.kind) {
        case FamilyKind::Single:
            return allows_stable(s, fam.sets.front());
        case FamilyKind::Disjoint:
            for (const IndexSet& a : fam.sets)
                if (!allows_stable(s, a)) return false;
            return true;
        case FamilyKind::Nested: {
            if (!allows_stable(s, fam.sets.front())) return false;
            for (std::size_t t = 1; t < fam.sets.size(); ++t) {
                const IndexSet fresh = fam.sets[t].difference(fam.sets[t - 1]);
                for (int i : fresh.members()) {
                    bool found = false;
                    for (int j : fam.sets[t].members())
                        if (s(i, j) == 1) {
                            found = true;
                            break;
                        }
                    if (!found) return false;
                }
            }
            return true;
        }
    }
    return false;
}

/// Sufficient condition: `a` is stable for every positive W+ sharing the
/// pattern, which holds exactly when the signed and projected pattern
/// S_a * s * P_a is row positive (no negative entries, a positive one in
/// every row).
inline bool is_sign_stable(const SignPattern& s, const IndexSet& a) {
    if (a.n() != s.n()) throw std::invalid_argument("is_sign_stable: dimension mismatch");
    if (a.is_empty()) throw std::invalid_argument("is_sign_stable: set must be nonempty");
    const Signature sa = signature(a);
    for (int i = 1; i <= s.n(); ++i) {
        bool positive = false;
        for (int j : a.members()) {
            const int e = sa.sign(i) * s(i, j);
            if (e < 0) return false;
            if (e > 0) positive = true;
        }
        if (!positive) return false;
    }
    return true;
}

/// A sign-stable set is automatically minimally stable: the pattern then
/// leaves no proper subset any allowed stabilization.
inline bool requires_minimal_stability(const SignPattern& s, const IndexSet& a) {
    return is_sign_stable(s, a);
}

// ---------------------------------------------------------------------------
// Connection-count bounds
// ---------------------------------------------------------------------------

struct EIBounds {
    long long min_excitatory = 0;
    long long min_inhibitory = 0;

    friend bool operator==(const EIBounds& a, const EIBounds& b) {
        return a.min_excitatory == b.min_excitatory && a.min_inhibitory == b.min_inhibitory;
    }
};

/// Lower bounds on the number of excitatory/inhibitory connections a
/// network must have for the family to be stable.
inline EIBounds ei_bounds(const StableFamily& fam, int n) {
    fam.validate(SignatureMode::Unconstrained);
    if (fam.n() != n) throw std::invalid_argument("ei_bounds: dimension mismatch");
    const std::vector<int> k = fam.sizes();
    switch (fam.kind) {
        case FamilyKind::Single:
            return EIBounds{k.front(), n - k.front()};
        case FamilyKind::Disjoint: {
            long long total = 0;
            for (int v : k) total += v;
            return EIBounds{total, static_cast<long long>(n) * fam.count() - total};
        }
        case FamilyKind::Nested:
            return EIBounds{k.back(), n - k.front()};
    }
    return {};
}

// ---------------------------------------------------------------------------
// Allowed row-signature counts
// ---------------------------------------------------------------------------

namespace detail {

inline Int128 pow2(int e) { return ipow(2, e); }
inline Int128 pow3(int e) { return ipow(3, e); }

/// Index t (0-based into sets) with row in sets[t] \ sets[t-1], or -1.
/// Rows activated only by the first set, or by none, return -1.
inline int nested_fresh_index(const StableFamily& fam, int row) {
    for (std::size_t t = 1; t < fam.sets.size(); ++t)
        if (fam.sets[t].contains(row) && !fam.sets[t - 1].contains(row))
            return static_cast<int>(t);
    return -1;
}

}  // namespace detail

/// Closed-form count of the row signatures a stable family leaves allowed,
/// evaluated exactly as the matching published formula prints it. The row
/// argument only matters for nested families, whose counts differ between
/// rows. The nonvanishing-input nested variant is reproduced verbatim even
/// though enumeration contradicts it on some families (it can even go
/// negative when the innermost set is the clamped unit alone); use
/// brute_force_row_signatures to cross-check and surface such cases.
inline Int128 count_allowed_row_signatures(const StableFamily& fam, int n, int row,
                                           SignatureMode mode) {
    fam.validate(mode);
    if (fam.n() != n)
        throw std::invalid_argument("count_allowed_row_signatures: dimension mismatch");
    const int max_row = mode == SignatureMode::NonvanishingInput ? n - 1 : n;
    if (row < 1 || row > max_row)
        throw std::invalid_argument("count_allowed_row_signatures: row outside 1.." +
                                    std::to_string(max_row));
    using detail::pow2;
    using detail::pow3;
    const std::vector<int> k = fam.sizes();

    switch (mode) {
        case SignatureMode::Unconstrained:
            switch (fam.kind) {
                case FamilyKind::Single:
                    return pow3(n) - pow2(k[0]) * pow3(n - k[0]);
                case FamilyKind::Disjoint: {
                    int total = 0;
                    Int128 prod = 1;
                    for (int kt : k) {
                        total += kt;
                        prod *= pow3(kt) - pow2(kt);
                    }
                    return pow3(n - total) * prod;
                }
                case FamilyKind::Nested: {
                    Int128 c = pow3(n) - pow2(k[0]) * pow3(n - k[0]);
                    const int t = detail::nested_fresh_index(fam, row);
                    if (t >= 0)
                        c -= pow2(k[static_cast<std::size_t>(t)]) *
                                 pow3(n - k[static_cast<std::size_t>(t)]) -
                             pow2(k[static_cast<std::size_t>(t)] - k[0]) *
                                 pow3(n - k[static_cast<std::size_t>(t)]);
                    return c;
                }
            }
            break;
        case SignatureMode::VanishingInput:
            switch (fam.kind) {
                case FamilyKind::Single:
                    return pow2(n) - pow2(n - k[0]);
                case FamilyKind::Disjoint: {
                    int total = 0;
                    Int128 prod = 1;
                    for (int kt : k) {
                        total += kt;
                        prod *= pow2(kt) - 1;
                    }
                    return pow2(n - total) * prod;
                }
                case FamilyKind::Nested: {
                    Int128 c = pow2(n) - pow2(n - k[0]);
                    const int t = detail::nested_fresh_index(fam, row);
                    if (t >= 0) c -= pow2(n - k[static_cast<std::size_t>(t)]);
                    return c;
                }
            }
            break;
        case SignatureMode::NonvanishingInput:
            switch (fam.kind) {
                case FamilyKind::Single:
                    return pow3(n - 1) - pow2(k[0] - 1) * pow3(n - k[0]);
                case FamilyKind::Disjoint: {
                    int total = 0;
                    Int128 prod = 1;
                    for (int kt : k) {
                        total += kt - 1;
                        prod *= pow3(kt - 1) - pow2(kt - 1);
                    }
                    return pow3((n - 1) - total) * prod;
                }
                case FamilyKind::Nested: {
                    Int128 c = pow3(n - 1) - pow2(k[0] - 1) * pow3(n - k[0]);
                    const int t = detail::nested_fresh_index(fam, row);
                    if (t >= 0)
                        c -= pow2(k[static_cast<std::size_t>(t)] - 1) *
                                 pow3(n - k[static_cast<std::size_t>(t)]) -
                             pow3(n - k[static_cast<std::size_t>(t)]);
                    return c;
                }
            }
            break;
    }
    throw std::logic_error("count_allowed_row_signatures: unreachable");
}

/// Enumeration oracle for the closed forms. Walks the full signature space
/// of the row ({-1,0,+1}^n, or {-1,+1}^n with vanishing input, or
/// {-1,0,+1}^(n-1) over the free columns with nonvanishing input) and drops
/// every signature forbidden by some family member, i.e. one with no entry
/// of sign s_a^row among that member's columns.
inline Int128 brute_force_row_signatures(const StableFamily& fam, int n, int row,
                                         SignatureMode mode) {
    fam.validate(mode);
    if (fam.n() != n)
        throw std::invalid_argument("brute_force_row_signatures: dimension mismatch");
    const int max_row = mode == SignatureMode::NonvanishingInput ? n - 1 : n;
    if (row < 1 || row > max_row)
        throw std::invalid_argument("brute_force_row_signatures: row outside 1.." +
                                    std::to_string(max_row));
    const int dim = mode == SignatureMode::NonvanishingInput ? n - 1 : n;
    if (dim > 12 || dim < 1)
        throw EnumerationLimitError("brute_force_row_signatures: 3^n enumeration capped at n=12");

    struct Member {
        std::uint32_t columns;
        bool wants_positive;
    };
    std::vector<Member> members;
    members.reserve(fam.sets.size());
    for (const IndexSet& a : fam.sets) {
        std::uint32_t cols = 0;
        for (int j : a.members())
            if (j <= dim) cols |= std::uint32_t{1} << (j - 1);
        members.push_back(Member{cols, a.contains(row)});
    }

    Int128 count = 0;
    if (mode == SignatureMode::VanishingInput) {
        // Strictly nonzero signatures: bit set = +1, clear = -1.
        for (std::uint32_t m = 0; m < (std::uint32_t{1} << dim); ++m) {
            const std::uint32_t plus = m;
            const std::uint32_t minus = ~m & ((std::uint32_t{1} << dim) - 1);
            bool ok = true;
            for (const Member& mem : members)
                if (((mem.wants_positive ? plus : minus) & mem.columns) == 0) {
                    ok = false;
                    break;
                }
            if (ok) ++count;
        }
        return count;
    }

    std::vector<int> digit(static_cast<std::size_t>(dim), 0);  // 0 -> -1, 1 -> 0, 2 -> +1
    const Int128 total = detail::pow3(dim);
    for (Int128 step = 0; step < total; ++step) {
        std::uint32_t plus = 0, minus = 0;
        for (int j = 0; j < dim; ++j) {
            if (digit[static_cast<std::size_t>(j)] == 2) plus |= std::uint32_t{1} << j;
            if (digit[static_cast<std::size_t>(j)] == 0) minus |= std::uint32_t{1} << j;
        }
        bool ok = true;
        for (const Member& mem : members)
            if (((mem.wants_positive ? plus : minus) & mem.columns) == 0) {
                ok = false;
                break;
            }
        if (ok) ++count;
        for (int j = 0; j < dim; ++j) {
            if (++digit[static_cast<std::size_t>(j)] < 3) break;
            digit[static_cast<std::size_t>(j)] = 0;
        }
    }
    return count;
}

}  // namespace glassnet
