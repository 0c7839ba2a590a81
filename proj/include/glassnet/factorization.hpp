#pragma once

// Constructive semipositive factorization of a weight matrix around one of
// its stable sets: W = S_a * Y * X^-1 with X nonnegative, Y positive and
// X^-1 seminonnegative on the code of the set. The construction is the
// rank-one-update family X = p 1^T + eps*I, Y = y 1^T + eps*(S_a W) with
// y the margin vector, which reproduces W exactly since (S_a W) X = Y.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "glassnet/core.hpp"
#include "glassnet/network.hpp"
#include "glassnet/stability.hpp"

namespace glassnet {

inline constexpr double kEpsilonFloor = 1e-12;
inline constexpr double kReconstructionTol = 1e-9;
inline constexpr double kConditionWarn = 1e12;

struct Factorization {
    Matrix x;            // nonnegative, invertible
    Matrix y;            // entrywise positive
    double epsilon = 0.0;
    IndexSet target_set;
    double condition_estimate = 0.0;  // one-norm condition of X
    bool ill_conditioned = false;
};

struct VerifyResult {
    bool ok = true;
    std::vector<std::string> violations;

    explicit operator bool() const { return ok; }

    void fail(std::string what) {
        ok = false;
        violations.push_back(std::move(what));
    }
};

namespace detail {

/// Rank-one construction x*1^T + eps*I for a square block, or y*1^T + eps*A
/// for the numerator; shared by the full and the blockwise factorizations.
inline Matrix rank_one_plus(const Vec& v, int cols, double eps, const Matrix* a) {
    const int rows = static_cast<int>(v.size());
    Matrix m(rows, cols);
    for (int i = 1; i <= rows; ++i)
        for (int j = 1; j <= cols; ++j) {
            double e = v[static_cast<std::size_t>(i - 1)];
            if (a != nullptr)
                e += eps * (*a)(i, j);
            else if (i == j)
                e += eps;
            m(i, j) = e;
        }
    return m;
}

inline bool entrywise_positive(const Matrix& m) {
    for (int i = 1; i <= m.rows(); ++i)
        for (int j = 1; j <= m.cols(); ++j)
            if (m(i, j) <= 0.0) return false;
    return true;
}

inline bool entrywise_negative(const Matrix& m) {
    for (int i = 1; i <= m.rows(); ++i)
        for (int j = 1; j <= m.cols(); ++j)
            if (m(i, j) >= 0.0) return false;
    return true;
}

inline Matrix signed_weights(const GlassNetwork& net, const Signature& s) {
    const int n = net.n();
    Matrix m(n, n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) m(i, j) = s.sign(i) * net.weights()(i, j);
    return m;
}

}  // namespace detail

/// Builds the factorization for a stable set, halving epsilon from the
/// supplied value until Y is entrywise positive.
inline Factorization factorize(const GlassNetwork& net, const IndexSet& a, double epsilon = 0.5) {
    if (epsilon <= 0.0) throw std::invalid_argument("factorize: epsilon must be positive");
    const StableSetReport rep = is_stable_set(net, a);
    if (!rep.stable())
        throw NotStableError("factorize: " + a.to_string() + " is not a stable set");

    const int n = net.n();
    const Signature s = signature(a);
    const Matrix sw = detail::signed_weights(net, s);

    // y = S_a * W * p_a is the margin vector, positive by stability.
    Vec y(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i)
        y[static_cast<std::size_t>(i - 1)] =
            s.sign(i) * rep.attractor[static_cast<std::size_t>(i - 1)];

    Vec p(static_cast<std::size_t>(n), 0.0);
    for (int i = 1; i <= n; ++i)
        if (a.contains(i)) p[static_cast<std::size_t>(i - 1)] = 1.0;

    double eps = epsilon;
    Matrix ymat = detail::rank_one_plus(y, n, eps, &sw);
    while (!detail::entrywise_positive(ymat)) {
        eps /= 2.0;
        if (eps < kEpsilonFloor)
            throw EpsilonUnderflowError("factorize: epsilon underflow below 1e-12");
        ymat = detail::rank_one_plus(y, n, eps, &sw);
    }
    Matrix xmat = detail::rank_one_plus(p, n, eps, nullptr);

    Factorization f{std::move(xmat), std::move(ymat), eps, a};
    const Matrix xinv = f.x.inverse();
    f.condition_estimate = f.x.one_norm() * xinv.one_norm();
    f.ill_conditioned = f.condition_estimate > kConditionWarn;
    return f;
}

/// One block of the decomposed factorization.
struct BlockFactor {
    Matrix x;  // square, over the columns of the set
    Matrix y;  // positive for the principal block, negative for the complement rows
};

struct BlockFactorization {
    BlockFactor principal;                    // W[a] = Y_a * X_a^-1
    std::optional<BlockFactor> complement;    // W[a^c, a] = Y_c * X_c^-1; absent when a = [n]
    double epsilon = 0.0;
    IndexSet target_set;
};

/// Blockwise form: the principal submatrix over the stable set factors with
/// positive X and Y, the complement rows with positive X and negative Y,
/// both with semipositivity vector 1.
inline BlockFactorization factorize_blocks(const GlassNetwork& net, const IndexSet& a,
                                           double epsilon = 0.5) {
    if (epsilon <= 0.0) throw std::invalid_argument("factorize_blocks: epsilon must be positive");
    const StableSetReport rep = is_stable_set(net, a);
    if (!rep.stable())
        throw NotStableError("factorize_blocks: " + a.to_string() + " is not a stable set");

    const std::vector<int> cols = a.members();
    const std::vector<int> comp = a.complement().members();
    const int k = static_cast<int>(cols.size());

    auto submatrix = [&](const std::vector<int>& row_units) {
        Matrix m(static_cast<int>(row_units.size()), k);
        for (std::size_t i = 0; i < row_units.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j)
                m(static_cast<int>(i) + 1, static_cast<int>(j) + 1) =
                    net.weights()(row_units[i], cols[j]);
        return m;
    };

    auto row_sums = [&](const Matrix& m) {
        Vec v(static_cast<std::size_t>(m.rows()), 0.0);
        for (int i = 1; i <= m.rows(); ++i)
            for (int j = 1; j <= m.cols(); ++j) v[static_cast<std::size_t>(i - 1)] += m(i, j);
        return v;
    };

    const Matrix wa = submatrix(cols);
    const Vec ones(static_cast<std::size_t>(k), 1.0);
    const Vec ya = row_sums(wa);  // positive: these are the in-set margins

    double eps = epsilon;
    Matrix y_principal = detail::rank_one_plus(ya, k, eps, &wa);
    Matrix y_comp;
    Matrix wc;
    if (!comp.empty()) {
        wc = submatrix(comp);
        const Vec yc = row_sums(wc);  // negative: out-of-set margins
        y_comp = detail::rank_one_plus(yc, k, eps, &wc);
        while (!detail::entrywise_positive(y_principal) || !detail::entrywise_negative(y_comp)) {
            eps /= 2.0;
            if (eps < kEpsilonFloor)
                throw EpsilonUnderflowError("factorize_blocks: epsilon underflow below 1e-12");
            y_principal = detail::rank_one_plus(ya, k, eps, &wa);
            y_comp = detail::rank_one_plus(yc, k, eps, &wc);
        }
    } else {
        while (!detail::entrywise_positive(y_principal)) {
            eps /= 2.0;
            if (eps < kEpsilonFloor)
                throw EpsilonUnderflowError("factorize_blocks: epsilon underflow below 1e-12");
            y_principal = detail::rank_one_plus(ya, k, eps, &wa);
        }
    }
    const Matrix x_block = detail::rank_one_plus(ones, k, eps, nullptr);

    BlockFactorization bf{BlockFactor{x_block, std::move(y_principal)}, std::nullopt, eps, a};
    if (!comp.empty()) bf.complement = BlockFactor{x_block, std::move(y_comp)};
    return bf;
}

/// Checks every invariant of a factorization against the network it claims
/// to reproduce. Returns the full list of violations rather than stopping
/// at the first.
inline VerifyResult verify_factorization(const Factorization& f, const GlassNetwork& net) {
    VerifyResult res;
    const int n = net.n();
    if (f.x.rows() != n || f.x.cols() != n || f.y.rows() != n || f.y.cols() != n ||
        f.target_set.n() != n) {
        res.fail("dimension mismatch");
        return res;
    }

    for (int i = 1; i <= n && res.ok; ++i)
        for (int j = 1; j <= n; ++j)
            if (f.x(i, j) < 0.0) {
                res.fail("X not nonnegative");
                break;
            }
    if (!detail::entrywise_positive(f.y)) res.fail("Y not positive");

    Matrix xinv;
    try {
        xinv = f.x.inverse();
    } catch (const Error&) {
        res.fail("X singular");
        return res;
    }

    Vec p(static_cast<std::size_t>(n), 0.0);
    for (int i = 1; i <= n; ++i)
        if (f.target_set.contains(i)) p[static_cast<std::size_t>(i - 1)] = 1.0;

    const Vec v = xinv * p;
    double vmax = 0.0, vmin = 0.0;
    for (double c : v) {
        vmax = std::max(vmax, c);
        vmin = std::min(vmin, c);
    }
    if (vmin < -kReconstructionTol || vmax <= 0.0) res.fail("X_inv_p not seminonnegative");

    const Signature s = signature(f.target_set);
    Matrix recon = f.y * xinv;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) recon(i, j) *= s.sign(i);
    if (recon.max_abs_diff(net.weights().matrix()) > kReconstructionTol)
        res.fail("reconstruction tolerance");

    const Vec check = recon * p;  // = W * p_a when the reconstruction holds
    for (int i = 1; i <= n; ++i)
        if (s.sign(i) * check[static_cast<std::size_t>(i - 1)] <= 0.0) {
            res.fail("semipositivity direction not positive");
            break;
        }
    return res;
}

/// Largest elementwise gap between S_a * Y * X^-1 and the weight matrix.
inline double reconstruction_residual(const Factorization& f, const GlassNetwork& net) {
    const Matrix xinv = f.x.inverse();
    const Signature s = signature(f.target_set);
    Matrix recon = f.y * xinv;
    for (int i = 1; i <= recon.rows(); ++i)
        for (int j = 1; j <= recon.cols(); ++j) recon(i, j) *= s.sign(i);
    return recon.max_abs_diff(net.weights().matrix());
}

}  // namespace glassnet
