#include <catch2/catch_amalgamated.hpp>

#include "glassnet/factorization.hpp"
#include "glassnet/random.hpp"

using namespace glassnet;

namespace {

const GlassNetwork kClamped =
    embed_input(WeightMatrix::from_rows({{2, 0}, {0, 2}}), {-1, -1});

Matrix multiply_by_inverse(const Matrix& y, const Matrix& x) { return y * x.inverse(); }

}  // namespace

TEST_CASE("factorization of the clamped network's full set", "[factorization]") {
    const IndexSet full = IndexSet::of(3, {1, 2, 3});
    const Factorization f = factorize(kClamped, full, 0.5);
    CHECK(f.epsilon == 0.5);

    const Matrix x_expected = Matrix::from_rows({{1.5, 1, 1}, {1, 1.5, 1}, {1, 1, 1.5}});
    const Matrix y_expected = Matrix::from_rows({{2, 1, 0.5}, {1, 2, 0.5}, {1, 1, 1.5}});
    CHECK(f.x.max_abs_diff(x_expected) == 0.0);
    CHECK(f.y.max_abs_diff(y_expected) == 0.0);

    const Vec v = f.x.inverse() * Vec{1, 1, 1};
    for (double c : v) CHECK(c == Catch::Approx(2.0 / 7.0).margin(1e-13));

    CHECK(multiply_by_inverse(f.y, f.x).max_abs_diff(kClamped.weights().matrix()) < 1e-12);
    CHECK(verify_factorization(f, kClamped).ok);
    CHECK(reconstruction_residual(f, kClamped) < 1e-12);
}

TEST_CASE("scalar factorization", "[factorization]") {
    const GlassNetwork net = GlassNetwork::vanishing(WeightMatrix::from_rows({{2}}));
    const Factorization f = factorize(net, IndexSet::of(1, {1}), 1.0);
    CHECK(f.x(1, 1) == 2.0);
    CHECK(f.y(1, 1) == 4.0);
    CHECK(multiply_by_inverse(f.y, f.x)(1, 1) == Catch::Approx(2.0).margin(1e-14));
}

TEST_CASE("epsilon shrinks until the numerator is positive", "[factorization]") {
    // For the set {1,3} the signed matrix has a -2 entry against a margin of
    // 1, so eps = 1/2 leaves a zero in Y and must be halved once.
    const Factorization f = factorize(kClamped, IndexSet::of(3, {1, 3}), 0.5);
    CHECK(f.epsilon == 0.25);
    CHECK(verify_factorization(f, kClamped).ok);
}

TEST_CASE("factorization requires a stable set and positive epsilon", "[factorization]") {
    const GlassNetwork net = GlassNetwork::vanishing(WeightMatrix::from_rows({{1, 4}, {2, 3}}));
    CHECK_THROWS_AS(factorize(net, IndexSet::of(2, {1}), 0.5), NotStableError);
    CHECK_THROWS_AS(factorize(net, IndexSet::of(2, {1, 2}), 0.0), std::invalid_argument);
}

TEST_CASE("verification rejects broken factorizations", "[factorization]") {
    const IndexSet full = IndexSet::of(3, {1, 2, 3});
    const Factorization good = factorize(kClamped, full, 0.5);

    Factorization negated = good;
    negated.y(2, 3) = -negated.y(2, 3);
    const VerifyResult vr = verify_factorization(negated, kClamped);
    CHECK_FALSE(vr.ok);
    CHECK(std::find(vr.violations.begin(), vr.violations.end(), "Y not positive") !=
          vr.violations.end());

    Factorization perturbed = good;
    perturbed.y(1, 1) += 1e-6;
    const VerifyResult vr2 = verify_factorization(perturbed, kClamped);
    CHECK_FALSE(vr2.ok);
    CHECK(std::find(vr2.violations.begin(), vr2.violations.end(), "reconstruction tolerance") !=
          vr2.violations.end());
}

TEST_CASE("eigenstructure of the rank-one construction", "[factorization]") {
    Rng rng(71);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = rng.uniform_int(2, 6);
        const GlassNetwork net = random_network(rng, n);
        for (const StableSetReport& r : enumerate_stable_sets(net)) {
            if (!r.stable()) continue;
            const Factorization f = factorize(net, r.set, 0.5);
            const int k = r.set.size();

            Vec p(static_cast<std::size_t>(n), 0.0);
            for (int i : r.set.members()) p[static_cast<std::size_t>(i - 1)] = 1.0;
            const Vec xp = f.x * p;
            for (int i = 0; i < n; ++i)
                CHECK(xp[static_cast<std::size_t>(i)] ==
                      Catch::Approx((k + f.epsilon) * p[static_cast<std::size_t>(i)])
                          .margin(1e-9));

            Vec z(static_cast<std::size_t>(n), 0.0);
            z[0] = 1.0;
            z[static_cast<std::size_t>(n - 1)] -= 1.0;  // orthogonal to the all-ones vector
            if (n > 1) {
                const Vec xz = f.x * z;
                for (int i = 0; i < n; ++i)
                    CHECK(xz[static_cast<std::size_t>(i)] ==
                          Catch::Approx(f.epsilon * z[static_cast<std::size_t>(i)]).margin(1e-9));
            }
            break;
        }
    }
}

TEST_CASE("factorize succeeds exactly on stable sets", "[factorization]") {
    Rng rng(73);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.uniform_int(2, 5);
        const GlassNetwork net = random_network(rng, n);
        for (const IndexSet& a : all_subsets(n)) {
            if (a.is_empty()) continue;
            const bool stable = is_stable_set(net, a).stable();
            if (stable) {
                const Factorization f = factorize(net, a);
                CHECK(verify_factorization(f, net).ok);
            } else {
                CHECK_THROWS_AS(factorize(net, a), NotStableError);
            }
        }
    }
}

TEST_CASE("blockwise factorization of the full set omits the complement", "[factorization]") {
    const GlassNetwork net = GlassNetwork::vanishing(WeightMatrix::from_rows({{1, 4}, {2, 3}}));
    const BlockFactorization bf = factorize_blocks(net, IndexSet::of(2, {1, 2}), 0.5);
    CHECK_FALSE(bf.complement.has_value());
    const Matrix recon = multiply_by_inverse(bf.principal.y, bf.principal.x);
    CHECK(recon.max_abs_diff(net.weights().matrix()) < 1e-12);
}

TEST_CASE("blockwise factorization splits rows of a proper stable set", "[factorization]") {
    const BlockFactorization bf = factorize_blocks(kClamped, IndexSet::of(3, {1, 3}), 0.5);
    REQUIRE(bf.complement.has_value());

    // Principal block: rows and columns {1,3}.
    const Matrix wa = Matrix::from_rows({{2, -1}, {0, 1}});
    CHECK(multiply_by_inverse(bf.principal.y, bf.principal.x).max_abs_diff(wa) < 1e-12);
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) {
            CHECK(bf.principal.x(i, j) > 0.0);
            CHECK(bf.principal.y(i, j) > 0.0);
        }

    // Complement block: row {2} against columns {1,3}, negative numerator.
    const Matrix wc = Matrix::from_rows({{0, -1}});
    CHECK(multiply_by_inverse(bf.complement->y, bf.complement->x).max_abs_diff(wc) < 1e-12);
    for (int j = 1; j <= 2; ++j) CHECK(bf.complement->y(1, j) < 0.0);

    // Semipositivity vector 1 for both inverses.
    const Vec ones{1.0, 1.0};
    for (double c : bf.principal.x.inverse() * ones) CHECK(c >= -1e-12);
}

TEST_CASE("blockwise factorization on random stable sets", "[factorization]") {
    Rng rng(79);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = rng.uniform_int(2, 6);
        const GlassNetwork net = random_network(rng, n);
        for (const StableSetReport& r : enumerate_stable_sets(net)) {
            if (!r.stable()) continue;
            const BlockFactorization bf = factorize_blocks(net, r.set);
            const std::vector<int> cols = r.set.members();
            const std::vector<int> comp = r.set.complement().members();
            const Matrix recon = multiply_by_inverse(bf.principal.y, bf.principal.x);
            for (std::size_t i = 0; i < cols.size(); ++i)
                for (std::size_t j = 0; j < cols.size(); ++j)
                    CHECK(recon(static_cast<int>(i) + 1, static_cast<int>(j) + 1) ==
                          Catch::Approx(net.weights()(cols[i], cols[j])).margin(1e-9));
            if (!comp.empty()) {
                REQUIRE(bf.complement.has_value());
                const Matrix reconc = multiply_by_inverse(bf.complement->y, bf.complement->x);
                for (std::size_t i = 0; i < comp.size(); ++i)
                    for (std::size_t j = 0; j < cols.size(); ++j)
                        CHECK(reconc(static_cast<int>(i) + 1, static_cast<int>(j) + 1) ==
                              Catch::Approx(net.weights()(comp[i], cols[j])).margin(1e-9));
            }
        }
    }
}
