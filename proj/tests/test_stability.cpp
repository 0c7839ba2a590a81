#include <catch2/catch_amalgamated.hpp>

#include "glassnet/random.hpp"
#include "glassnet/stability.hpp"

using namespace glassnet;

namespace {

const GlassNetwork kTwoUnit = GlassNetwork::vanishing(WeightMatrix::from_rows({{1, 4}, {2, 3}}));
const GlassNetwork kClamped =
    embed_input(WeightMatrix::from_rows({{2, 0}, {0, 2}}), {-1, -1});

// Independent route: split the stable-set condition into the two block
// inequalities on the principal submatrix and the complement rows.
bool stable_by_blocks(const GlassNetwork& net, const IndexSet& a) {
    if (a.is_empty()) return false;
    for (int i = 1; i <= net.n(); ++i) {
        const double s = block_row_sum(net.weights(), i, a);
        if (a.contains(i) ? !(s > 0.0) : !(s < 0.0)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("the all-excitatory two-unit network has one stable state", "[stability]") {
    const StableSetReport full = is_stable_set(kTwoUnit, IndexSet::of(2, {1, 2}));
    CHECK(full.verdict == Verdict::Stable);
    CHECK(full.attractor == Vec{5, 5});
    CHECK(full.margin == 5.0);

    const StableSetReport single = is_stable_set(kTwoUnit, IndexSet::of(2, {1}));
    CHECK(single.verdict == Verdict::Unstable);
    CHECK(single.attractor == Vec{1, 2});

    const auto reports = enumerate_stable_sets(kTwoUnit);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].verdict == Verdict::OriginCandidate);
    CHECK(reports[0].set.is_empty());
    CHECK(reports[1].set == IndexSet::of(2, {1, 2}));
    CHECK(multistability_degree(reports) == 1);
}

TEST_CASE("the clamped two-unit network has four stable states", "[stability]") {
    const StableSetReport r = is_stable_set(kClamped, IndexSet::of(3, {2, 3}));
    CHECK(r.verdict == Verdict::Stable);
    CHECK(r.attractor == Vec{-1, 1, 1});
    CHECK(r.margin == 1.0);

    const auto reports = enumerate_stable_sets(kClamped);
    REQUIRE(reports.size() == 4);
    CHECK(reports[0].set == IndexSet::of(3, {3}));
    CHECK(reports[1].set == IndexSet::of(3, {1, 3}));
    CHECK(reports[2].set == IndexSet::of(3, {2, 3}));
    CHECK(reports[3].set == IndexSet::of(3, {1, 2, 3}));
    CHECK(reports[0].attractor == Vec{-1, -1, 1});
    CHECK(reports[1].attractor == Vec{1, -1, 1});
    CHECK(reports[2].attractor == Vec{-1, 1, 1});
    CHECK(reports[3].attractor == Vec{1, 1, 1});
    for (const auto& rep : reports) CHECK(rep.verdict == Verdict::Stable);
}

TEST_CASE("pure decay network keeps only the origin candidate", "[stability]") {
    const GlassNetwork net = GlassNetwork::vanishing(WeightMatrix::from_rows({{-1, 0}, {0, -1}}));
    const auto reports = enumerate_stable_sets(net);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].verdict == Verdict::OriginCandidate);
    CHECK(multistability_degree(reports) == 0);
}

TEST_CASE("embedded mode rejects sets without the clamped unit", "[stability]") {
    CHECK_THROWS_AS(is_stable_set(kClamped, IndexSet::of(3, {1, 2})), std::invalid_argument);
    CHECK_THROWS_AS(is_stable_set(kClamped, IndexSet::empty(3)), std::invalid_argument);
}

TEST_CASE("full enumeration keeps unstable entries and orders by size then mask", "[stability]") {
    const auto reports = enumerate_stable_sets(kTwoUnit, /*full=*/true);
    REQUIRE(reports.size() == 4);
    CHECK(reports[0].set.is_empty());
    CHECK(reports[1].set == IndexSet::of(2, {1}));
    CHECK(reports[2].set == IndexSet::of(2, {2}));
    CHECK(reports[3].set == IndexSet::of(2, {1, 2}));
}

TEST_CASE("verdicts agree with the two-block decomposition", "[stability]") {
    Rng rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = rng.uniform_int(2, 6);
        const GlassNetwork net = random_network(rng, n);
        for (const IndexSet& a : all_subsets(n)) {
            if (a.is_empty()) continue;
            CHECK(is_stable_set(net, a).stable() == stable_by_blocks(net, a));
        }
    }
}

TEST_CASE("stable attractors satisfy the fixed-point code condition", "[stability]") {
    Rng rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        const GlassNetwork net = random_network(rng, rng.uniform_int(2, 6));
        for (const StableSetReport& r : enumerate_stable_sets(net, true)) {
            if (r.set.is_empty()) continue;
            bool code_match = true;
            for (int i = 1; i <= net.n(); ++i)
                if (theta(r.attractor[static_cast<std::size_t>(i - 1)]) !=
                    (r.set.contains(i) ? 1 : 0))
                    code_match = false;
            // theta(0) = 0 can make the code of a boundary attractor match
            // its part even though the strict margin test rejects it.
            if (r.stable())
                CHECK(code_match);
            else if (!code_match || r.margin != 0.0)
                CHECK_FALSE(code_match);
        }
    }
}

TEST_CASE("margins scale linearly under positive rescaling", "[stability]") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.uniform_int(2, 5);
        const GlassNetwork net = random_network(rng, n);
        const double c = rng.uniform(0.1, 10.0);
        WeightMatrix scaled(n);
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) scaled(i, j) = c * net.weights()(i, j);
        const GlassNetwork snet = GlassNetwork::unchecked(scaled);
        const IndexSet a = random_subset(rng, n);
        const StableSetReport r1 = is_stable_set(net, a);
        const StableSetReport r2 = is_stable_set(snet, a);
        CHECK(r1.verdict == r2.verdict);
        CHECK(r2.margin == Catch::Approx(c * r1.margin).epsilon(1e-12));
    }
}

TEST_CASE("output-activated model finds the same stable sets", "[stability]") {
    auto stable_sets = [](const GlassNetwork& net) {
        std::vector<IndexSet> s;
        for (const StableSetReport& r : enumerate_stable_sets(net))
            if (r.stable()) s.push_back(r.set);
        return s;
    };

    CHECK(stable_sets_output_model(kTwoUnit) == stable_sets(kTwoUnit));
    CHECK(stable_sets_output_model(kClamped) == stable_sets(kClamped));

    Rng rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const GlassNetwork net = random_network(rng, 4);
        CHECK(stable_sets_output_model(net) == stable_sets(net));
    }
}

TEST_CASE("near-degenerate margins are flagged", "[stability]") {
    const WeightMatrix w = WeightMatrix::from_rows({{1.0, 0.0}, {-1e-13, -1.0}});
    const GlassNetwork net = GlassNetwork::unchecked(w);
    const StableSetReport r = is_stable_set(net, IndexSet::of(2, {1}));
    CHECK(r.stable());
    CHECK(r.near_degenerate);

    // Exact-zero component outside the set: strictly not stable, flagged.
    const WeightMatrix w0 = WeightMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
    const StableSetReport r0 =
        is_stable_set(GlassNetwork::unchecked(w0), IndexSet::of(2, {1}));
    CHECK(r0.verdict == Verdict::Unstable);
    CHECK(r0.margin == 0.0);
    CHECK(r0.near_degenerate);
}
