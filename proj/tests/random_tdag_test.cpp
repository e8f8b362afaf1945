#include <gtest/gtest.h>

#include <cmath>

#include "tdag/equivalence.hpp"
#include "tdag/random_tdag.hpp"
#include "tdag/rng.hpp"

namespace tdag {
namespace {

TEST(Philox, KnownAnswerVectors) {
    using Block = std::array<std::uint32_t, 4>;
    EXPECT_EQ(Philox::generate({0, 0, 0, 0}, {0, 0}), (Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(Philox::generate({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(Philox::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, StreamsAreReproducibleAndDistinct) {
    Philox a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    for (int i = 0; i < 100; ++i) {
        auto x = a();
        EXPECT_EQ(x, b());
        (void)c();
        (void)d();
    }
    EXPECT_NE(Philox(42, 7)(), Philox(42, 8)());
    EXPECT_NE(Philox(42, 7)(), Philox(43, 7)());
    EXPECT_EQ(Philox(5, 1).substream(3).stream(), Philox(5, 1).substream(3).stream());
    EXPECT_NE(Philox(5, 1).substream(3).stream(), Philox(5, 1).substream(4).stream());
}

TEST(Philox, UniformAndNormalMoments) {
    Philox rng(1);
    const int n = 200000;
    double su = 0, sn = 0, sn2 = 0;
    for (int i = 0; i < n; ++i) {
        su += rng.uniform();
        const double z = rng.normal();
        sn += z;
        sn2 += z * z;
    }
    EXPECT_NEAR(su / n, 0.5, 0.005);
    EXPECT_NEAR(sn / n, 0.0, 0.01);
    EXPECT_NEAR(sn2 / n, 1.0, 0.02);
}

TEST(InteractionMatrix, RejectsTwoWayPairs) {
    Eigen::MatrixXd p(2, 2);
    p << 0, 0.2, 0.1, 0;
    EXPECT_THROW(InteractionMatrix{p}, std::invalid_argument);
    p << 0, 1.5, 0, 0;
    EXPECT_THROW(InteractionMatrix{p}, std::invalid_argument);
}

TEST(SampleInteractionMatrix, Examples) {
    int forward = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        Philox rng(s);
        auto a = sample_interaction_matrix(2, 0.2, 0.0, rng);
        EXPECT_EQ(a(0, 0), 0.0);
        EXPECT_EQ(a(1, 1), 0.0);
        EXPECT_TRUE((a(0, 1) == 0.2 && a(1, 0) == 0.0) || (a(0, 1) == 0.0 && a(1, 0) == 0.2));
        forward += a(0, 1) > 0;
    }
    EXPECT_GT(forward, 30);
    EXPECT_LT(forward, 70);
    Philox rng(3);
    auto zero = sample_interaction_matrix(5, 0.0, 0.3, rng);
    EXPECT_EQ((zero.matrix() - Eigen::MatrixXd::Identity(5, 5) * 0.3).cwiseAbs().maxCoeff(), 0.0);
}

TEST(GrowRandomTdag, DegenerateConfigs) {
    Philox rng(0);
    GrowthConfig cfg{12, TypeDistribution::uniform(3), sample_interaction_matrix(3, 0.0, 0.0, rng), 9, 0};
    EXPECT_EQ(grow_random_tdag(cfg).dag.edge_count(), 0u);
    cfg = GrowthConfig{6, TypeDistribution::uniform(1), InteractionMatrix(Eigen::MatrixXd::Ones(1, 1)), 9, 0};
    const auto t = grow_random_tdag(cfg);
    EXPECT_EQ(t.dag.edge_count(), 15u);
    for (int u = 0; u < 6; ++u)
        for (int v = u + 1; v < 6; ++v) EXPECT_TRUE(t.dag.has_edge(u, v));
}

TEST(GrowRandomTdag, ConsistentAndDeterministicOverManyConfigs) {
    Philox meta(2024);
    for (int rep = 0; rep < 10000; ++rep) {
        const int k = 1 + static_cast<int>(meta.below(6));
        const int n = static_cast<int>(meta.below(25));
        Philox rng(meta.next_u64());
        GrowthConfig cfg{n, TypeDistribution::uniform(k),
                         sample_interaction_matrix(k, meta.uniform(), meta.uniform(), rng), meta.next_u64(), meta.below(4)};
        const TypedDag a = grow_random_tdag(cfg);
        ASSERT_TRUE(is_type_consistent(a));
        // Index order is topological.
        for (const Edge& e : a.dag.edges()) ASSERT_LT(e.from, e.to);
        const TypedDag b = grow_random_tdag(cfg);
        ASSERT_EQ(a.dag, b.dag);
        ASSERT_EQ(a.types, b.types);
    }
}

TEST(IdentificationBound, WorkedExample) {
    // r = -(1/3) ln 0.98, reference value from 30-digit arithmetic.
    const PairRate pair{0.1, 0.1, 0.2, 0.0};
    EXPECT_NEAR(convergence_rate(pair), 0.00673423577250648280, 1e-15);
    std::vector<PairRate> one{pair};
    EXPECT_DOUBLE_EQ(theorem1_bound(one, 100), 1.0);
    EXPECT_NEAR(theorem1_bound(one, 300), 0.530478223579012750, 1e-12);
    EXPECT_NEAR(theorem1_bound(one, 1000), 0.004757935556727338, 1e-14);
}

TEST(IdentificationBound, EdgeCasesAndMonotonicity) {
    std::vector<PairRate> none{{0.5, 0.5, 0.0, 0.0}};
    EXPECT_EQ(theorem1_bound(none, 50), 0.0);
    std::vector<PairRate> pairs{{0.3, 0.4, 0.6, 0.1}, {0.4, 0.3, 0.2, 0.0}};
    double prev = 2.0;
    for (int n = 3; n < 400; ++n) {
        const double b = theorem1_bound(pairs, n);
        EXPECT_LE(b, prev);
        prev = b;
    }
    EXPECT_THROW(theorem1_bound(pairs, 2), std::invalid_argument);
    std::vector<PairRate> bad{{0.0, 0.5, 0.2, 0.0}};
    EXPECT_THROW(theorem1_bound(bad, 10), std::invalid_argument);
    std::vector<PairRate> bad2{{0.5, 0.5, 1.2, 0.0}};
    EXPECT_THROW(theorem1_bound(bad2, 10), std::invalid_argument);
}

TEST(IdentificationBound, PairRatesFollowTheMatrix) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(3, 3);
    p(0, 1) = 0.2;
    p(2, 1) = 0.4;
    p(1, 1) = 0.3;
    auto rates = pair_rates(TypeDistribution::uniform(3), InteractionMatrix(p));
    ASSERT_EQ(rates.size(), 2u);
    EXPECT_DOUBLE_EQ(rates[0].p_ij, 0.2);
    EXPECT_DOUBLE_EQ(rates[0].p_jj, 0.3);
    EXPECT_DOUBLE_EQ(rates[1].p_ij, 0.4);
}

// Empirical P(U > 0) against the bound, where the bound is informative: two
// types, one dense t-edge. At k = 10 the bound is 1 for every n <= 100.
TEST(IdentificationBound, EmpiricalRateBelowBound) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2, 2);
    p(0, 1) = 0.9;
    const InteractionMatrix a(p);
    const TypeDistribution types = TypeDistribution::uniform(2);
    const auto rates = pair_rates(types, a);
    for (int n : {20, 50, 100}) {
        const int seeds = 500;
        int positive = 0;
        for (int s = 0; s < seeds; ++s) {
            const TypedDag t = grow_random_tdag({n, types, a, static_cast<std::uint64_t>(s), 11});
            if (unoriented_t_edges(t_propagation(essential_graph(t.dag), t.types), t.types) > 0) ++positive;
        }
        const double rate = static_cast<double>(positive) / seeds;
        const double se = std::sqrt(std::max(rate * (1 - rate), 1.0 / seeds) / seeds);
        const double bound = theorem1_bound(rates, n);
        EXPECT_LT(bound, 1.0);
        EXPECT_LE(rate, bound + 3 * se) << "n=" << n;
    }
}

TEST(UnorientedTEdges, CountsTypePairs) {
    TypeMap types({0, 0, 1, 2}, 3);
    std::vector<Edge> dir{{0, 3}};
    std::vector<Edge> und{{0, 2}, {1, 2}, {0, 1}};
    EXPECT_EQ(unoriented_t_edges(Pdag(4, dir, und), types), 1);
}

}  // namespace
}  // namespace tdag
