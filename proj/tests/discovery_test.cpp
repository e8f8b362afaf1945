#include <gtest/gtest.h>

#include "tdag/discovery.hpp"
#include "tdag/errors.hpp"
#include "tdag/random_tdag.hpp"
#include "tdag/simulate.hpp"
#include "test_support.hpp"

namespace tdag {
namespace {

Pdag undirected(int n, std::vector<Edge> edges) {
    std::vector<Edge> none;
    return Pdag(n, none, edges);
}

TEST(PcSkeleton, ChainAndEdgeless) {
    std::vector<Edge> e{{0, 1}, {1, 2}};
    auto res = pc_skeleton(OracleTester(Dag(3, e)));
    EXPECT_EQ(res.skeleton, undirected(3, {{0, 1}, {1, 2}}));
    ASSERT_NE(res.sepsets.get(0, 2), nullptr);
    EXPECT_EQ(*res.sepsets.get(0, 2), (std::vector<int>{1}));

    auto empty = pc_skeleton(OracleTester(Dag(4)));
    EXPECT_EQ(empty.skeleton, Pdag(4));
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            ASSERT_NE(empty.sepsets.get(i, j), nullptr);
            EXPECT_TRUE(empty.sepsets.get(i, j)->empty());
        }
}

TEST(PcSkeleton, ExactUnderOracleStableOrNot) {
    std::mt19937_64 rng(101);
    for (int rep = 0; rep < 100; ++rep) {
        Dag d = testing::random_dag(7, 0.4, rng);
        EXPECT_EQ(pc_skeleton(OracleTester(d)).skeleton, skeleton_of(d));
        EXPECT_EQ(pc_skeleton(OracleTester(d), PcOptions{false}).skeleton, skeleton_of(d));
    }
}

TEST(OrientVStructures, Examples) {
    SepsetTable chain_sep;
    chain_sep.set(0, 2, {1});
    const Pdag chain = undirected(3, {{0, 1}, {1, 2}});
    EXPECT_EQ(orient_v_structures(chain, chain_sep), chain);

    SepsetTable coll_sep;
    coll_sep.set(0, 1, {});
    std::vector<Edge> dir{{0, 2}, {1, 2}};
    std::vector<Edge> none;
    EXPECT_EQ(orient_v_structures(undirected(3, {{0, 2}, {1, 2}}), coll_sep), Pdag(3, dir, none));

    EXPECT_THROW(orient_v_structures(chain, SepsetTable{}), std::invalid_argument);
}

TEST(OrientVStructures, ConflictsAreCounted) {
    // 0 - 1 - 2 - 3 path; both forks claim a collider, so 1 - 2 is written twice.
    SepsetTable sep;
    sep.set(0, 2, {});
    sep.set(1, 3, {});
    sep.set(0, 3, {});
    std::size_t conflicts = 0;
    Pdag g = orient_v_structures(undirected(4, {{0, 1}, {1, 2}, {2, 3}}), sep, &conflicts);
    EXPECT_EQ(conflicts, 1u);
    EXPECT_TRUE(g.is_directed(1, 2));  // the later fork (1, 2, 3) wins
}

TEST(OrientVStructures, MatchesTruthUnderOracle) {
    std::mt19937_64 rng(103);
    for (int rep = 0; rep < 100; ++rep) {
        Dag d = testing::random_dag(7, 0.4, rng);
        auto skel = pc_skeleton(OracleTester(d));
        EXPECT_EQ(v_structures(orient_v_structures(skel.skeleton, skel.sepsets)), v_structures(d));
    }
}

TEST(Pc, EqualsEssentialGraphUnderOracle) {
    std::vector<Edge> e{{0, 2}, {1, 2}};
    EXPECT_EQ(pc(OracleTester(Dag(3, e))).graph, essential_graph(Dag(3, e)));
    std::mt19937_64 rng(107);
    for (int rep = 0; rep < 100; ++rep) {
        Dag d = testing::random_dag(7, 0.35, rng);
        auto res = pc(OracleTester(d));
        EXPECT_EQ(res.graph, essential_graph(d));
        EXPECT_FALSE(res.used_fallback);
        EXPECT_GT(res.diagnostics.ci_tests, 0u);
    }
}

TEST(Pc, RecoversChainFromData) {
    std::vector<Edge> e{{0, 1}, {1, 2}};
    const Dag chain(3, e);
    int recovered = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        Philox rng(s, 41);
        const Scm scm = make_scm(chain, Mechanism::linear, rng);
        auto res = pc(FisherZTester(sample_scm(scm, 10000, rng)));
        recovered += skeleton_of(res.graph) == skeleton_of(chain);
    }
    EXPECT_GE(recovered, 18);
}

TEST(PcWithTPropagation, FallsBackOnInconsistentOrientation) {
    // A type-inconsistent truth: a -> b via 0 -> 2, b -> a via 3 -> 1, both
    // pinned by v-structures with c-typed parents.
    std::vector<Edge> e{{0, 2}, {4, 2}, {3, 1}, {5, 1}};
    const Dag truth(6, e);
    const TypeMap types({0, 0, 1, 1, 2, 2}, 3);
    OracleTester tester(truth);
    auto res = pc_with_tpropagation(tester, types);
    EXPECT_TRUE(res.used_fallback);
    EXPECT_EQ(res.graph, pc(tester).graph);
}

TEST(PcWithTPropagation, DistinctTypesGivePcOutput) {
    std::mt19937_64 rng(109);
    for (int rep = 0; rep < 50; ++rep) {
        Dag d = testing::random_dag(7, 0.35, rng);
        OracleTester tester(d);
        EXPECT_EQ(pc_with_tpropagation(tester, TypeMap::distinct(7)).graph, pc(tester).graph);
    }
}

TEST(TypedPc, OracleConsistencyOnRandomTdags) {
    std::mt19937_64 rng(113);
    for (int rep = 0; rep < 150; ++rep) {
        auto t = testing::random_consistent_tdag(8, 2 + rep % 3, 0.3, rep % 2 ? 0.2 : 0.0, rng);
        const Pdag truth = t_essential_graph(t);
        OracleTester tester(t.dag);
        const auto naive = tpc_naive(tester, t.types);
        const auto majority = tpc_majority(tester, t.types);
        const auto tprop = pc_with_tpropagation(tester, t.types);
        ASSERT_EQ(naive.graph, truth);
        ASSERT_EQ(majority.graph, truth);
        ASSERT_EQ(tprop.graph, truth);
        EXPECT_FALSE(tprop.used_fallback);
        EXPECT_EQ(skeleton_of(naive.graph), skeleton_of(t.dag));
    }
}

TEST(TpcNaive, TwoTypeForkOrientedInForkPhase) {
    auto t = testing::two_type_fork_tdag();
    auto skel = pc_skeleton(OracleTester(t.dag));
    Pdag phase2 = orient_forks_naive(skel.skeleton, skel.sepsets, t.types);
    EXPECT_TRUE(phase2.is_directed(2, 0));
    EXPECT_TRUE(phase2.is_directed(2, 1));
}

TEST(TpcNaive, NothingToOrient) {
    std::vector<Edge> e{{0, 1}, {1, 2}, {2, 3}};
    OracleTester tester(Dag(4, e));
    EXPECT_EQ(tpc_naive(tester, TypeMap::single(4)).graph, undirected(4, {{0, 1}, {1, 2}, {2, 3}}));
}

// One spurious v-structure votes a -> b once; two two-type forks vote b -> a
// with weight 2 each.
struct MajorityFixture {
    TypeMap types{{0, 1, 1, 0, 1, 0, 0, 1, 0}, 2};
    Pdag skeleton = undirected(9, {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {6, 7}, {7, 8}});
    SepsetTable sepsets;
    MajorityFixture() {
        sepsets.set(0, 2, {});
        sepsets.set(3, 5, {4});
        sepsets.set(6, 8, {7});
    }
};

TEST(TpcMajority, EvidenceOutvotesSpuriousVStructure) {
    MajorityFixture f;
    Diagnostics diag;
    Pdag g = orient_forks_majority(f.skeleton, f.sepsets, f.types, &diag);
    for (Edge e : std::vector<Edge>{{1, 0}, {4, 3}, {4, 5}, {7, 6}, {7, 8}}) EXPECT_TRUE(g.is_directed(e.from, e.to));
    EXPECT_TRUE(g.is_undirected(1, 2));
    EXPECT_EQ(diag.t_edges_oriented_by_evidence, 1u);

    // Naive takes the first fork in sorted order, the spurious one.
    Pdag naive = orient_forks_naive(f.skeleton, f.sepsets, f.types);
    EXPECT_TRUE(naive.is_directed(0, 1));
    EXPECT_TRUE(naive.is_directed(3, 4));
}

TEST(TpcMajority, NoEvidenceOnlySingleTypeVStructures) {
    const TypeMap types({0, 0, 0, 1}, 2);
    SepsetTable sep;
    sep.set(0, 1, {});
    const Pdag skel = undirected(4, {{0, 2}, {1, 2}, {2, 3}});
    sep.set(0, 3, {2});
    sep.set(1, 3, {2});
    Diagnostics diag;
    Pdag g = orient_forks_majority(skel, sep, types, &diag);
    EXPECT_EQ(diag.t_edges_oriented_by_evidence, 0u);
    EXPECT_TRUE(g.is_directed(0, 2));
    EXPECT_TRUE(g.is_directed(1, 2));
    EXPECT_TRUE(g.is_undirected(2, 3));
}

TEST(Discovery, DeterministicAcrossRuns) {
    Philox rng(7);
    GrowthConfig cfg{12, TypeDistribution::uniform(3), sample_interaction_matrix(3, 0.4, 0.2, rng), 5, 0};
    const TypedDag t = grow_random_tdag(cfg);
    Philox data_rng(8);
    const Dataset data = sample_scm(make_scm(t.dag, Mechanism::linear, data_rng), 2000, data_rng);
    const FisherZTester tester(data);
    EXPECT_EQ(tpc_majority(tester, t.types).graph, tpc_majority(tester, t.types).graph);
    EXPECT_EQ(tpc_naive(tester, t.types).graph, tpc_naive(tester, t.types).graph);
    EXPECT_EQ(skeleton_of(tpc_majority(tester, t.types).graph), pc_skeleton(tester).skeleton);
}

}  // namespace
}  // namespace tdag
