#pragma once

#include <cstddef>
#include <vector>

#include "tdag/ci_tests.hpp"
#include "tdag/equivalence.hpp"
#include "tdag/graph.hpp"

namespace tdag {

struct Diagnostics {
    std::size_t ci_tests = 0;
    std::size_t forks_examined = 0;
    std::size_t t_edges_oriented_by_evidence = 0;
    /// v-structure orientations that overwrote an earlier opposite orientation.
    std::size_t v_structure_conflicts = 0;
};

struct DiscoveryResult {
    Pdag graph;
    /// Only pc_with_tpropagation sets this: t-propagation failed and the PC output was kept.
    bool used_fallback = false;
    Diagnostics diagnostics;
};

struct PcOptions {
    /// Conditioning sets come from an adjacency snapshot taken at the start of
    /// each level, which makes the skeleton independent of edge order.
    bool stable = true;
};

struct SkeletonResult {
    Pdag skeleton;
    SepsetTable sepsets;
    std::size_t ci_tests = 0;
};

SkeletonResult pc_skeleton(const CiTester& tester, PcOptions options = {});

/// Triples (i, k, j) with i - k - j in the skeleton, i and j non-adjacent,
/// sorted. Stored as Triple{i, k, j} with i < j.
std::vector<Triple> disconnected_forks(const Pdag& skeleton);

/// Orients i -> k <- j for every disconnected fork with k outside S_ij. A later
/// fork may reverse an edge set by an earlier one; each such reversal is
/// counted in `conflicts`. Throws std::invalid_argument if a needed sepset is missing.
Pdag orient_v_structures(const Pdag& skeleton, const SepsetTable& sepsets, std::size_t* conflicts = nullptr);

/// Fork orientation of TPC-naive: first orientation of each edge and t-edge wins.
Pdag orient_forks_naive(const Pdag& skeleton, const SepsetTable& sepsets, const TypeMap& types,
                        Diagnostics* diagnostics = nullptr);
/// Fork orientation of TPC-majority: t-edges are oriented one at a time by
/// accumulated evidence, then single-type v-structures.
Pdag orient_forks_majority(const Pdag& skeleton, const SepsetTable& sepsets, const TypeMap& types,
                           Diagnostics* diagnostics = nullptr);

DiscoveryResult pc(const CiTester& tester, PcOptions options = {});
DiscoveryResult pc_with_tpropagation(const CiTester& tester, const TypeMap& types, EnumerationBudget budget = {},
                                     PcOptions options = {});
DiscoveryResult tpc_naive(const CiTester& tester, const TypeMap& types, EnumerationBudget budget = {},
                          PcOptions options = {});
DiscoveryResult tpc_majority(const CiTester& tester, const TypeMap& types, EnumerationBudget budget = {},
                             PcOptions options = {});

}  // namespace tdag
