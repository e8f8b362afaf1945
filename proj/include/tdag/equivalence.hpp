#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tdag/graph.hpp"

namespace tdag {

/// Caps the number of class members an enumeration may visit. Exceeding it
/// throws BudgetExceeded. Search effort is capped at `search_factor` times the
/// member cap so that dead-end-heavy searches terminate too.
struct EnumerationBudget {
    std::size_t max_members = 1'000'000;
    std::size_t search_factor = 64;
};

/// Meek rules R1-R4 applied to a fixed point. Only orients undirected edges.
Pdag meek_closure(Pdag g);

/// CPDAG: v-structures oriented, then Meek closure.
Pdag essential_graph(const Dag& dag);

/// DAG extensions of a partially directed graph: every orientation of its
/// undirected edges that stays acyclic and creates no collider beyond the
/// directed ones already present. With `types`, inter-type edges are decided
/// per t-edge, so only type-consistent extensions are produced.
///
/// `visit` returns false to stop early. Returns the number of extensions visited.
std::size_t for_each_extension(const Pdag& g, const TypeMap* types, EnumerationBudget budget,
                               const std::function<bool(const Pdag&)>& visit);
std::size_t count_extensions(const Pdag& g, const TypeMap* types, EnumerationBudget budget = {});

/// Arc union of all extensions, computed by searching for one witness per
/// uncovered arc instead of visiting every member. nullopt when no extension exists.
std::optional<Pdag> extension_union(const Pdag& g, const TypeMap* types, EnumerationBudget budget = {});

std::vector<Dag> enumerate_mec(const Dag& dag, EnumerationBudget budget = {});
std::size_t mec_size(const Dag& dag, EnumerationBudget budget = {});

/// Consistent members of the MEC. Throws std::invalid_argument on an inconsistent input.
std::vector<TypedDag> enumerate_tmec(const TypedDag& tdag, EnumerationBudget budget = {});

/// Union of the t-MEC, obtained by filtering the enumerated MEC. This is the
/// reference construction; t_propagation is the fast route to the same graph.
Pdag t_essential_graph(const TypedDag& tdag, EnumerationBudget budget = {});

struct TPropagationOptions {
    /// Orient undirected two-type forks b -> a inside the closure loop.
    bool two_type_fork_rule = true;
    /// Run the final enumerate-and-union step. Without it the result is sound but incomplete.
    bool enumerate = true;
};

/// Type-consistency propagation interleaved with Meek closure, then the union
/// of all consistent DAG extensions.
///
/// Throws TypeInconsistency if the input already directs some t-edge both ways.
/// If the propagated graph admits no consistent extension (possible only on
/// inputs violating the equivalence hypotheses), the propagated graph is returned.
Pdag t_propagation(const Pdag& g, const TypeMap& types, EnumerationBudget budget = {},
                   TPropagationOptions options = {});

/// Number of undirected t-edges plus undirected intra-type edges; the t-MEC
/// has at most 2^this many members.
int tmec_upper_bound_log2(const Pdag& t_essential, const TypeMap& types);
/// 2^tmec_upper_bound_log2. Throws std::overflow_error past 2^63.
std::uint64_t tmec_upper_bound(const Pdag& t_essential, const TypeMap& types);

}  // namespace tdag
