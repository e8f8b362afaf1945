#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace tdag {

/// Ordered vertex pair. For undirected edges the convention is from < to.
struct Edge {
    int from = 0;
    int to = 0;
    auto operator<=>(const Edge&) const = default;
};

/// (first, middle, last) with first < last. Used for v-structures and forks.
struct Triple {
    int first = 0;
    int middle = 0;
    int last = 0;
    auto operator<=>(const Triple&) const = default;
};

using VertexSet = std::vector<int>;

class Pdag;

/// Directed acyclic graph over vertices 0..n-1. Acyclicity is checked on construction.
class Dag {
public:
    Dag() = default;
    explicit Dag(int vertex_count);
    Dag(int vertex_count, std::span<const Edge> edges);

    int vertex_count() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edge_count_; }

    bool has_edge(int from, int to) const { return arc_[index(from, to)] != 0; }
    bool adjacent(int u, int v) const { return has_edge(u, v) || has_edge(v, u); }
    const std::vector<int>& parents(int v) const { return parents_[v]; }
    const std::vector<int>& children(int v) const { return children_[v]; }

    /// All edges, sorted.
    std::vector<Edge> edges() const;
    /// Kahn's algorithm, smallest ready vertex first.
    std::vector<int> topological_order() const;

    bool operator==(const Dag& other) const { return n_ == other.n_ && arc_ == other.arc_; }

private:
    std::size_t index(int u, int v) const { return static_cast<std::size_t>(u) * n_ + v; }

    int n_ = 0;
    std::size_t edge_count_ = 0;
    std::vector<std::uint8_t> arc_;
    std::vector<std::vector<int>> parents_;
    std::vector<std::vector<int>> children_;
};

/// Total map vertex -> type in [0, k). Types may be unused.
class TypeMap {
public:
    TypeMap() = default;
    TypeMap(std::vector<int> assignment, int type_count);

    /// One type per vertex (k = d).
    static TypeMap distinct(int vertex_count);
    /// Everything in type 0 (k = 1).
    static TypeMap single(int vertex_count);

    int operator()(int v) const { return assignment_[v]; }
    int type_count() const noexcept { return k_; }
    int vertex_count() const noexcept { return static_cast<int>(assignment_.size()); }
    const std::vector<int>& assignment() const noexcept { return assignment_; }

    bool operator==(const TypeMap&) const = default;

private:
    std::vector<int> assignment_;
    int k_ = 0;
};

struct TypedDag {
    TypedDag() = default;
    TypedDag(Dag dag, TypeMap types);

    Dag dag;
    TypeMap types;
};

/// Partially directed graph stored as an arc matrix: a directed edge u->v has
/// only the (u,v) arc, an undirected edge u-v has both. The union of graphs is
/// the union of arcs, which is exactly the essential-graph union convention.
class Pdag {
public:
    Pdag() = default;
    explicit Pdag(int vertex_count);
    Pdag(int vertex_count, std::span<const Edge> directed, std::span<const Edge> undirected);
    explicit Pdag(const Dag& dag);
    /// Row-major n*n arc matrix.
    static Pdag from_arcs(int vertex_count, std::vector<std::uint8_t> arcs);

    int vertex_count() const noexcept { return n_; }

    bool has_arc(int u, int v) const { return arc_[index(u, v)] != 0; }
    bool is_directed(int from, int to) const { return has_arc(from, to) && !has_arc(to, from); }
    bool is_undirected(int u, int v) const { return has_arc(u, v) && has_arc(v, u); }
    bool adjacent(int u, int v) const { return has_arc(u, v) || has_arc(v, u); }

    void add_directed(int from, int to);
    void add_undirected(int u, int v);
    /// Makes an existing adjacency u->v.
    void orient(int from, int to);
    void remove(int u, int v);
    /// Arc-wise union; a pair directed both ways becomes undirected.
    void merge(const Pdag& other);

    std::vector<Edge> directed_edges() const;
    /// Undirected edges with from < to.
    std::vector<Edge> undirected_edges() const;
    std::vector<int> neighbors(int v) const;
    std::size_t adjacency_count() const;
    bool fully_directed() const;
    /// Converts a fully directed, acyclic graph. Throws std::invalid_argument otherwise.
    Dag to_dag() const;

    std::span<const std::uint8_t> arcs() const noexcept { return arc_; }

    bool operator==(const Pdag& other) const { return n_ == other.n_ && arc_ == other.arc_; }

private:
    std::size_t index(int u, int v) const { return static_cast<std::size_t>(u) * n_ + v; }
    void check_vertex(int v) const;

    int n_ = 0;
    std::vector<std::uint8_t> arc_;
};

/// E(t_i, t_j) for every ordered pair of distinct types with at least one edge.
using TEdgeIndex = std::map<std::pair<int, int>, std::vector<Edge>>;

bool d_separated(const Dag& dag, int i, int j, std::span<const int> z);

std::vector<Triple> v_structures(const Dag& dag);
/// Directed colliders i->k<-j with i, j non-adjacent.
std::vector<Triple> v_structures(const Pdag& g);

/// Skeleton triples a1 - b - a2 with a1, a2 non-adjacent and T(a1) = T(a2) != T(b).
std::vector<Triple> two_type_forks(const Pdag& g, const TypeMap& types);
std::vector<Triple> two_type_forks(const Dag& dag, const TypeMap& types);

TEdgeIndex t_edges(const TypedDag& tdag);
bool is_type_consistent(const TypedDag& tdag);
/// Pdag version: no t-edge has edges directed both ways, and no t-edge mixes
/// directed with undirected edges.
bool is_type_consistent(const Pdag& g, const TypeMap& types);

bool markov_equivalent(const Dag& a, const Dag& b);

Pdag skeleton_of(const Dag& dag);
Pdag skeleton_of(const Pdag& g);
bool same_skeleton(const Pdag& a, const Pdag& b);

/// Every arc of `finer` is an arc of `coarser` and both share a skeleton, i.e.
/// `finer` is at least as oriented as `coarser` and agrees with it.
bool refines(const Pdag& finer, const Pdag& coarser);

}  // namespace tdag
