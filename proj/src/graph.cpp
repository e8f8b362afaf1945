#include "tdag/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <string>

namespace tdag {

namespace {

void check_index(int v, int n) {
    if (v < 0 || v >= n) {
        throw std::invalid_argument("vertex index " + std::to_string(v) + " out of range [0, " +
                                    std::to_string(n) + ")");
    }
}

}  // namespace

Dag::Dag(int vertex_count) : Dag(vertex_count, std::span<const Edge>{}) {}

Dag::Dag(int vertex_count, std::span<const Edge> edges)
    : n_(vertex_count),
      arc_(static_cast<std::size_t>(vertex_count) * vertex_count, 0),
      parents_(vertex_count),
      children_(vertex_count) {
    if (vertex_count < 0) throw std::invalid_argument("negative vertex count");
    for (const Edge& e : edges) {
        check_index(e.from, n_);
        check_index(e.to, n_);
        if (e.from == e.to) throw std::invalid_argument("self-loop on vertex " + std::to_string(e.from));
        if (has_edge(e.to, e.from)) throw std::invalid_argument("edge given in both directions");
        if (has_edge(e.from, e.to)) continue;
        arc_[index(e.from, e.to)] = 1;
        parents_[e.to].push_back(e.from);
        children_[e.from].push_back(e.to);
        ++edge_count_;
    }
    for (auto& p : parents_) std::sort(p.begin(), p.end());
    for (auto& c : children_) std::sort(c.begin(), c.end());
    if (topological_order().size() != static_cast<std::size_t>(n_)) {
        throw std::invalid_argument("graph contains a directed cycle");
    }
}

std::vector<Edge> Dag::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (int u = 0; u < n_; ++u)
        for (int v : children_[u]) out.push_back({u, v});
    return out;
}

std::vector<int> Dag::topological_order() const {
    std::vector<int> indegree(n_);
    for (int v = 0; v < n_; ++v) indegree[v] = static_cast<int>(parents_[v].size());
    std::set<int> ready;
    for (int v = 0; v < n_; ++v)
        if (indegree[v] == 0) ready.insert(v);
    std::vector<int> order;
    order.reserve(n_);
    while (!ready.empty()) {
        int v = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(v);
        for (int c : children_[v])
            if (--indegree[c] == 0) ready.insert(c);
    }
    return order;
}

TypeMap::TypeMap(std::vector<int> assignment, int type_count)
    : assignment_(std::move(assignment)), k_(type_count) {
    if (k_ < 1 && !assignment_.empty()) throw std::invalid_argument("type count must be positive");
    for (int t : assignment_) {
        if (t < 0 || t >= k_) {
            throw std::invalid_argument("type index " + std::to_string(t) + " out of range [0, " +
                                        std::to_string(k_) + ")");
        }
    }
}

TypeMap TypeMap::distinct(int vertex_count) {
    std::vector<int> a(vertex_count);
    for (int v = 0; v < vertex_count; ++v) a[v] = v;
    return TypeMap(std::move(a), std::max(vertex_count, 1));
}

TypeMap TypeMap::single(int vertex_count) { return TypeMap(std::vector<int>(vertex_count, 0), 1); }

TypedDag::TypedDag(Dag d, TypeMap t) : dag(std::move(d)), types(std::move(t)) {
    if (dag.vertex_count() != types.vertex_count()) {
        throw std::invalid_argument("type map covers " + std::to_string(types.vertex_count()) +
                                    " vertices, graph has " + std::to_string(dag.vertex_count()));
    }
}

Pdag::Pdag(int vertex_count) : n_(vertex_count), arc_(static_cast<std::size_t>(vertex_count) * vertex_count, 0) {
    if (vertex_count < 0) throw std::invalid_argument("negative vertex count");
}

Pdag::Pdag(int vertex_count, std::span<const Edge> directed, std::span<const Edge> undirected) : Pdag(vertex_count) {
    for (const Edge& e : undirected) add_undirected(e.from, e.to);
    for (const Edge& e : directed) {
        if (is_undirected(e.from, e.to)) throw std::invalid_argument("pair listed as directed and undirected");
        if (is_directed(e.to, e.from)) {
            // Both orientations listed: union convention makes it undirected.
            add_undirected(e.from, e.to);
            continue;
        }
        add_directed(e.from, e.to);
    }
}

Pdag::Pdag(const Dag& dag) : Pdag(dag.vertex_count()) {
    for (const Edge& e : dag.edges()) arc_[index(e.from, e.to)] = 1;
}

Pdag Pdag::from_arcs(int vertex_count, std::vector<std::uint8_t> arcs) {
    Pdag g(vertex_count);
    if (arcs.size() != g.arc_.size()) throw std::invalid_argument("arc matrix has wrong size");
    for (int v = 0; v < vertex_count; ++v)
        if (arcs[g.index(v, v)]) throw std::invalid_argument("self-loop on vertex " + std::to_string(v));
    g.arc_ = std::move(arcs);
    return g;
}

void Pdag::check_vertex(int v) const { check_index(v, n_); }

void Pdag::add_directed(int from, int to) {
    check_vertex(from);
    check_vertex(to);
    if (from == to) throw std::invalid_argument("self-loop on vertex " + std::to_string(from));
    arc_[index(from, to)] = 1;
    arc_[index(to, from)] = 0;
}

void Pdag::add_undirected(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw std::invalid_argument("self-loop on vertex " + std::to_string(u));
    arc_[index(u, v)] = 1;
    arc_[index(v, u)] = 1;
}

void Pdag::orient(int from, int to) {
    if (!adjacent(from, to)) throw std::invalid_argument("cannot orient a missing edge");
    arc_[index(from, to)] = 1;
    arc_[index(to, from)] = 0;
}

void Pdag::remove(int u, int v) {
    arc_[index(u, v)] = 0;
    arc_[index(v, u)] = 0;
}

void Pdag::merge(const Pdag& other) {
    if (other.n_ != n_) throw std::invalid_argument("vertex count mismatch in union");
    for (std::size_t i = 0; i < arc_.size(); ++i) arc_[i] |= other.arc_[i];
}

std::vector<Edge> Pdag::directed_edges() const {
    std::vector<Edge> out;
    for (int u = 0; u < n_; ++u)
        for (int v = 0; v < n_; ++v)
            if (is_directed(u, v)) out.push_back({u, v});
    return out;
}

std::vector<Edge> Pdag::undirected_edges() const {
    std::vector<Edge> out;
    for (int u = 0; u < n_; ++u)
        for (int v = u + 1; v < n_; ++v)
            if (is_undirected(u, v)) out.push_back({u, v});
    return out;
}

std::vector<int> Pdag::neighbors(int v) const {
    std::vector<int> out;
    for (int u = 0; u < n_; ++u)
        if (u != v && adjacent(u, v)) out.push_back(u);
    return out;
}

std::size_t Pdag::adjacency_count() const {
    std::size_t count = 0;
    for (int u = 0; u < n_; ++u)
        for (int v = u + 1; v < n_; ++v)
            if (adjacent(u, v)) ++count;
    return count;
}

bool Pdag::fully_directed() const {
    for (int u = 0; u < n_; ++u)
        for (int v = u + 1; v < n_; ++v)
            if (is_undirected(u, v)) return false;
    return true;
}

Dag Pdag::to_dag() const {
    if (!fully_directed()) throw std::invalid_argument("graph has undirected edges");
    auto edges = directed_edges();
    return Dag(n_, edges);
}

bool d_separated(const Dag& dag, int i, int j, std::span<const int> z) {
    const int n = dag.vertex_count();
    check_index(i, n);
    check_index(j, n);
    if (i == j) throw std::invalid_argument("d-separation query needs distinct endpoints");
    std::vector<char> in_z(n, 0);
    for (int v : z) {
        check_index(v, n);
        if (v == i || v == j) throw std::invalid_argument("conditioning set contains an endpoint");
        in_z[v] = 1;
    }

    // Ancestors of Z, Z included.
    std::vector<char> anc(n, 0);
    std::vector<int> stack(z.begin(), z.end());
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (anc[v]) continue;
        anc[v] = 1;
        for (int p : dag.parents(v)) stack.push_back(p);
    }

    // Reachability over (vertex, direction): up = entered from a child, down = from a parent.
    enum : int { kUp = 0, kDown = 1 };
    std::vector<char> visited(2 * static_cast<std::size_t>(n), 0);
    std::deque<std::pair<int, int>> queue{{i, kUp}};
    while (!queue.empty()) {
        auto [v, dir] = queue.front();
        queue.pop_front();
        if (visited[2 * v + dir]) continue;
        visited[2 * v + dir] = 1;
        if (v == j && !in_z[v]) return false;
        if (dir == kUp) {
            if (in_z[v]) continue;
            for (int p : dag.parents(v)) queue.emplace_back(p, kUp);
            for (int c : dag.children(v)) queue.emplace_back(c, kDown);
        } else {
            if (!in_z[v])
                for (int c : dag.children(v)) queue.emplace_back(c, kDown);
            if (anc[v])
                for (int p : dag.parents(v)) queue.emplace_back(p, kUp);
        }
    }
    return true;
}

std::vector<Triple> v_structures(const Dag& dag) {
    std::vector<Triple> out;
    for (int k = 0; k < dag.vertex_count(); ++k) {
        const auto& pa = dag.parents(k);
        for (std::size_t a = 0; a < pa.size(); ++a)
            for (std::size_t b = a + 1; b < pa.size(); ++b)
                if (!dag.adjacent(pa[a], pa[b])) out.push_back({pa[a], k, pa[b]});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Triple> v_structures(const Pdag& g) {
    std::vector<Triple> out;
    const int n = g.vertex_count();
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            if (i == k || !g.is_directed(i, k)) continue;
            for (int j = i + 1; j < n; ++j)
                if (j != k && g.is_directed(j, k) && !g.adjacent(i, j)) out.push_back({i, k, j});
        }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Triple> two_type_forks(const Pdag& g, const TypeMap& types) {
    if (types.vertex_count() != g.vertex_count()) throw std::invalid_argument("type map size mismatch");
    std::vector<Triple> out;
    const int n = g.vertex_count();
    for (int b = 0; b < n; ++b) {
        auto nb = g.neighbors(b);
        for (std::size_t x = 0; x < nb.size(); ++x)
            for (std::size_t y = x + 1; y < nb.size(); ++y) {
                int a1 = nb[x], a2 = nb[y];
                if (types(a1) == types(a2) && types(a1) != types(b) && !g.adjacent(a1, a2))
                    out.push_back({a1, b, a2});
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Triple> two_type_forks(const Dag& dag, const TypeMap& types) {
    return two_type_forks(Pdag(dag), types);
}

TEdgeIndex t_edges(const TypedDag& tdag) {
    TEdgeIndex index;
    for (const Edge& e : tdag.dag.edges()) {
        int ti = tdag.types(e.from), tj = tdag.types(e.to);
        if (ti != tj) index[{ti, tj}].push_back(e);
    }
    return index;
}

bool is_type_consistent(const TypedDag& tdag) {
    auto index = t_edges(tdag);
    for (const auto& [pair, edges] : index)
        if (index.count({pair.second, pair.first})) return false;
    return true;
}

bool is_type_consistent(const Pdag& g, const TypeMap& types) {
    if (types.vertex_count() != g.vertex_count()) throw std::invalid_argument("type map size mismatch");
    const int k = types.type_count();
    // Per unordered type pair (lo, hi): bit 0 = lo->hi seen, bit 1 = hi->lo, bit 2 = undirected.
    std::vector<int> seen(static_cast<std::size_t>(k) * k, 0);
    const int n = g.vertex_count();
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (!g.adjacent(u, v)) continue;
            int tu = types(u), tv = types(v);
            if (tu == tv) continue;
            int lo = std::min(tu, tv), hi = std::max(tu, tv);
            int& s = seen[static_cast<std::size_t>(lo) * k + hi];
            if (g.is_undirected(u, v))
                s |= 4;
            else if (g.is_directed(u, v))
                s |= (tu == lo) ? 1 : 2;
            else
                s |= (tv == lo) ? 1 : 2;
        }
    for (int s : seen)
        if (s != 0 && s != 1 && s != 2 && s != 4) return false;
    return true;
}

bool markov_equivalent(const Dag& a, const Dag& b) {
    if (a.vertex_count() != b.vertex_count()) throw std::invalid_argument("vertex count mismatch");
    return skeleton_of(a) == skeleton_of(b) && v_structures(a) == v_structures(b);
}

Pdag skeleton_of(const Dag& dag) { return skeleton_of(Pdag(dag)); }

Pdag skeleton_of(const Pdag& g) {
    const int n = g.vertex_count();
    Pdag out(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (g.adjacent(u, v)) out.add_undirected(u, v);
    return out;
}

bool same_skeleton(const Pdag& a, const Pdag& b) {
    if (a.vertex_count() != b.vertex_count()) return false;
    const int n = a.vertex_count();
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (a.adjacent(u, v) != b.adjacent(u, v)) return false;
    return true;
}

bool refines(const Pdag& finer, const Pdag& coarser) {
    if (!same_skeleton(finer, coarser)) return false;
    auto f = finer.arcs();
    auto c = coarser.arcs();
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] && !c[i]) return false;
    return true;
}

}  // namespace tdag
