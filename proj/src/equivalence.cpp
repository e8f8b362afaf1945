#include "tdag/equivalence.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "tdag/errors.hpp"

namespace tdag {

namespace {

// True if one of R1-R4 forces the undirected edge a - b into a -> b.
bool meek_forces(const Pdag& g, int a, int b) {
    const int n = g.vertex_count();
    // R1: c -> a - b, c and b not adjacent.
    // R2: a -> c -> b.
    for (int c = 0; c < n; ++c) {
        if (c == a || c == b) continue;
        if (g.is_directed(c, a) && !g.adjacent(c, b)) return true;
        if (g.is_directed(a, c) && g.is_directed(c, b)) return true;
    }
    // R3: a - c -> b and a - d -> b with c, d not adjacent.
    std::vector<int> via;
    for (int c = 0; c < n; ++c)
        if (c != a && c != b && g.is_undirected(a, c) && g.is_directed(c, b)) via.push_back(c);
    for (std::size_t x = 0; x < via.size(); ++x)
        for (std::size_t y = x + 1; y < via.size(); ++y)
            if (!g.adjacent(via[x], via[y])) return true;
    // R4: a - d -> c -> b, a adjacent to c, d and b not adjacent.
    for (int c = 0; c < n; ++c) {
        if (c == a || c == b || !g.is_directed(c, b) || !g.adjacent(a, c)) continue;
        for (int d = 0; d < n; ++d)
            if (d != a && d != b && d != c && g.is_directed(d, c) && g.is_undirected(a, d) && !g.adjacent(d, b))
                return true;
    }
    return false;
}

// Applies R1-R4 until nothing fires; `on_orient(from, to)` runs after each orientation.
template <class Hook>
bool apply_meek_rules(Pdag& g, Hook&& on_orient) {
    const int n = g.vertex_count();
    bool any = false;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                if (a == b || !g.is_undirected(a, b)) continue;
                if (meek_forces(g, a, b)) {
                    g.orient(a, b);
                    on_orient(a, b);
                    changed = any = true;
                }
            }
    }
    return any;
}

std::vector<std::vector<int>> vertices_by_type(const TypeMap& types) {
    std::vector<std::vector<int>> out(types.type_count());
    for (int v = 0; v < types.vertex_count(); ++v) out[types(v)].push_back(v);
    return out;
}

// Orients every edge between the types of `from` and `to` in that direction.
void orient_t_edge(Pdag& g, const std::vector<std::vector<int>>& by_type, int from_type, int to_type) {
    for (int x : by_type[from_type])
        for (int y : by_type[to_type]) {
            if (!g.adjacent(x, y)) continue;
            if (g.is_directed(y, x)) throw TypeInconsistency(std::min(from_type, to_type), std::max(from_type, to_type));
            g.orient(x, y);
        }
}

}  // namespace

Pdag meek_closure(Pdag g) {
    apply_meek_rules(g, [](int, int) {});
    return g;
}

Pdag essential_graph(const Dag& dag) {
    Pdag g = skeleton_of(dag);
    for (const Triple& t : v_structures(dag)) {
        g.orient(t.first, t.middle);
        g.orient(t.last, t.middle);
    }
    return meek_closure(std::move(g));
}

std::vector<Dag> enumerate_mec(const Dag& dag, EnumerationBudget budget) {
    std::vector<Dag> members;
    for_each_extension(essential_graph(dag), nullptr, budget, [&](const Pdag& member) {
        members.push_back(member.to_dag());
        return true;
    });
    return members;
}

std::size_t mec_size(const Dag& dag, EnumerationBudget budget) {
    return count_extensions(essential_graph(dag), nullptr, budget);
}

std::vector<TypedDag> enumerate_tmec(const TypedDag& tdag, EnumerationBudget budget) {
    if (!is_type_consistent(tdag)) throw std::invalid_argument("t-MEC is defined for consistent t-DAGs only");
    std::vector<TypedDag> members;
    for (Dag& member : enumerate_mec(tdag.dag, budget)) {
        TypedDag candidate(std::move(member), tdag.types);
        if (is_type_consistent(candidate)) members.push_back(std::move(candidate));
    }
    return members;
}

Pdag t_essential_graph(const TypedDag& tdag, EnumerationBudget budget) {
    if (!is_type_consistent(tdag)) throw std::invalid_argument("t-essential graph needs a consistent t-DAG");
    Pdag result(tdag.dag.vertex_count());
    for_each_extension(essential_graph(tdag.dag), nullptr, budget, [&](const Pdag& member) {
        if (is_type_consistent(TypedDag(member.to_dag(), tdag.types))) result.merge(member);
        return true;
    });
    return result;
}

Pdag t_propagation(const Pdag& input, const TypeMap& types, EnumerationBudget budget, TPropagationOptions options) {
    if (types.vertex_count() != input.vertex_count()) throw std::invalid_argument("type map size mismatch");
    Pdag g = input;
    const auto by_type = vertices_by_type(types);

    // Enforce type consistency from the directed edges present on entry.
    std::set<std::pair<int, int>> oriented;
    for (const Edge& e : g.directed_edges()) {
        int tf = types(e.from), tt = types(e.to);
        if (tf == tt) continue;
        if (oriented.count({tt, tf})) throw TypeInconsistency(std::min(tf, tt), std::max(tf, tt));
        oriented.insert({tf, tt});
    }
    for (const auto& [tf, tt] : oriented) orient_t_edge(g, by_type, tf, tt);

    // Every later orientation of an inter-type edge immediately takes its whole
    // t-edge along, so t-edges stay uniformly directed or undirected.
    auto propagate_type = [&](int from, int to) {
        if (types(from) != types(to)) orient_t_edge(g, by_type, types(from), types(to));
    };

    const std::size_t pass_cap = g.adjacency_count() + 1;
    std::size_t passes = 0;
    bool changed = true;
    while (changed) {
        // Each pass only adds orientations, so this cannot trigger.
        if (++passes > pass_cap) throw std::logic_error("t-propagation failed to reach a fixed point");
        changed = apply_meek_rules(g, propagate_type);
        if (options.two_type_fork_rule) {
            for (const Triple& f : two_type_forks(g, types)) {
                if (!g.is_undirected(f.first, f.middle) || !g.is_undirected(f.middle, f.last)) continue;
                g.orient(f.middle, f.first);
                propagate_type(f.middle, f.first);
                if (g.is_undirected(f.middle, f.last)) g.orient(f.middle, f.last);
                changed = true;
            }
        }
    }

    if (!options.enumerate) return g;
    auto unioned = extension_union(g, &types, budget);
    return unioned ? *unioned : g;
}

int tmec_upper_bound_log2(const Pdag& g, const TypeMap& types) {
    if (types.vertex_count() != g.vertex_count()) throw std::invalid_argument("type map size mismatch");
    std::set<std::pair<int, int>> undirected_t_edges;
    int intra = 0;
    for (const Edge& e : g.undirected_edges()) {
        int tf = types(e.from), tt = types(e.to);
        if (tf == tt)
            ++intra;
        else
            undirected_t_edges.insert(std::minmax(tf, tt));
    }
    return static_cast<int>(undirected_t_edges.size()) + intra;
}

std::uint64_t tmec_upper_bound(const Pdag& g, const TypeMap& types) {
    const int exponent = tmec_upper_bound_log2(g, types);
    if (exponent >= 64) throw std::overflow_error("t-MEC bound exceeds 2^63");
    return std::uint64_t{1} << exponent;
}

}  // namespace tdag
