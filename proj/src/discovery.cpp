#include "tdag/discovery.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "tdag/errors.hpp"

namespace tdag {

namespace {

// Calls f on every size-l subset of `pool` in lexicographic order until f returns true.
template <class F>
bool for_each_subset(const std::vector<int>& pool, std::size_t l, F&& f) {
    if (l > pool.size()) return false;
    std::vector<std::size_t> pick(l);
    for (std::size_t i = 0; i < l; ++i) pick[i] = i;
    std::vector<int> subset(l);
    while (true) {
        for (std::size_t i = 0; i < l; ++i) subset[i] = pool[pick[i]];
        if (f(subset)) return true;
        std::size_t i = l;
        while (i > 0 && pick[i - 1] == pool.size() - l + i - 1) --i;
        if (i == 0) return false;
        ++pick[i - 1];
        for (std::size_t m = i; m < l; ++m) pick[m] = pick[m - 1] + 1;
    }
}

const std::vector<int>& sepset_of(const SepsetTable& sepsets, int i, int j) {
    const auto* s = sepsets.get(i, j);
    if (!s) throw std::invalid_argument("no separating set recorded for a disconnected fork");
    return *s;
}

bool in_sepset(const SepsetTable& sepsets, int i, int j, int k) {
    const auto& s = sepset_of(sepsets, i, j);
    return std::binary_search(s.begin(), s.end(), k);
}

// Whole-t-edge orientation with per-t-edge bookkeeping.
class TEdgeOrienter {
public:
    TEdgeOrienter(Pdag& g, const TypeMap& types) : g_(g), types_(types), by_type_(types.type_count()) {
        for (int v = 0; v < types.vertex_count(); ++v) by_type_[types(v)].push_back(v);
    }

    bool oriented(int ta, int tb) const { return done_.count(std::minmax(ta, tb)) > 0; }

    // Orients every edge between the two types from -> to. No-op if the t-edge
    // was oriented before.
    bool orient(int from_type, int to_type) {
        if (from_type == to_type || oriented(from_type, to_type)) return false;
        done_.insert(std::minmax(from_type, to_type));
        for (int x : by_type_[from_type])
            for (int y : by_type_[to_type])
                if (g_.adjacent(x, y)) g_.orient(x, y);
        return true;
    }

    // Single edge if intra-type, otherwise its whole t-edge. First writer wins.
    void orient_general(int from, int to) {
        if (types_(from) != types_(to))
            orient(types_(from), types_(to));
        else if (g_.is_undirected(from, to))
            g_.orient(from, to);
    }

private:
    Pdag& g_;
    const TypeMap& types_;
    std::vector<std::vector<int>> by_type_;
    std::set<std::pair<int, int>> done_;
};

void check_types(const CiTester& tester, const TypeMap& types) {
    if (types.vertex_count() != tester.variable_count()) throw std::invalid_argument("type map size mismatch");
}

}  // namespace

SkeletonResult pc_skeleton(const CiTester& tester, PcOptions options) {
    const int d = tester.variable_count();
    SkeletonResult out{Pdag(d), {}, 0};
    Pdag& g = out.skeleton;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) g.add_undirected(i, j);

    for (std::size_t level = 0;; ++level) {
        std::vector<std::vector<int>> snapshot(d);
        bool any_candidate = false;
        for (int v = 0; v < d; ++v) {
            snapshot[v] = g.neighbors(v);
            if (snapshot[v].size() > level) any_candidate = true;
        }
        if (!any_candidate) break;
        for (int i = 0; i < d; ++i) {
            for (int j : snapshot[i]) {
                if (!g.adjacent(i, j)) continue;
                std::vector<int> pool = options.stable ? snapshot[i] : g.neighbors(i);
                pool.erase(std::remove(pool.begin(), pool.end(), j), pool.end());
                for_each_subset(pool, level, [&](const std::vector<int>& s) {
                    ++out.ci_tests;
                    if (!tester.test(i, j, s).independent) return false;
                    g.remove(i, j);
                    out.sepsets.set(i, j, s);
                    return true;
                });
            }
        }
    }
    return out;
}

std::vector<Triple> disconnected_forks(const Pdag& skeleton) {
    const int n = skeleton.vertex_count();
    std::vector<Triple> out;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (skeleton.adjacent(i, j)) continue;
            for (int k = 0; k < n; ++k)
                if (k != i && k != j && skeleton.adjacent(i, k) && skeleton.adjacent(j, k)) out.push_back({i, k, j});
        }
    std::sort(out.begin(), out.end());
    return out;
}

Pdag orient_v_structures(const Pdag& skeleton, const SepsetTable& sepsets, std::size_t* conflicts) {
    Pdag g = skeleton;
    std::size_t clashes = 0;
    for (const Triple& f : disconnected_forks(skeleton)) {
        if (in_sepset(sepsets, f.first, f.last, f.middle)) continue;
        for (int end : {f.first, f.last}) {
            if (g.is_directed(f.middle, end)) ++clashes;
            g.orient(end, f.middle);
        }
    }
    if (conflicts) *conflicts = clashes;
    return g;
}

Pdag orient_forks_naive(const Pdag& skeleton, const SepsetTable& sepsets, const TypeMap& types,
                        Diagnostics* diagnostics) {
    Pdag g = skeleton;
    TEdgeOrienter orienter(g, types);
    for (const Triple& f : disconnected_forks(skeleton)) {
        if (diagnostics) ++diagnostics->forks_examined;
        const int i = f.first, k = f.middle, j = f.last;
        if (!in_sepset(sepsets, i, j, k)) {
            orienter.orient_general(i, k);
            orienter.orient_general(j, k);
        } else if (types(i) == types(j) && types(i) != types(k)) {
            orienter.orient(types(k), types(i));
        }
    }
    return g;
}

Pdag orient_forks_majority(const Pdag& skeleton, const SepsetTable& sepsets, const TypeMap& types,
                           Diagnostics* diagnostics) {
    Pdag g = skeleton;
    TEdgeOrienter orienter(g, types);
    const auto forks = disconnected_forks(skeleton);
    auto is_oriented = [&](int a, int b) { return g.is_directed(a, b) || g.is_directed(b, a); };

    // Step 1: one t-edge per pass, chosen by evidence. Evidence only counts
    // toward t-edges that are still unoriented, so every pass makes progress.
    while (true) {
        std::map<std::pair<int, int>, int> evidence;
        std::map<std::pair<int, int>, std::vector<Edge>> conditional;
        auto vote = [&](int from_type, int to_type, int weight) {
            if (from_type != to_type && !orienter.oriented(from_type, to_type)) evidence[{from_type, to_type}] += weight;
        };
        for (const Triple& f : forks) {
            if (diagnostics) ++diagnostics->forks_examined;
            const int i = f.first, k = f.middle, j = f.last;
            const int ti = types(i), tj = types(j), tk = types(k);
            if (!in_sepset(sepsets, i, j, k) && !(is_oriented(i, k) && is_oriented(j, k))) {
                vote(ti, tk, 1);
                vote(tj, tk, 1);
                if (ti == tk && tj != tk) conditional[{tj, tk}].push_back({i, k});
                if (tj == tk && ti != tk) conditional[{ti, tk}].push_back({j, k});
            } else if (in_sepset(sepsets, i, j, k) && ti == tj && ti != tk) {
                vote(tk, ti, 2);
            }
        }
        // Ties go to the smallest (from, to) pair: map order plus strict comparison.
        std::pair<int, int> best{-1, -1};
        int best_count = 0;
        for (const auto& [pair, count] : evidence)
            if (count > best_count) {
                best = pair;
                best_count = count;
            }
        if (best_count == 0) break;
        orienter.orient(best.first, best.second);
        if (diagnostics) ++diagnostics->t_edges_oriented_by_evidence;
        for (const Edge& e : conditional[best])
            if (g.is_undirected(e.from, e.to)) g.orient(e.from, e.to);
    }

    // Step 2: single-type v-structures.
    for (const Triple& f : forks) {
        const int i = f.first, k = f.middle, j = f.last;
        if (types(i) != types(k) || types(j) != types(k) || in_sepset(sepsets, i, j, k)) continue;
        if (g.is_undirected(i, k)) g.orient(i, k);
        if (g.is_undirected(j, k)) g.orient(j, k);
    }
    return g;
}

DiscoveryResult pc(const CiTester& tester, PcOptions options) {
    auto skel = pc_skeleton(tester, options);
    DiscoveryResult out;
    out.diagnostics.ci_tests = skel.ci_tests;
    out.diagnostics.forks_examined = disconnected_forks(skel.skeleton).size();
    out.graph = meek_closure(orient_v_structures(skel.skeleton, skel.sepsets, &out.diagnostics.v_structure_conflicts));
    return out;
}

DiscoveryResult pc_with_tpropagation(const CiTester& tester, const TypeMap& types, EnumerationBudget budget,
                                     PcOptions options) {
    check_types(tester, types);
    DiscoveryResult out = pc(tester, options);
    try {
        out.graph = t_propagation(out.graph, types, budget);
    } catch (const TypeInconsistency&) {
        out.used_fallback = true;
    }
    return out;
}

DiscoveryResult tpc_naive(const CiTester& tester, const TypeMap& types, EnumerationBudget budget, PcOptions options) {
    check_types(tester, types);
    auto skel = pc_skeleton(tester, options);
    DiscoveryResult out;
    out.diagnostics.ci_tests = skel.ci_tests;
    out.graph = t_propagation(orient_forks_naive(skel.skeleton, skel.sepsets, types, &out.diagnostics), types, budget);
    return out;
}

DiscoveryResult tpc_majority(const CiTester& tester, const TypeMap& types, EnumerationBudget budget,
                             PcOptions options) {
    check_types(tester, types);
    auto skel = pc_skeleton(tester, options);
    DiscoveryResult out;
    out.diagnostics.ci_tests = skel.ci_tests;
    out.graph =
        t_propagation(orient_forks_majority(skel.skeleton, skel.sepsets, types, &out.diagnostics), types, budget);
    return out;
}

}  // namespace tdag
