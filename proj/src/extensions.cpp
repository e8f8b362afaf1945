#include <algorithm>
#include <map>
#include <stdexcept>

#include "tdag/equivalence.hpp"
#include "tdag/errors.hpp"

namespace tdag {

namespace {

// Backtracking over orientation units. A unit is either one undirected edge or,
// in typed mode, all undirected edges of one t-edge (they must share a direction).
// Orientation 0 keeps the stored (from, to) direction, 1 reverses every edge.
class ExtensionSearch {
public:
    ExtensionSearch(const Pdag& g, const TypeMap* types, EnumerationBudget budget)
        : n_(g.vertex_count()), budget_(budget), neighbors_(n_), adjacent_(static_cast<std::size_t>(n_) * n_, 0) {
        if (types && types->vertex_count() != n_) throw std::invalid_argument("type map size mismatch");
        for (int u = 0; u < n_; ++u)
            for (int v = 0; v < n_; ++v)
                if (u != v && g.adjacent(u, v)) {
                    neighbors_[u].push_back(v);
                    adjacent_[idx(u, v)] = 1;
                }

        root_.arcs.assign(g.arcs().begin(), g.arcs().end());

        // Forced direction per t-edge from edges the input already directs.
        std::map<std::pair<int, int>, int> forced;
        std::map<std::pair<int, int>, int> typed_unit;
        if (types) {
            for (const Edge& e : g.directed_edges()) {
                int tf = (*types)(e.from), tt = (*types)(e.to);
                if (tf == tt) continue;
                auto key = std::minmax(tf, tt);
                int dir = tf < tt ? 0 : 1;
                auto [it, inserted] = forced.emplace(key, dir);
                if (!inserted && it->second != dir) feasible_ = false;
            }
        }
        for (const Edge& e : g.undirected_edges()) {
            int unit = -1;
            Edge stored = e;
            if (types && (*types)(e.from) != (*types)(e.to)) {
                int tf = (*types)(e.from), tt = (*types)(e.to);
                if (tf > tt) stored = {e.to, e.from};
                auto key = std::minmax(tf, tt);
                auto it = typed_unit.find(key);
                if (it == typed_unit.end()) {
                    it = typed_unit.emplace(key, static_cast<int>(units_.size())).first;
                    units_.emplace_back();
                }
                unit = it->second;
            } else {
                unit = static_cast<int>(units_.size());
                units_.emplace_back();
            }
            units_[unit].push_back(stored);
        }
        root_.decided.assign(units_.size(), -1);

        if (!feasible_ || has_directed_cycle()) {
            feasible_ = false;
            return;
        }
        for (const auto& [key, dir] : forced) {
            auto it = typed_unit.find(key);
            if (it != typed_unit.end() && !apply(root_, it->second, dir)) {
                feasible_ = false;
                return;
            }
        }
    }

    // Visits every extension. `visit` returns false to stop.
    template <class Visit>
    void run(Visit&& visit) {
        if (!feasible_) return;
        State s = root_;
        if (!propagate(s)) return;
        descend(s, visit);
    }

    // Arc union via one witness search per arc not yet covered.
    std::optional<Pdag> arc_union() {
        if (!feasible_) return std::nullopt;
        std::vector<std::uint8_t> covered(root_.arcs.size(), 0);
        bool any = false;
        auto absorb = [&](const State& s) {
            for (std::size_t i = 0; i < covered.size(); ++i) covered[i] |= s.arcs[i];
            any = true;
            return false;
        };
        {
            State s = root_;
            if (!propagate(s)) return std::nullopt;
            descend(s, absorb);
        }
        if (!any) return std::nullopt;

        for (std::size_t u = 0; u < units_.size(); ++u) {
            for (int dir = 0; dir < 2; ++dir) {
                const Edge& e = units_[u].front();
                auto [from, to] = dir == 0 ? std::pair{e.from, e.to} : std::pair{e.to, e.from};
                if (covered[idx(from, to)]) continue;
                State s = root_;
                if (s.decided[u] != -1) continue;
                if (!apply(s, static_cast<int>(u), dir) || !propagate(s)) continue;
                descend(s, absorb);
            }
        }
        // Directed input arcs are in every extension; undecided pairs became covered above.
        return Pdag::from_arcs(n_, std::move(covered));
    }

private:
    struct State {
        std::vector<std::uint8_t> arcs;
        std::vector<int> decided;
    };

    std::size_t idx(int u, int v) const { return static_cast<std::size_t>(u) * n_ + v; }

    static bool directed(const State& s, std::size_t n, int u, int v) {
        return s.arcs[u * n + v] && !s.arcs[v * n + u];
    }

    bool has_directed_cycle() const {
        // Kahn's algorithm over directed arcs of the root.
        std::vector<int> indegree(n_, 0);
        for (int u = 0; u < n_; ++u)
            for (int v : neighbors_[u])
                if (directed(root_, n_, u, v)) ++indegree[v];
        std::vector<int> ready;
        for (int v = 0; v < n_; ++v)
            if (indegree[v] == 0) ready.push_back(v);
        int seen = 0;
        while (!ready.empty()) {
            int u = ready.back();
            ready.pop_back();
            ++seen;
            for (int v : neighbors_[u])
                if (directed(root_, n_, u, v) && --indegree[v] == 0) ready.push_back(v);
        }
        return seen != n_;
    }

    // Adding from->to must not create a collider with a non-adjacent parent of
    // `to`, nor close a directed cycle.
    bool can_add(const State& s, int from, int to) {
        for (int w : neighbors_[to])
            if (w != from && directed(s, n_, w, to) && !adjacent_[idx(w, from)]) return false;
        return !reaches(s, to, from);
    }

    bool reaches(const State& s, int start, int target) {
        ++stamp_;
        if (mark_.size() != static_cast<std::size_t>(n_)) mark_.assign(n_, 0);
        stack_.clear();
        stack_.push_back(start);
        mark_[start] = stamp_;
        while (!stack_.empty()) {
            int u = stack_.back();
            stack_.pop_back();
            if (u == target) return true;
            for (int v : neighbors_[u])
                if (mark_[v] != stamp_ && directed(s, n_, u, v)) {
                    mark_[v] = stamp_;
                    stack_.push_back(v);
                }
        }
        return false;
    }

    // Applies a unit orientation; on failure the state is restored.
    bool apply(State& s, int unit, int dir) {
        const auto& edges = units_[unit];
        std::size_t done = 0;
        for (; done < edges.size(); ++done) {
            auto [from, to] = dir == 0 ? std::pair{edges[done].from, edges[done].to}
                                       : std::pair{edges[done].to, edges[done].from};
            if (!can_add(s, from, to)) break;
            s.arcs[idx(to, from)] = 0;
        }
        if (done == edges.size()) {
            s.decided[unit] = dir;
            return true;
        }
        for (std::size_t i = 0; i < done; ++i) {
            auto [from, to] = dir == 0 ? std::pair{edges[i].from, edges[i].to}
                                       : std::pair{edges[i].to, edges[i].from};
            s.arcs[idx(to, from)] = 1;
        }
        return false;
    }

    void revert(State& s, int unit, int dir) {
        for (const Edge& e : units_[unit]) {
            auto [from, to] = dir == 0 ? std::pair{e.from, e.to} : std::pair{e.to, e.from};
            s.arcs[idx(to, from)] = 1;
        }
        s.decided[unit] = -1;
    }

    // Forward checking: a unit with a single feasible orientation is forced.
    bool propagate(State& s) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t u = 0; u < units_.size(); ++u) {
                if (s.decided[u] != -1) continue;
                int feasible = 0, last = -1;
                for (int dir = 0; dir < 2; ++dir) {
                    if (apply(s, static_cast<int>(u), dir)) {
                        revert(s, static_cast<int>(u), dir);
                        ++feasible;
                        last = dir;
                    }
                }
                if (feasible == 0) return false;
                if (feasible == 1) {
                    apply(s, static_cast<int>(u), last);
                    changed = true;
                }
            }
        }
        return true;
    }

    template <class Visit>
    bool descend(State& s, Visit& visit) {
        if (++steps_ > budget_.max_members * budget_.search_factor) throw BudgetExceeded(budget_.max_members);
        auto next = std::find(s.decided.begin(), s.decided.end(), -1);
        if (next == s.decided.end()) {
            if (++members_ > budget_.max_members) throw BudgetExceeded(budget_.max_members);
            return visit(static_cast<const State&>(s));
        }
        const int unit = static_cast<int>(next - s.decided.begin());
        for (int dir = 0; dir < 2; ++dir) {
            State child = s;
            if (!apply(child, unit, dir) || !propagate(child)) continue;
            if (!descend(child, visit)) return false;
        }
        return true;
    }

public:
    std::size_t members() const noexcept { return members_; }

private:
    int n_;
    EnumerationBudget budget_;
    std::vector<std::vector<int>> neighbors_;
    std::vector<std::uint8_t> adjacent_;
    std::vector<std::vector<Edge>> units_;
    State root_;
    bool feasible_ = true;
    std::size_t steps_ = 0;
    std::size_t members_ = 0;
    std::vector<unsigned> mark_;
    unsigned stamp_ = 0;
    std::vector<int> stack_;
};

}  // namespace

std::size_t for_each_extension(const Pdag& g, const TypeMap* types, EnumerationBudget budget,
                               const std::function<bool(const Pdag&)>& visit) {
    ExtensionSearch search(g, types, budget);
    const int n = g.vertex_count();
    search.run([&](const auto& state) { return visit(Pdag::from_arcs(n, state.arcs)); });
    return search.members();
}

std::size_t count_extensions(const Pdag& g, const TypeMap* types, EnumerationBudget budget) {
    ExtensionSearch search(g, types, budget);
    search.run([](const auto&) { return true; });
    return search.members();
}

std::optional<Pdag> extension_union(const Pdag& g, const TypeMap* types, EnumerationBudget budget) {
    ExtensionSearch search(g, types, budget);
    return search.arc_union();
}

}  // namespace tdag
