// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--only N,...] [--allow-fail N,...]
//
// Exit status is 1 if any criterion outside the allow list fails, 77 if only
// allowed criteria fail, 0 otherwise.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "tdag/bench.hpp"
#include "tdag/discovery.hpp"
#include "tdag/equivalence.hpp"
#include "tdag/random_tdag.hpp"
#include "tdag/simulate.hpp"
#include "../test_support.hpp"

#ifndef TDAG_DATA_DIR
#define TDAG_DATA_DIR "data"
#endif

using namespace tdag;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Instance {
    TypedDag tdag;
    Pdag essential;
    Pdag t_essential;
};

// The 200 instances shared by criteria 1-3: d = 8, k cycles through 2..4,
// p_intra alternates between 0 and 0.2.
const std::vector<Instance>& oracle_instances() {
    static const std::vector<Instance> instances = [] {
        std::vector<Instance> out;
        for (std::uint64_t s = 0; s < 200; ++s) {
            const int k = 2 + static_cast<int>(s % 3);
            const double p_intra = (s / 3) % 2 ? 0.2 : 0.0;
            Philox rng(s, 1);
            GrowthConfig cfg{8, TypeDistribution::uniform(k), sample_interaction_matrix(k, 0.3, p_intra, rng), s, 2};
            TypedDag t = grow_random_tdag(cfg);
            Pdag ess = essential_graph(t.dag);
            Pdag te = t_essential_graph(t);
            out.push_back({std::move(t), std::move(ess), std::move(te)});
        }
        return out;
    }();
    return instances;
}

Outcome criterion1() {
    int mismatches = 0;
    for (const Instance& in : oracle_instances()) {
        OracleTester tester(in.tdag.dag);
        if (pc(tester).graph != in.essential) ++mismatches;
        const auto tprop = pc_with_tpropagation(tester, in.tdag.types);
        if (tprop.graph != in.t_essential || tprop.used_fallback) ++mismatches;
        if (tpc_naive(tester, in.tdag.types).graph != in.t_essential) ++mismatches;
        if (tpc_majority(tester, in.tdag.types).graph != in.t_essential) ++mismatches;
    }
    return {mismatches == 0, "200 instances x 4 methods, mismatches=" + std::to_string(mismatches)};
}

Outcome criterion2() {
    int violations = 0, strict = 0;
    for (const Instance& in : oracle_instances()) {
        if (!refines(Pdag(in.tdag.dag), in.t_essential)) ++violations;
        if (!refines(in.t_essential, in.essential)) ++violations;
        if (in.t_essential != in.essential) ++strict;
    }
    return {violations == 0, "violations=" + std::to_string(violations) + ", instances where types add orientations=" +
                                 std::to_string(strict)};
}

// Every orientation of the undirected units of a t-essential graph (t-edges as
// one unit, intra-type edges singly), checked for acyclicity and unchanged
// v-structures.
std::size_t brute_force_unit_orientations(const Instance& in, std::size_t& rejected) {
    const TypeMap& types = in.tdag.types;
    std::map<std::pair<int, int>, std::vector<Edge>> t_units;
    std::vector<std::vector<Edge>> units;
    for (const Edge& e : in.t_essential.undirected_edges()) {
        const int a = types(e.from), b = types(e.to);
        if (a == b) {
            units.push_back({e});
        } else {
            // Stored low type -> high type.
            t_units[std::minmax(a, b)].push_back(a < b ? e : Edge{e.to, e.from});
        }
    }
    for (auto& [pair, edges] : t_units) units.push_back(edges);
    const auto target = v_structures(in.tdag.dag);
    const int n = in.tdag.dag.vertex_count();
    std::size_t valid = 0;
    rejected = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << units.size()); ++mask) {
        std::vector<Edge> edges = in.t_essential.directed_edges();
        for (std::size_t u = 0; u < units.size(); ++u)
            for (const Edge& e : units[u]) edges.push_back(mask >> u & 1 ? Edge{e.to, e.from} : e);
        if (!testing::acyclic(n, edges) || v_structures(Dag(n, edges)) != target) {
            ++rejected;
            continue;
        }
        ++valid;
    }
    return valid;
}

Outcome criterion3() {
    int over = 0, equality_misses = 0, count_mismatches = 0, tight = 0;
    for (const Instance& in : oracle_instances()) {
        const std::size_t members = enumerate_tmec(in.tdag).size();
        const std::uint64_t bound = tmec_upper_bound(in.t_essential, in.tdag.types);
        std::size_t rejected = 0;
        const std::size_t brute = brute_force_unit_orientations(in, rejected);
        if (members > bound) ++over;
        if (brute != members) ++count_mismatches;
        if (rejected == 0) {
            ++tight;
            if (members != bound) ++equality_misses;
        }
    }
    return {over == 0 && equality_misses == 0 && count_mismatches == 0,
            "bound exceeded=" + std::to_string(over) + ", equality cases=" + std::to_string(tight) +
                " (misses=" + std::to_string(equality_misses) + "), brute-force count mismatches=" +
                std::to_string(count_mismatches)};
}

Outcome criterion4() {
    const TypedDag t = testing::two_type_fork_tdag();
    std::vector<Edge> dir{{2, 0}, {2, 1}};
    std::vector<Edge> none;
    const Pdag expected(3, dir, none);
    const Pdag te = t_essential_graph(t);
    const std::size_t tmec = enumerate_tmec(t).size();
    const std::size_t mec = mec_size(t.dag);
    const bool ok = te == expected && te.fully_directed() && tmec == 1 && mec == 3 &&
                    t_propagation(essential_graph(t.dag), t.types) == expected;
    return {ok, "t-MEC size=" + std::to_string(tmec) + ", MEC size=" + std::to_string(mec) +
                    ", fully directed=" + (te.fully_directed() ? "yes" : "no")};
}

Outcome criterion5() {
    TPropagationOptions steps_1_to_3;
    steps_1_to_3.enumerate = false;
    bool ok = true;
    std::ostringstream detail;

    {
        // a1=0 b1=1 c1=2 a2=3 b2=4 c2=5 a3=6 c3=7 c4=8
        const TypedDag t = testing::missed_orientation_example_1();
        std::vector<Edge> full_dir{{0, 2}, {1, 2}, {4, 5}, {6, 7}, {8, 7}};
        std::vector<Edge> full_und{{0, 1}, {3, 4}};
        std::vector<Edge> partial_dir{{0, 2}, {6, 7}, {8, 7}};
        std::vector<Edge> partial_und{{0, 1}, {1, 2}, {3, 4}, {4, 5}};
        const Pdag want_full(9, full_dir, full_und), want_partial(9, partial_dir, partial_und);
        const Pdag cpdag = essential_graph(t.dag);
        const bool oracle = t_essential_graph(t) == want_full;
        const bool partial = t_propagation(cpdag, t.types, {}, steps_1_to_3) == want_partial;
        const bool full = t_propagation(cpdag, t.types) == want_full;
        ok = ok && oracle && partial && full;
        detail << "example 1: oracle=" << oracle << " steps1-3=" << partial << " full=" << full;
    }
    {
        // a1=0 b1=1 c1=2 d1=3 a2=4 b2=5
        const TypedDag t = testing::missed_orientation_example_2();
        std::vector<Edge> full_dir{{0, 1}, {4, 5}};
        std::vector<Edge> full_und{{0, 2}, {2, 3}, {3, 4}};
        std::vector<Edge> none;
        std::vector<Edge> partial_und{{0, 1}, {0, 2}, {2, 3}, {3, 4}, {4, 5}};
        const Pdag want_full(6, full_dir, full_und), want_partial(6, none, partial_und);
        const Pdag cpdag = essential_graph(t.dag);
        const bool oracle = t_essential_graph(t) == want_full && enumerate_tmec(t).size() == 4;
        const bool partial = t_propagation(cpdag, t.types, {}, steps_1_to_3) == want_partial;
        const bool full = t_propagation(cpdag, t.types) == want_full;
        ok = ok && oracle && partial && full;
        detail << "; example 2: oracle=" << oracle << " steps1-3=" << partial << " full=" << full;
    }
    return {ok, detail.str()};
}

Outcome criterion6() {
    TheoryConfig cfg;
    cfg.n_list = {10, 20, 40, 70, 100};
    cfg.k = 10;
    cfg.p_inter = 0.2;
    cfg.p_intra = {0.0, 0.1, 0.5};
    cfg.seeds = 100;
    cfg.threads = 0;
    const auto rows = run_theory_experiment(cfg);

    struct Cell {
        double sum = 0, sum_sq = 0;
        int count = 0, positive = 0, tmec_one = 0;
        double bound = 1;
    };
    std::map<std::pair<double, int>, Cell> cells;
    int ratio_violations = 0, mec_rows = 0;
    for (const TheoryRow& r : rows) {
        Cell& c = cells[{r.p_intra, r.n}];
        c.sum += r.unoriented_t_edges;
        c.sum_sq += static_cast<double>(r.unoriented_t_edges) * r.unoriented_t_edges;
        ++c.count;
        c.positive += r.unoriented_t_edges > 0;
        c.tmec_one += r.tmec_size && *r.tmec_size == 1;
        c.bound = r.bound;
        if (r.mec_size && r.tmec_size) {
            ++mec_rows;
            if (*r.tmec_size > *r.mec_size) ++ratio_violations;
        }
    }
    auto mean = [](const Cell& c) { return c.sum / c.count; };
    auto se = [&](const Cell& c) {
        const double m = mean(c);
        return std::sqrt(std::max(0.0, (c.sum_sq / c.count - m * m) * c.count / (c.count - 1)) / c.count);
    };

    std::ostringstream detail;
    detail << "k=10 p_inter=0.2 seeds=100";
    bool trend_ok = true;
    for (double p_intra : cfg.p_intra) {
        int violations = 0, large = 0;
        detail << "\n    p_intra=" << p_intra << " mean U:";
        for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
            const Cell& c = cells[{p_intra, cfg.n_list[i]}];
            char buf[64];
            std::snprintf(buf, sizeof buf, " n=%d:%.2f(se %.2f)", cfg.n_list[i], mean(c), se(c));
            detail << buf;
            if (i == 0) continue;
            const Cell& prev = cells[{p_intra, cfg.n_list[i - 1]}];
            const double rise = mean(c) - mean(prev);
            if (rise > 0) {
                ++violations;
                if (rise > std::max(se(c), se(prev))) ++large;
            }
        }
        const bool ok = violations == 0 || (violations == 1 && large == 0);
        detail << (ok ? "  [ok]" : "  [not non-increasing]");
        trend_ok = trend_ok && ok;
    }
    const Cell& last = cells[{0.0, 100}];
    const double identified = static_cast<double>(last.tmec_one) / last.count;
    const bool identification_ok = identified >= 0.9;
    detail << "\n    (b) p_intra=0, n=100: t-MEC size 1 in " << last.tmec_one << "/" << last.count << " seeds";

    int bound_checked = 0, bound_violations = 0;
    for (const auto& [key, c] : cells) {
        if (c.bound >= 1.0) continue;
        ++bound_checked;
        const double p = static_cast<double>(c.positive) / c.count;
        if (p > c.bound + 3 * std::sqrt(p * (1 - p) / c.count)) ++bound_violations;
    }
    detail << "\n    (c) cells with bound < 1: " << bound_checked << " (violations " << bound_violations << ")";
    if (bound_checked == 0) detail << "; bound is 1 for every n <= 100 at k=10, check is vacuous";
    detail << "\n    MEC side (n <= 15): " << mec_rows << " rows, tmec > mec in " << ratio_violations;
    detail << "\n    (a) " << (trend_ok ? "PASS" : "FAIL") << "  (b) " << (identification_ok ? "PASS" : "FAIL")
           << "  (c) " << (bound_violations == 0 ? "PASS" : "FAIL");
    return {trend_ok && identification_ok && bound_violations == 0 && ratio_violations == 0, detail.str()};
}

std::string format_means(const std::map<std::string, double>& means) {
    std::ostringstream ss;
    ss.precision(3);
    for (const auto& m : benchmark_methods()) ss << " " << m << "=" << (means.count(m) ? means.at(m) : NAN);
    return ss.str();
}

Outcome criterion7() {
    SyntheticConfig cfg;
    cfg.d = 20;
    cfg.k = 5;
    cfg.p_inter = 0.2;
    cfg.p_intra = 0.0;
    cfg.seeds = 20;
    cfg.samples = 10000;
    cfg.mechanism = Mechanism::linear;
    cfg.alpha = 0.01;
    const auto rows = run_synthetic_benchmark(cfg);
    auto means = mean_shd_by_method(rows);
    int errors = 0, fallbacks = 0;
    for (const auto& r : rows) {
        errors += !r.error.empty();
        fallbacks += r.used_fallback;
    }
    const bool ok = errors == 0 && means["tpc-majority"] <= means["pc"] && means["tpc-naive"] <= means["pc"];
    return {ok, "mean SHD:" + format_means(means) + ", pc-tprop fallbacks=" + std::to_string(fallbacks) +
                    ", errors=" + std::to_string(errors)};
}

Outcome criterion8() {
    PseudoRealConfig cfg;
    const std::filesystem::path dir = std::filesystem::path(TDAG_DATA_DIR) / "bif";
    cfg.networks = {dir / "sachs.bif", dir / "child.bif"};
    cfg.seeds = 10;
    cfg.samples = 20000;
    const auto rows = run_pseudoreal_benchmark(cfg);
    int errors = 0, inconsistent = 0, fallbacks = 0;
    for (const auto& r : rows) {
        errors += !r.error.empty();
        if (r.method != "pc" && !r.type_consistent && !r.used_fallback) ++inconsistent;
        fallbacks += r.used_fallback;
    }
    auto means = mean_shd_by_method(rows);
    const bool ok = errors == 0 && inconsistent == 0 && rows.size() == 80 && means["tpc-majority"] <= means["pc"] + 1;
    return {ok, std::to_string(rows.size()) + " rows, errors=" + std::to_string(errors) +
                    ", unflagged inconsistent outputs=" + std::to_string(inconsistent) +
                    ", pc-tprop fallbacks=" + std::to_string(fallbacks) + ", mean SHD:" + format_means(means)};
}

Outcome criterion9() {
    std::ostringstream detail;
    bool ok = true;
    auto report = [&](const char* name, int failures) {
        detail << " " << name << "=" << failures;
        ok = ok && failures == 0;
    };

    std::mt19937_64 rng(9);
    {
        int failures = 0;
        for (int g = 0; g < 500; ++g) {
            const int n = 2 + g % 5;
            const Dag d = testing::random_dag(n, 0.45, rng);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    std::vector<int> others;
                    for (int v = 0; v < n; ++v)
                        if (v != i && v != j) others.push_back(v);
                    for (unsigned mask = 0; mask < (1u << others.size()); ++mask) {
                        std::vector<int> z;
                        for (std::size_t b = 0; b < others.size(); ++b)
                            if (mask >> b & 1) z.push_back(others[b]);
                        failures += d_separated(d, i, j, z) != testing::d_separated_by_paths(d, i, j, z);
                    }
                }
        }
        report("d-separation", failures);
    }
    {
        int failures = 0;
        std::vector<Dag> pool;
        for (int g = 0; g < 80; ++g) pool.push_back(testing::random_dag(4 + g % 2, 0.5, rng));
        for (const Dag& a : pool) {
            failures += !markov_equivalent(a, a);
            for (const Dag& b : pool) {
                if (a.vertex_count() != b.vertex_count()) continue;
                const bool ab = markov_equivalent(a, b);
                failures += ab != markov_equivalent(b, a);
                failures += ab != (essential_graph(a) == essential_graph(b));
                if (!ab) continue;
                for (const Dag& c : pool)
                    if (c.vertex_count() == a.vertex_count() && markov_equivalent(b, c)) failures += !markov_equivalent(a, c);
            }
        }
        report("markov-equivalence", failures);
    }
    {
        int failures = 0;
        for (int g = 0; g < 300; ++g) {
            const Dag d = testing::random_dag(8, 0.35, rng);
            Pdag base = skeleton_of(d);
            for (const Triple& t : v_structures(d)) {
                base.orient(t.first, t.middle);
                base.orient(t.last, t.middle);
            }
            // A more oriented input, still agreeing with d.
            Pdag more = base;
            for (const Edge& e : d.edges())
                if (more.is_undirected(e.from, e.to) && rng() % 3 == 0) more.orient(e.from, e.to);
            const Pdag closed = meek_closure(base), closed_more = meek_closure(more);
            failures += meek_closure(closed) != closed;
            failures += !refines(closed_more, closed);
            failures += !refines(Pdag(d), closed_more);
        }
        report("meek", failures);
    }
    {
        int failures = 0;
        Philox meta(99);
        for (int g = 0; g < 10000; ++g) {
            const int k = 1 + static_cast<int>(meta.below(6));
            Philox mrng(meta.next_u64());
            GrowthConfig cfg{static_cast<int>(meta.below(30)), TypeDistribution::uniform(k),
                             sample_interaction_matrix(k, meta.uniform(), meta.uniform(), mrng), meta.next_u64(), 0};
            const TypedDag a = grow_random_tdag(cfg), b = grow_random_tdag(cfg);
            failures += !is_type_consistent(a);
            failures += !(a.dag == b.dag && a.types == b.types);
        }
        report("growth", failures);
    }
    {
        int failures = 0;
        Philox trng(5);
        for (int g = 0; g < 1000; ++g) {
            const Dag d = testing::random_dag(3 + g % 20, 0.3, rng);
            failures += !is_type_consistent(TypedDag(d, assign_types_topological(d, 1.0 + 9.0 * trng.uniform(), trng)));
        }
        report("type-assignment", failures);
    }
    {
        int failures = 0;
        for (int g = 0; g < 500; ++g) {
            const int n = 2 + g % 9;
            Pdag a(testing::random_dag(n, 0.4, rng)), b(testing::random_dag(n, 0.4, rng));
            if (g % 2) b = skeleton_of(b);
            failures += shd(a, a) != 0;
            failures += shd(a, b) != shd(b, a);
            failures += (shd(a, b) == 0) != (a == b);
        }
        report("shd", failures);
    }
    return {ok, "failures:" + detail.str()};
}

std::set<int> parse_list(const std::string& s) {
    std::set<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.insert(std::stoi(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only, allowed;
    for (int a = 1; a + 1 < argc; a += 2) {
        const std::string flag = argv[a];
        if (flag == "--only")
            only = parse_list(argv[a + 1]);
        else if (flag == "--allow-fail")
            allowed = parse_list(argv[a + 1]);
    }

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"oracle consistency of PC, PC+t-Propagation, TPC-naive, TPC-majority", criterion1},
        {"refinement chain D_T <= t-essential <= essential", criterion2},
        {"t-MEC size bound", criterion3},
        {"two-type fork orientation", criterion4},
        {"t-Propagation counterexample fixtures", criterion5},
        {"unoriented t-edge trends, desk scale", criterion6},
        {"finite-sample linear benchmark direction", criterion7},
        {"pseudo-real benchmark smoke (sachs, child)", criterion8},
        {"property suites", criterion9},
    };

    int unexpected = 0, tolerated_count = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool tolerated = !out.pass && allowed.count(id);
        std::printf("CRITERION %d: %s - %s [%.1fs]%s\n    %s\n", id, out.pass ? "PASS" : "FAIL", criteria[i].first,
                    secs, tolerated ? " (known failure, tolerated)" : "", out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass && !tolerated) ++unexpected;
        tolerated_count += tolerated;
    }
    if (unexpected) return 1;
    return tolerated_count ? 77 : 0;
}
