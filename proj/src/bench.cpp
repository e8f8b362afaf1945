#include "tdag/bench.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "tdag/ci_tests.hpp"
#include "tdag/discovery.hpp"
#include "tdag/errors.hpp"
#include "tdag/graph_io.hpp"
#include "tdag/random_tdag.hpp"

namespace tdag {

namespace {

// 0 none, 1 u->v, 2 v->u, 3 undirected.
int pair_state(const Pdag& g, int u, int v) { return (g.has_arc(u, v) ? 1 : 0) | (g.has_arc(v, u) ? 2 : 0); }

DiscoveryResult run_method(const std::string& method, const CiTester& tester, const TypeMap& types,
                           EnumerationBudget budget) {
    if (method == "pc") return pc(tester);
    if (method == "pc-tprop") return pc_with_tpropagation(tester, types, budget);
    if (method == "tpc-naive") return tpc_naive(tester, types, budget);
    if (method == "tpc-majority") return tpc_majority(tester, types, budget);
    throw std::invalid_argument("unknown method '" + method + "'");
}

// Runs the four methods on one instance and scores them against `truth`.
std::vector<BenchmarkRow> score_methods(const CiTester& tester, const TypeMap& types, const Pdag& truth,
                                        const BenchmarkRow& proto, EnumerationBudget budget) {
    std::vector<BenchmarkRow> rows;
    for (const std::string& method : benchmark_methods()) {
        BenchmarkRow row = proto;
        row.method = method;
        const auto start = std::chrono::steady_clock::now();
        try {
            DiscoveryResult res = run_method(method, tester, types, budget);
            row.shd = shd(res.graph, truth);
            row.used_fallback = res.used_fallback;
            row.type_consistent = is_type_consistent(res.graph, types);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        rows.push_back(std::move(row));
    }
    const int pc_shd = rows.front().shd;
    for (BenchmarkRow& row : rows) row.shd_improvement_vs_pc = row.shd - pc_shd;
    return rows;
}

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
        h ^= (word >> (8 * b)) & 0xFF;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string csv_double(double v) {
    std::ostringstream ss;
    ss.precision(10);
    ss << v;
    return ss.str();
}

template <class T>
T json_or(const nlohmann::json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

EnumerationBudget budget_from_json(const nlohmann::json& j) {
    EnumerationBudget b;
    if (j.contains("budget")) b.max_members = j.at("budget").get<std::size_t>();
    return b;
}

}  // namespace

int shd(const Pdag& estimate, const Pdag& truth) {
    return static_cast<int>(shd(estimate, truth, ShdConvention::full));
}

double shd(const Pdag& estimate, const Pdag& truth, ShdConvention convention) {
    if (estimate.vertex_count() != truth.vertex_count()) throw std::invalid_argument("shd needs equal vertex counts");
    const int n = truth.vertex_count();
    double total = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            const int a = pair_state(estimate, u, v), b = pair_state(truth, u, v);
            if (a == b) continue;
            const bool half = convention == ShdConvention::half_undirected && a != 0 && b != 0 && (a == 3 || b == 3);
            total += half ? 0.5 : 1.0;
        }
    return total;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = count;
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
}

std::uint64_t typed_dag_hash(const TypedDag& tdag) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    h = fnv1a(h, static_cast<std::uint64_t>(tdag.dag.vertex_count()));
    for (const Edge& e : tdag.dag.edges()) h = fnv1a(h, static_cast<std::uint64_t>(e.from) << 32 | static_cast<std::uint32_t>(e.to));
    h = fnv1a(h, static_cast<std::uint64_t>(tdag.types.type_count()));
    for (int t : tdag.types.assignment()) h = fnv1a(h, static_cast<std::uint64_t>(t));
    return h;
}

Pdag ground_truth_t_essential(const TypedDag& tdag, EnumerationBudget budget, const std::filesystem::path& cache_dir) {
    std::filesystem::path cached;
    if (!cache_dir.empty()) {
        char name[32];
        std::snprintf(name, sizeof name, "%016llx.json", static_cast<unsigned long long>(typed_dag_hash(tdag)));
        cached = cache_dir / name;
        if (std::filesystem::exists(cached)) {
            try {
                auto doc = read_graph_file(cached.string());
                if (doc.graph.vertex_count() == tdag.dag.vertex_count() && refines(Pdag(tdag.dag), doc.graph))
                    return doc.graph;
            } catch (const std::exception&) {
                // Unreadable cache entries are recomputed.
            }
        }
    }
    Pdag truth;
    try {
        truth = t_essential_graph(tdag, budget);
    } catch (const BudgetExceeded&) {
        truth = t_propagation(essential_graph(tdag.dag), tdag.types, budget);
    }
    if (!cached.empty()) {
        std::filesystem::create_directories(cache_dir);
        write_json_file(cached.string(), to_json(truth, &tdag.types));
    }
    return truth;
}

// ---------------------------------------------------------------------------

std::vector<TheoryRow> run_theory_experiment(const TheoryConfig& cfg) {
    struct Job {
        double p_intra;
        int n;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (double p_intra : cfg.p_intra)
        for (int n : cfg.n_list)
            for (int s = 0; s < cfg.seeds; ++s) jobs.push_back({p_intra, n, cfg.base_seed + static_cast<std::uint64_t>(s)});

    std::vector<TheoryRow> rows(jobs.size());
    parallel_for(jobs.size(), cfg.threads, [&](std::size_t idx) {
        const Job& job = jobs[idx];
        // One stream per (n, p_intra) cell; the seed is the key.
        const std::uint64_t stream = splitmix64(static_cast<std::uint64_t>(job.n)) ^ std::bit_cast<std::uint64_t>(job.p_intra);
        Philox matrix_rng = Philox(job.seed, stream).substream(0);
        GrowthConfig growth;
        growth.n = job.n;
        growth.type_dist = TypeDistribution::uniform(cfg.k);
        growth.interactions = sample_interaction_matrix(cfg.k, cfg.p_inter, job.p_intra, matrix_rng);
        growth.seed = job.seed;
        growth.stream = Philox(job.seed, stream).substream(1).stream();
        const TypedDag t = grow_random_tdag(growth);

        TheoryRow& row = rows[idx];
        row.seed = job.seed;
        row.n = job.n;
        row.k = cfg.k;
        row.p_inter = cfg.p_inter;
        row.p_intra = job.p_intra;
        const auto rates = pair_rates(growth.type_dist, growth.interactions);
        row.bound = job.n >= 3 ? theorem1_bound(rates, job.n) : 1.0;
        try {
            const Pdag te = t_propagation(essential_graph(t.dag), t.types, cfg.budget);
            row.unoriented_t_edges = unoriented_t_edges(te, t.types);
            row.tmec_size = te.fully_directed() ? 1 : count_extensions(te, &t.types, cfg.budget);
        } catch (const BudgetExceeded&) {
            row.tmec_size.reset();
        }
        if (job.n <= cfg.mec_max_n) {
            try {
                row.mec_size = mec_size(t.dag, cfg.budget);
            } catch (const BudgetExceeded&) {
                row.mec_size.reset();
            }
        }
    });
    return rows;
}

TheoryConfig theory_config_from_json(const nlohmann::json& j) {
    TheoryConfig cfg;
    try {
        cfg.n_list = json_or(j, "n_list", cfg.n_list);
        cfg.k = json_or(j, "k", cfg.k);
        cfg.p_inter = json_or(j, "p_inter", cfg.p_inter);
        if (j.contains("p_intra")) {
            const auto& p = j.at("p_intra");
            cfg.p_intra = p.is_array() ? p.get<std::vector<double>>() : std::vector<double>{p.get<double>()};
        }
        cfg.seeds = json_or(j, "seeds", cfg.seeds);
        cfg.base_seed = json_or(j, "base_seed", cfg.base_seed);
        cfg.budget = budget_from_json(j);
        cfg.mec_max_n = json_or(j, "mec_max_n", cfg.mec_max_n);
        cfg.threads = json_or(j, "threads", cfg.threads);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("theory config: ") + e.what());
    }
    return cfg;
}

void write_theory_csv(std::ostream& out, const std::vector<TheoryRow>& rows) {
    out << "seed,n,k,p_inter,p_intra,unoriented_tedges,mec_size,tmec_size,bound\n";
    for (const TheoryRow& r : rows) {
        out << r.seed << ',' << r.n << ',' << r.k << ',' << csv_double(r.p_inter) << ',' << csv_double(r.p_intra) << ','
            << r.unoriented_t_edges << ',';
        if (r.mec_size) out << *r.mec_size;
        out << ',';
        if (r.tmec_size) out << *r.tmec_size;
        out << ',' << csv_double(r.bound) << '\n';
    }
}

// ---------------------------------------------------------------------------

std::vector<BenchmarkRow> run_synthetic_benchmark(const SyntheticConfig& cfg) {
    std::vector<std::vector<BenchmarkRow>> per_seed(static_cast<std::size_t>(std::max(cfg.seeds, 0)));
    parallel_for(per_seed.size(), cfg.threads, [&](std::size_t s) {
        const std::uint64_t seed = cfg.base_seed + s;
        Philox root(seed);
        Philox matrix_rng = root.substream(0);
        GrowthConfig growth;
        growth.n = cfg.d;
        growth.type_dist = TypeDistribution::uniform(cfg.k);
        growth.interactions = sample_interaction_matrix(cfg.k, cfg.p_inter, cfg.p_intra, matrix_rng);
        growth.seed = seed;
        growth.stream = root.substream(1).stream();
        const TypedDag t = grow_random_tdag(growth);

        BenchmarkRow proto;
        proto.seed = seed;
        proto.instance = cfg.oracle ? "oracle" : std::string(mechanism_name(cfg.mechanism));
        proto.d = cfg.d;
        proto.k = cfg.k;
        proto.p_inter = cfg.p_inter;
        proto.p_intra = cfg.p_intra;
        proto.approximate_test = !cfg.oracle && cfg.mechanism != Mechanism::linear;

        const Pdag truth = ground_truth_t_essential(t, cfg.budget, cfg.cache_dir);
        if (cfg.oracle) {
            per_seed[s] = score_methods(OracleTester(t.dag), t.types, truth, proto, cfg.budget);
            return;
        }
        Philox scm_rng = root.substream(2);
        Philox sample_rng = root.substream(3);
        const Scm scm = make_scm(t.dag, cfg.mechanism, scm_rng);
        const Dataset data = sample_scm(scm, cfg.samples, sample_rng);
        per_seed[s] = score_methods(FisherZTester(data, cfg.alpha), t.types, truth, proto, cfg.budget);
    });
    std::vector<BenchmarkRow> rows;
    for (auto& block : per_seed) rows.insert(rows.end(), block.begin(), block.end());
    return rows;
}

std::vector<BenchmarkRow> run_pseudoreal_benchmark(const PseudoRealConfig& cfg) {
    std::vector<std::vector<BenchmarkRow>> blocks;
    for (const auto& path : cfg.networks) {
        BayesNet bn;
        const std::string name = path.stem().string();
        try {
            bn = read_bif_file(path);
        } catch (const std::exception& e) {
            BenchmarkRow row;
            row.method = "-";
            row.instance = name;
            row.error = e.what();
            blocks.push_back({row});
            continue;
        }
        std::vector<std::vector<BenchmarkRow>> per_seed(static_cast<std::size_t>(std::max(cfg.seeds, 0)));
        parallel_for(per_seed.size(), cfg.threads, [&](std::size_t s) {
            const std::uint64_t seed = cfg.base_seed + s;
            // The stream is tied to the network so that two networks never share draws.
            std::uint64_t stream = 0xCBF29CE484222325ULL;
            for (unsigned char c : name) stream = fnv1a(stream, c);
            Philox root(seed, stream);
            Philox type_rng = root.substream(0);
            Philox sample_rng = root.substream(1);
            const TypedDag t(bn.dag, assign_types_topological(bn.dag, cfg.expected_type_size, type_rng));

            BenchmarkRow proto;
            proto.seed = seed;
            proto.instance = name;
            proto.d = t.dag.vertex_count();
            proto.k = t.types.type_count();
            const Pdag truth = ground_truth_t_essential(t, cfg.budget, cfg.cache_dir);
            if (cfg.oracle) {
                per_seed[s] = score_methods(OracleTester(t.dag), t.types, truth, proto, cfg.budget);
                return;
            }
            const Dataset data = ancestral_sample(bn, cfg.samples, sample_rng);
            per_seed[s] = score_methods(GSquareTester(data, cfg.alpha), t.types, truth, proto, cfg.budget);
        });
        blocks.insert(blocks.end(), per_seed.begin(), per_seed.end());
    }
    std::vector<BenchmarkRow> rows;
    for (auto& block : blocks) rows.insert(rows.end(), block.begin(), block.end());
    return rows;
}

SyntheticConfig synthetic_config_from_json(const nlohmann::json& j) {
    SyntheticConfig cfg;
    try {
        cfg.d = json_or(j, "d", cfg.d);
        cfg.k = json_or(j, "k", cfg.k);
        cfg.p_inter = json_or(j, "p_inter", cfg.p_inter);
        cfg.p_intra = json_or(j, "p_intra", cfg.p_intra);
        cfg.seeds = json_or(j, "seeds", cfg.seeds);
        cfg.base_seed = json_or(j, "base_seed", cfg.base_seed);
        cfg.samples = json_or(j, "samples", cfg.samples);
        if (j.contains("mechanism")) cfg.mechanism = parse_mechanism(j.at("mechanism").get<std::string>());
        cfg.alpha = json_or(j, "alpha", cfg.alpha);
        cfg.oracle = json_or(j, "oracle", cfg.oracle);
        cfg.budget = budget_from_json(j);
        cfg.threads = json_or(j, "threads", cfg.threads);
        if (j.contains("cache_dir")) cfg.cache_dir = j.at("cache_dir").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("benchmark config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ValidationError(std::string("benchmark config: ") + e.what());
    }
    return cfg;
}

PseudoRealConfig pseudoreal_config_from_json(const nlohmann::json& j) {
    PseudoRealConfig cfg;
    try {
        for (const auto& p : j.at("networks")) cfg.networks.emplace_back(p.get<std::string>());
        cfg.seeds = json_or(j, "seeds", cfg.seeds);
        cfg.base_seed = json_or(j, "base_seed", cfg.base_seed);
        cfg.samples = json_or(j, "samples", cfg.samples);
        cfg.expected_type_size = json_or(j, "expected_type_size", cfg.expected_type_size);
        cfg.alpha = json_or(j, "alpha", cfg.alpha);
        cfg.oracle = json_or(j, "oracle", cfg.oracle);
        cfg.budget = budget_from_json(j);
        cfg.threads = json_or(j, "threads", cfg.threads);
        if (j.contains("cache_dir")) cfg.cache_dir = j.at("cache_dir").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("benchmark config: ") + e.what());
    }
    return cfg;
}

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
    out << "method,seed,instance,d,k,p_inter,p_intra,shd,shd_improvement_vs_pc,runtime_ms,used_fallback,"
           "type_consistent,approximate_test,error\n";
    for (const BenchmarkRow& r : rows) {
        std::string error = r.error;
        for (char& c : error)
            if (c == ',' || c == '\n') c = ';';
        out << r.method << ',' << r.seed << ',' << r.instance << ',' << r.d << ',' << r.k << ','
            << csv_double(r.p_inter) << ',' << csv_double(r.p_intra) << ',' << r.shd << ',' << r.shd_improvement_vs_pc
            << ',' << csv_double(r.runtime_ms) << ',' << r.used_fallback << ',' << r.type_consistent << ','
            << r.approximate_test << ',' << error << '\n';
    }
}

std::map<std::string, double> mean_shd_by_method(const std::vector<BenchmarkRow>& rows) {
    std::map<std::string, std::pair<double, int>> acc;
    for (const BenchmarkRow& r : rows)
        if (r.error.empty()) {
            acc[r.method].first += r.shd;
            ++acc[r.method].second;
        }
    std::map<std::string, double> out;
    for (const auto& [m, sc] : acc) out[m] = sc.first / sc.second;
    return out;
}

}  // namespace tdag
