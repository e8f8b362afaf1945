#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tdag/equivalence.hpp"
#include "tdag/graph.hpp"
#include "tdag/simulate.hpp"

namespace tdag {

enum class ShdConvention {
    /// Every differing vertex pair counts 1.
    full,
    /// Directed vs undirected counts 0.5; missing, extra and reversed count 1.
    half_undirected,
};

/// Structural Hamming distance over vertex pairs. Throws std::invalid_argument
/// on a vertex-count mismatch.
int shd(const Pdag& estimate, const Pdag& truth);
double shd(const Pdag& estimate, const Pdag& truth, ShdConvention convention);

/// Runs task(i) for i in [0, count) on `threads` workers (0 = hardware
/// concurrency). Each task writes only its own slot, so results do not depend
/// on the worker count. The first exception is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task);

/// t-essential graph of a typed DAG through the enumeration oracle, falling
/// back to t_propagation(essential_graph) when the oracle runs out of budget.
/// With a cache directory, results are stored as graph JSON under a hash of
/// the typed DAG.
Pdag ground_truth_t_essential(const TypedDag& tdag, EnumerationBudget budget,
                              const std::filesystem::path& cache_dir = {});

/// FNV-1a over the edge list and type assignment.
std::uint64_t typed_dag_hash(const TypedDag& tdag);

// ---------------------------------------------------------------------------

struct TheoryConfig {
    std::vector<int> n_list{10, 20, 40, 70, 100};
    int k = 10;
    double p_inter = 0.2;
    std::vector<double> p_intra{0.0};
    int seeds = 100;
    std::uint64_t base_seed = 0;
    EnumerationBudget budget{};
    /// MEC sizes are only enumerated up to this many vertices.
    int mec_max_n = 15;
    unsigned threads = 0;
};

struct TheoryRow {
    std::uint64_t seed = 0;
    int n = 0;
    int k = 0;
    double p_inter = 0;
    double p_intra = 0;
    int unoriented_t_edges = 0;
    std::optional<std::size_t> mec_size;
    std::optional<std::size_t> tmec_size;
    double bound = 1.0;
};

/// Seeds are base_seed .. base_seed + seeds - 1. Rows come out ordered by
/// (p_intra, n, seed).
std::vector<TheoryRow> run_theory_experiment(const TheoryConfig& cfg);
TheoryConfig theory_config_from_json(const nlohmann::json& j);
void write_theory_csv(std::ostream& out, const std::vector<TheoryRow>& rows);

// ---------------------------------------------------------------------------

inline const std::vector<std::string>& benchmark_methods() {
    static const std::vector<std::string> names{"pc", "pc-tprop", "tpc-naive", "tpc-majority"};
    return names;
}

struct BenchmarkRow {
    std::string method;
    std::uint64_t seed = 0;
    /// Network name for pseudo-real runs, mechanism for synthetic ones.
    std::string instance;
    int d = 0;
    int k = 0;
    double p_inter = 0;
    double p_intra = 0;
    int shd = 0;
    int shd_improvement_vs_pc = 0;
    double runtime_ms = 0;
    bool used_fallback = false;
    bool type_consistent = true;
    /// Fisher-z on non-linear data.
    bool approximate_test = false;
    std::string error;
};

struct SyntheticConfig {
    int d = 20;
    int k = 5;
    double p_inter = 0.2;
    double p_intra = 0.0;
    int seeds = 20;
    std::uint64_t base_seed = 0;
    int samples = 10'000;
    Mechanism mechanism = Mechanism::linear;
    double alpha = 0.01;
    /// d-separation tester instead of data.
    bool oracle = false;
    EnumerationBudget budget{};
    unsigned threads = 0;
    std::filesystem::path cache_dir;
};

struct PseudoRealConfig {
    std::vector<std::filesystem::path> networks;
    int seeds = 10;
    std::uint64_t base_seed = 0;
    int samples = 20'000;
    double expected_type_size = 5.0;
    double alpha = 0.01;
    bool oracle = false;
    EnumerationBudget budget{};
    unsigned threads = 0;
    std::filesystem::path cache_dir;
};

/// Four rows (one per method) per seed, ordered by seed then method.
std::vector<BenchmarkRow> run_synthetic_benchmark(const SyntheticConfig& cfg);
/// Four rows per (network, seed). A network that fails to load yields one row
/// with the error and method "-".
std::vector<BenchmarkRow> run_pseudoreal_benchmark(const PseudoRealConfig& cfg);

SyntheticConfig synthetic_config_from_json(const nlohmann::json& j);
PseudoRealConfig pseudoreal_config_from_json(const nlohmann::json& j);
void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows);

/// Mean shd per method over rows without errors.
std::map<std::string, double> mean_shd_by_method(const std::vector<BenchmarkRow>& rows);

}  // namespace tdag
