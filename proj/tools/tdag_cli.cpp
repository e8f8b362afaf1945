// tdag command-line front end.
//
// Exit codes: 0 success, 1 other failure, 2 validation error, 3 enumeration budget exceeded.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tdag/bench.hpp"
#include "tdag/ci_tests.hpp"
#include "tdag/dataset.hpp"
#include "tdag/discovery.hpp"
#include "tdag/errors.hpp"
#include "tdag/graph_io.hpp"
#include "tdag/random_tdag.hpp"
#include "tdag/rng.hpp"
#include "tdag/simulate.hpp"

namespace fs = std::filesystem;
using namespace tdag;

namespace {

struct Common {
    std::uint64_t seed = 0;
    double alpha = 0.01;
    std::size_t budget = EnumerationBudget{}.max_members;
    std::string method = "tpc-majority";
    std::string mechanism = "linear";
    bool oracle = false;
    std::string out;
};

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    try {
        return nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

fs::path default_sidecar(const fs::path& csv) { return fs::path(csv.string() + ".columns.json"); }

DiscoveryResult run_method(const std::string& method, const CiTester& tester, const TypeMap& types,
                           EnumerationBudget budget) {
    if (method == "pc") return pc(tester);
    if (method == "pc-tprop") return pc_with_tpropagation(tester, types, budget);
    if (method == "tpc-naive") return tpc_naive(tester, types, budget);
    return tpc_majority(tester, types, budget);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Typed DAGs and type-consistent causal discovery"};
    app.require_subcommand(1);
    Common c;

    auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", c.seed, "RNG seed"); };
    auto add_budget = [&](CLI::App* sub) {
        sub->add_option("--budget", c.budget, "Enumeration member cap")->check(CLI::PositiveNumber);
    };
    auto add_out = [&](CLI::App* sub) { sub->add_option("-o,--out", c.out, "Output file (default stdout)"); };
    const std::vector<std::string> methods{"pc", "pc-tprop", "tpc-naive", "tpc-majority"};
    const std::vector<std::string> mechanisms{"linear", "anm", "nn"};

    // generate
    int n = 20, k = 5;
    double p_inter = 0.2, p_intra = 0.0;
    auto* gen = app.add_subcommand("generate", "Random consistent t-DAG as graph JSON");
    gen->add_option("-n,--vertices", n)->check(CLI::NonNegativeNumber);
    gen->add_option("-k,--types", k)->check(CLI::PositiveNumber);
    gen->add_option("--p-inter", p_inter)->check(CLI::Range(0.0, 1.0));
    gen->add_option("--p-intra", p_intra)->check(CLI::Range(0.0, 1.0));
    add_seed(gen);
    add_out(gen);

    // simulate
    std::string graph_path, bif_path, types_out, scm_out;
    int samples = 10'000;
    double type_size = 5.0;
    auto* sim = app.add_subcommand("simulate", "Sample a dataset from a t-DAG (SCM) or a BIF network");
    auto* sim_graph = sim->add_option("--graph", graph_path, "Typed DAG JSON")->check(CLI::ExistingFile);
    auto* sim_bif = sim->add_option("--bif", bif_path, "BIF network")->check(CLI::ExistingFile);
    sim_graph->excludes(sim_bif);
    sim->add_option("--mechanism", c.mechanism)->check(CLI::IsMember(mechanisms));
    sim->add_option("--samples", samples)->check(CLI::PositiveNumber);
    sim->add_option("--type-size", type_size, "Expected type size when typing a BIF network")
        ->check(CLI::Range(1.0, 1e9));
    sim->add_option("--types-out", types_out, "Write the typed BIF structure as graph JSON");
    sim->add_option("--scm-out", scm_out, "Write the sampled SCM as JSON");
    sim->add_option("-o,--out", c.out, "Output CSV; column metadata goes to <out>.columns.json")->required();
    add_seed(sim);

    // discover
    std::string data_path, columns_path, types_path;
    auto* dis = app.add_subcommand("discover", "Learn a graph from data or from a d-separation oracle");
    dis->add_option("--data", data_path, "Dataset CSV")->check(CLI::ExistingFile);
    dis->add_option("--columns", columns_path, "Column metadata (default <data>.columns.json if present)");
    dis->add_option("--types", types_path, "Graph JSON carrying the type map (and the truth for --oracle)")
        ->required()
        ->check(CLI::ExistingFile);
    dis->add_option("--method", c.method)->check(CLI::IsMember(methods));
    dis->add_option("--alpha", c.alpha)->check(CLI::Range(0.0, 1.0));
    dis->add_flag("--oracle", c.oracle, "Use the d-separation tester on the DAG in --types");
    add_budget(dis);
    add_out(dis);

    // eval
    std::string est_path, truth_path;
    bool half = false;
    auto* ev = app.add_subcommand("eval", "Structural Hamming distance between two graphs");
    ev->add_option("estimate", est_path)->required()->check(CLI::ExistingFile);
    ev->add_option("truth", truth_path)->required()->check(CLI::ExistingFile);
    ev->add_flag("--half-undirected", half, "Score directed vs undirected as 0.5");

    // theory
    std::string config_path;
    int seeds = -1;
    unsigned threads = 0;
    auto* th = app.add_subcommand("theory", "Unoriented t-edge sweep over random t-DAGs, CSV out");
    th->add_option("--config", config_path, "JSON config")->check(CLI::ExistingFile);
    th->add_option("--seeds", seeds)->check(CLI::PositiveNumber);
    th->add_option("--threads", threads);
    add_seed(th);
    add_budget(th);
    add_out(th);

    // bench
    auto* be = app.add_subcommand("bench", "Synthetic or BIF benchmark of the four learners, CSV out");
    be->add_option("--config", config_path, "JSON config; a \"networks\" key selects the BIF benchmark")
        ->check(CLI::ExistingFile);
    be->add_option("--mechanism", c.mechanism)->check(CLI::IsMember(mechanisms));
    be->add_option("--alpha", c.alpha)->check(CLI::Range(0.0, 1.0));
    be->add_option("--seeds", seeds)->check(CLI::PositiveNumber);
    be->add_option("--samples", samples)->check(CLI::PositiveNumber);
    be->add_option("--threads", threads);
    be->add_flag("--oracle", c.oracle, "Use the d-separation tester instead of data");
    add_seed(be);
    add_budget(be);
    add_out(be);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const EnumerationBudget budget{c.budget};
    try {
        if (*gen) {
            Philox rng(c.seed);
            Philox matrix_rng = rng.substream(0);
            GrowthConfig cfg{n, TypeDistribution::uniform(k), sample_interaction_matrix(k, p_inter, p_intra, matrix_rng),
                             c.seed, rng.substream(1).stream()};
            emit(c.out, to_json(grow_random_tdag(cfg)).dump(2) + "\n");
        } else if (*sim) {
            if (graph_path.empty() == bif_path.empty()) throw ValidationError("simulate needs one of --graph or --bif");
            Philox rng(c.seed);
            Philox model_rng = rng.substream(0), sample_rng = rng.substream(1);
            std::optional<Dataset> data;
            if (!graph_path.empty()) {
                const TypedDag t = typed_dag_from_document(read_graph_file(graph_path));
                const Scm scm = make_scm(t.dag, parse_mechanism(c.mechanism), model_rng);
                if (!scm_out.empty()) write_json_file(scm_out, scm_to_json(scm));
                data = sample_scm(scm, samples, sample_rng);
            } else {
                const BayesNet bn = read_bif_file(bif_path);
                if (!types_out.empty()) {
                    const Dag& dag = bn.dag;
                    write_json_file(types_out, to_json(TypedDag(dag, assign_types_topological(dag, type_size, model_rng))));
                }
                data = ancestral_sample(bn, samples, sample_rng);
            }
            write_dataset(*data, c.out, default_sidecar(c.out));
        } else if (*dis) {
            const GraphDocument doc = read_graph_file(types_path);
            if (!doc.types) throw ValidationError(types_path + " has no type map");
            std::unique_ptr<CiTester> tester;
            std::optional<Dataset> data;
            if (c.oracle) {
                tester = oracle_tester(typed_dag_from_document(doc).dag);
            } else {
                if (data_path.empty()) throw ValidationError("discover needs --data unless --oracle is given");
                fs::path side = columns_path;
                if (side.empty() && fs::exists(default_sidecar(data_path))) side = default_sidecar(data_path);
                data = read_dataset(data_path, side);
                const auto& cols = data->columns();
                const bool discrete = std::all_of(cols.begin(), cols.end(),
                                                  [](const Column& col) { return col.kind == ColumnKind::discrete; });
                if (discrete)
                    tester = std::make_unique<GSquareTester>(*data, c.alpha);
                else
                    tester = std::make_unique<FisherZTester>(*data, c.alpha);
            }
            if (tester->variable_count() != doc.types->vertex_count())
                throw ValidationError("type map covers " + std::to_string(doc.types->vertex_count()) + " vertices, data has " +
                                      std::to_string(tester->variable_count()));
            const DiscoveryResult r = run_method(c.method, *tester, *doc.types, budget);
            nlohmann::json j = to_json(r.graph, &*doc.types);
            j["method"] = c.method;
            j["used_fallback"] = r.used_fallback;
            j["diagnostics"] = {{"ci_tests", r.diagnostics.ci_tests},
                                {"forks_examined", r.diagnostics.forks_examined},
                                {"t_edges_oriented_by_evidence", r.diagnostics.t_edges_oriented_by_evidence},
                                {"v_structure_conflicts", r.diagnostics.v_structure_conflicts}};
            emit(c.out, j.dump(2) + "\n");
        } else if (*ev) {
            const Pdag est = read_graph_file(est_path).graph, truth = read_graph_file(truth_path).graph;
            if (half)
                std::cout << shd(est, truth, ShdConvention::half_undirected) << "\n";
            else
                std::cout << shd(est, truth) << "\n";
        } else if (*th) {
            TheoryConfig cfg = config_path.empty() ? TheoryConfig{} : theory_config_from_json(read_json(config_path));
            if (seeds > 0) cfg.seeds = seeds;
            if (th->count("--seed")) cfg.base_seed = c.seed;
            if (th->count("--budget")) cfg.budget = budget;
            if (th->count("--threads")) cfg.threads = threads;
            std::ostringstream csv;
            write_theory_csv(csv, run_theory_experiment(cfg));
            emit(c.out, csv.str());
        } else if (*be) {
            const nlohmann::json j = config_path.empty() ? nlohmann::json::object() : read_json(config_path);
            std::vector<BenchmarkRow> rows;
            auto apply = [&](auto& cfg) {
                if (seeds > 0) cfg.seeds = seeds;
                if (be->count("--samples")) cfg.samples = samples;
                if (be->count("--seed")) cfg.base_seed = c.seed;
                if (be->count("--alpha")) cfg.alpha = c.alpha;
                if (be->count("--budget")) cfg.budget = budget;
                if (be->count("--threads")) cfg.threads = threads;
                if (c.oracle) cfg.oracle = true;
            };
            if (j.contains("networks")) {
                PseudoRealConfig cfg = pseudoreal_config_from_json(j);
                apply(cfg);
                rows = run_pseudoreal_benchmark(cfg);
            } else {
                SyntheticConfig cfg = synthetic_config_from_json(j);
                apply(cfg);
                if (be->count("--mechanism")) cfg.mechanism = parse_mechanism(c.mechanism);
                rows = run_synthetic_benchmark(cfg);
            }
            std::ostringstream csv;
            write_benchmark_csv(csv, rows);
            emit(c.out, csv.str());
            for (const auto& [method, mean] : mean_shd_by_method(rows))
                std::cerr << method << ": mean shd " << mean << "\n";
        }
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const TypeInconsistency& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateData& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
