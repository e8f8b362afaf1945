#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "tdag/dataset.hpp"
#include "tdag/graph.hpp"
#include "tdag/rng.hpp"

namespace tdag {

enum class Mechanism { linear, anm, nn };

/// One structural equation. Parents are dag.parents(v) in sorted order.
///   linear: x = w . pa + noise
///   anm:    x = w_out . leaky_relu(W_in pa) + noise   (10 hidden units, slope 0.25)
///   nn:     x = w_out . tanh(W_in [pa; noise])        (20 hidden units)
/// Biases are zero.
struct NodeEquation {
    Mechanism kind = Mechanism::linear;
    Eigen::VectorXd weights;  // linear
    Eigen::MatrixXd w_in;     // hidden x inputs
    Eigen::VectorXd w_out;    // hidden
    double noise_variance = 1.0;
};

struct Scm {
    Dag dag;
    std::vector<NodeEquation> nodes;

    /// Throws ValidationError on shape mismatches or non-positive variances.
    void validate() const;
};

inline constexpr int anm_hidden_units = 10;
inline constexpr int nn_hidden_units = 20;
inline constexpr double leaky_relu_slope = 0.25;

/// Draws parameters: noise variance U[1,2] for sources and U[0.01,0.02]
/// otherwise, linear weights uniform on [-1,-0.25] u [0.25,1], network weights N(0,1).
Scm make_scm(const Dag& dag, Mechanism kind, Philox& rng);

/// Ancestral sampling in topological order; one column per vertex.
Dataset sample_scm(const Scm& scm, int n, Philox& rng);

nlohmann::json scm_to_json(const Scm& scm);
Scm scm_from_json(const nlohmann::json& j);

Mechanism parse_mechanism(std::string_view name);
std::string_view mechanism_name(Mechanism kind);

/// Discrete variable with its CPT. Rows enumerate parent configurations with
/// the last parent varying fastest; each row has one entry per state.
struct BnVariable {
    std::string name;
    std::vector<std::string> states;
    std::vector<int> parents;
    std::vector<double> cpt;

    int cardinality() const noexcept { return static_cast<int>(states.size()); }
};

struct BayesNet {
    std::string name;
    Dag dag;
    std::vector<BnVariable> variables;

    /// Row count must equal the product of parent cardinalities; rows must sum to 1 within 1e-6.
    void validate() const;
    std::vector<Column> columns() const;
};

/// BIF 0.15. Throws ParseError (with line/column) on syntax errors and
/// ValidationError on bad tables or cyclic structure.
BayesNet parse_bif(std::string_view text);
BayesNet read_bif_file(const std::filesystem::path& path);
std::string serialize_bif(const BayesNet& bn);

Dataset ancestral_sample(const BayesNet& bn, int n, Philox& rng);

/// Walks dag.topological_order() and starts a new type at each position with
/// probability 1/expected_size (always at the first). Types are contiguous
/// blocks of that order, so the result is always type-consistent.
TypeMap assign_types_topological(const Dag& dag, double expected_size, Philox& rng);

}  // namespace tdag
