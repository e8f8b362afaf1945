#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tdag/graph.hpp"
#include "tdag/rng.hpp"

namespace tdag {

/// k x k edge probabilities between types. Off the diagonal at most one of
/// p(i,j), p(j,i) is nonzero, which makes every generated graph type-consistent.
class InteractionMatrix {
public:
    InteractionMatrix() = default;
    /// Throws std::invalid_argument on a non-square matrix, entries outside
    /// [0,1], or a pair with both directions positive.
    explicit InteractionMatrix(Eigen::MatrixXd p);

    int k() const noexcept { return static_cast<int>(p_.rows()); }
    double operator()(int from_type, int to_type) const { return p_(from_type, to_type); }
    const Eigen::MatrixXd& matrix() const noexcept { return p_; }

private:
    Eigen::MatrixXd p_;
};

/// Categorical distribution over types. Entries in (0,1) summing to 1 (tolerance 1e-9).
class TypeDistribution {
public:
    TypeDistribution() = default;
    explicit TypeDistribution(Eigen::VectorXd probs);
    static TypeDistribution uniform(int k);

    int k() const noexcept { return static_cast<int>(probs_.size()); }
    double operator[](int t) const { return probs_[t]; }
    const Eigen::VectorXd& probs() const noexcept { return probs_; }

private:
    Eigen::VectorXd probs_;
};

struct GrowthConfig {
    int n = 0;
    TypeDistribution type_dist;
    InteractionMatrix interactions;
    std::uint64_t seed = 0;
    /// Philox stream; experiments use one stream per graph index.
    std::uint64_t stream = 0;
};

/// For every unordered type pair one direction gets p_inter (fair coin), the
/// other 0. Diagonal entries are p_intra.
InteractionMatrix sample_interaction_matrix(int k, double p_inter, double p_intra, Philox& rng);

/// Growing t-DAG: vertex m gets a type from `type_dist`, then an edge from
/// every earlier vertex v with probability p(T(v), T(m)). Index order is a
/// topological order.
TypedDag grow_random_tdag(const GrowthConfig& cfg);

/// Parameters of one ordered type pair (i, j) with p_ij > 0.
struct PairRate {
    double p_i = 0.0;
    double p_j = 0.0;
    double p_ij = 0.0;
    double p_jj = 0.0;
};

/// r = -(1/3) max(ln(1 - p_i), ln(1 - p_j p_ij (1 - p_jj))).
double convergence_rate(const PairRate& pair);

/// min(1, 4 sum_pairs exp(-r n)): upper bound on P(U > 0) where U counts
/// unoriented t-edges. Pairs with p_ij = 0 are skipped. Throws
/// std::invalid_argument for n < 3 or parameters out of range.
double theorem1_bound(std::span<const PairRate> pairs, int n);

/// Ordered pairs (i, j), i != j, p_ij > 0, read off a growth configuration.
std::vector<PairRate> pair_rates(const TypeDistribution& types, const InteractionMatrix& a);

/// Type pairs whose t-edge has at least one undirected edge.
int unoriented_t_edges(const Pdag& t_essential, const TypeMap& types);

}  // namespace tdag
