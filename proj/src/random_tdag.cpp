#include "tdag/random_tdag.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace tdag {

InteractionMatrix::InteractionMatrix(Eigen::MatrixXd p) : p_(std::move(p)) {
    if (p_.rows() != p_.cols()) throw std::invalid_argument("interaction matrix must be square");
    if ((p_.array() < 0.0).any() || (p_.array() > 1.0).any() || !p_.allFinite())
        throw std::invalid_argument("interaction probabilities must lie in [0,1]");
    for (Eigen::Index i = 0; i < p_.rows(); ++i)
        for (Eigen::Index j = i + 1; j < p_.cols(); ++j)
            if (p_(i, j) > 0.0 && p_(j, i) > 0.0)
                throw std::invalid_argument("interaction matrix allows edges both ways between two types");
}

TypeDistribution::TypeDistribution(Eigen::VectorXd probs) : probs_(std::move(probs)) {
    if (probs_.size() == 0) throw std::invalid_argument("type distribution is empty");
    if ((probs_.array() <= 0.0).any() || (probs_.size() > 1 && (probs_.array() >= 1.0).any()))
        throw std::invalid_argument("type probabilities must lie in (0,1)");
    if (std::abs(probs_.sum() - 1.0) > 1e-9) throw std::invalid_argument("type probabilities must sum to 1");
}

TypeDistribution TypeDistribution::uniform(int k) {
    if (k < 1) throw std::invalid_argument("need at least one type");
    return TypeDistribution(Eigen::VectorXd::Constant(k, 1.0 / k));
}

InteractionMatrix sample_interaction_matrix(int k, double p_inter, double p_intra, Philox& rng) {
    if (k < 1) throw std::invalid_argument("need at least one type");
    if (p_inter < 0 || p_inter > 1 || p_intra < 0 || p_intra > 1)
        throw std::invalid_argument("probabilities must lie in [0,1]");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k, k);
    a.diagonal().setConstant(p_intra);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            if (rng.bernoulli(0.5))
                a(i, j) = p_inter;
            else
                a(j, i) = p_inter;
        }
    return InteractionMatrix(std::move(a));
}

TypedDag grow_random_tdag(const GrowthConfig& cfg) {
    if (cfg.n < 0) throw std::invalid_argument("vertex count must be non-negative");
    const int k = cfg.type_dist.k();
    if (cfg.interactions.k() != k) throw std::invalid_argument("type distribution and interaction matrix disagree on k");
    Philox rng(cfg.seed, cfg.stream);
    std::vector<int> types(cfg.n);
    std::vector<Edge> edges;
    for (int m = 0; m < cfg.n; ++m) {
        types[m] = rng.categorical(cfg.type_dist.probs());
        for (int v = 0; v < m; ++v)
            if (rng.bernoulli(cfg.interactions(types[v], types[m]))) edges.push_back({v, m});
    }
    return TypedDag(Dag(cfg.n, edges), TypeMap(std::move(types), k));
}

double convergence_rate(const PairRate& pair) {
    const double a = std::log1p(-pair.p_i);
    const double b = std::log1p(-pair.p_j * pair.p_ij * (1.0 - pair.p_jj));
    return -std::max(a, b) / 3.0;
}

double theorem1_bound(std::span<const PairRate> pairs, int n) {
    if (n < 3) throw std::invalid_argument("bound needs n >= 3");
    double sum = 0.0;
    for (const PairRate& pr : pairs) {
        auto open = [](double p) { return p > 0.0 && p < 1.0; };
        auto closed = [](double p) { return p >= 0.0 && p <= 1.0; };
        if (!open(pr.p_i) || !open(pr.p_j) || !closed(pr.p_ij) || !closed(pr.p_jj))
            throw std::invalid_argument("bound parameters out of range");
        if (pr.p_ij == 0.0) continue;
        sum += std::exp(-convergence_rate(pr) * n);
    }
    return std::min(1.0, 4.0 * sum);
}

std::vector<PairRate> pair_rates(const TypeDistribution& types, const InteractionMatrix& a) {
    if (types.k() != a.k()) throw std::invalid_argument("type distribution and interaction matrix disagree on k");
    std::vector<PairRate> out;
    for (int i = 0; i < a.k(); ++i)
        for (int j = 0; j < a.k(); ++j)
            if (i != j && a(i, j) > 0.0) out.push_back({types[i], types[j], a(i, j), a(j, j)});
    return out;
}

int unoriented_t_edges(const Pdag& t_essential, const TypeMap& types) {
    std::set<std::pair<int, int>> pairs;
    for (const Edge& e : t_essential.undirected_edges()) {
        int a = types(e.from), b = types(e.to);
        if (a != b) pairs.insert(std::minmax(a, b));
    }
    return static_cast<int>(pairs.size());
}

}  // namespace tdag
