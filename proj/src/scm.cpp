#include <cmath>
#include <stdexcept>

#include "tdag/errors.hpp"
#include "tdag/simulate.hpp"

namespace tdag {

namespace {

Eigen::MatrixXd standard_normal(Eigen::Index rows, Eigen::Index cols, Philox& rng) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.normal();
    return m;
}

Eigen::MatrixXd json_to_matrix(const nlohmann::json& j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(j[r].size()) != cols) throw ValidationError("ragged matrix in SCM JSON");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(std::move(row));
    }
    return out;
}

Eigen::VectorXd json_to_vector(const nlohmann::json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = j[i].get<double>();
    return v;
}

}  // namespace

Mechanism parse_mechanism(std::string_view name) {
    if (name == "linear") return Mechanism::linear;
    if (name == "anm") return Mechanism::anm;
    if (name == "nn") return Mechanism::nn;
    throw std::invalid_argument("unknown mechanism '" + std::string(name) + "'");
}

std::string_view mechanism_name(Mechanism kind) {
    switch (kind) {
        case Mechanism::linear: return "linear";
        case Mechanism::anm: return "anm";
        case Mechanism::nn: return "nn";
    }
    return "linear";
}

void Scm::validate() const {
    if (static_cast<int>(nodes.size()) != dag.vertex_count()) throw ValidationError("one equation per vertex required");
    for (int v = 0; v < dag.vertex_count(); ++v) {
        const NodeEquation& eq = nodes[v];
        const auto parents = static_cast<Eigen::Index>(dag.parents(v).size());
        if (!(eq.noise_variance > 0)) throw ValidationError("noise variance must be positive");
        switch (eq.kind) {
            case Mechanism::linear:
                if (eq.weights.size() != parents) throw ValidationError("weight count differs from parent count");
                break;
            case Mechanism::anm:
            case Mechanism::nn: {
                const Eigen::Index inputs = parents + (eq.kind == Mechanism::nn ? 1 : 0);
                if (eq.w_in.cols() != inputs || eq.w_out.size() != eq.w_in.rows())
                    throw ValidationError("network shape does not match parent count");
                break;
            }
        }
    }
}

Scm make_scm(const Dag& dag, Mechanism kind, Philox& rng) {
    Scm scm{dag, std::vector<NodeEquation>(dag.vertex_count())};
    for (int v = 0; v < dag.vertex_count(); ++v) {
        NodeEquation& eq = scm.nodes[v];
        eq.kind = kind;
        const auto parents = static_cast<Eigen::Index>(dag.parents(v).size());
        eq.noise_variance = parents == 0 ? rng.uniform(1.0, 2.0) : rng.uniform(0.01, 0.02);
        switch (kind) {
            case Mechanism::linear:
                eq.weights.resize(parents);
                for (Eigen::Index p = 0; p < parents; ++p) {
                    const double magnitude = rng.uniform(0.25, 1.0);
                    eq.weights[p] = rng.bernoulli(0.5) ? magnitude : -magnitude;
                }
                break;
            case Mechanism::anm:
                eq.w_in = standard_normal(anm_hidden_units, parents, rng);
                eq.w_out = standard_normal(anm_hidden_units, 1, rng);
                break;
            case Mechanism::nn:
                eq.w_in = standard_normal(nn_hidden_units, parents + 1, rng);
                eq.w_out = standard_normal(nn_hidden_units, 1, rng);
                break;
        }
    }
    return scm;
}

Dataset sample_scm(const Scm& scm, int n, Philox& rng) {
    if (n < 1) throw std::invalid_argument("sample count must be positive");
    scm.validate();
    const int d = scm.dag.vertex_count();
    Eigen::MatrixXd x(n, d);
    for (int v : scm.dag.topological_order()) {
        const NodeEquation& eq = scm.nodes[v];
        const auto& pa = scm.dag.parents(v);
        Eigen::VectorXd noise(n);
        const double sd = std::sqrt(eq.noise_variance);
        for (int r = 0; r < n; ++r) noise[r] = sd * rng.normal();
        const Eigen::MatrixXd inputs = x(Eigen::all, pa);
        switch (eq.kind) {
            case Mechanism::linear:
                x.col(v) = inputs * eq.weights + noise;
                break;
            case Mechanism::anm: {
                Eigen::MatrixXd h = inputs * eq.w_in.transpose();
                h = h.cwiseMax(leaky_relu_slope * h);
                x.col(v) = h * eq.w_out + noise;
                break;
            }
            case Mechanism::nn: {
                Eigen::MatrixXd in(n, inputs.cols() + 1);
                in << inputs, noise;
                x.col(v) = (in * eq.w_in.transpose()).array().tanh().matrix() * eq.w_out;
                break;
            }
        }
    }
    std::vector<Column> cols;
    for (int v = 0; v < d; ++v) cols.push_back({"X" + std::to_string(v), ColumnKind::continuous, 0});
    return Dataset(std::move(x), std::move(cols));
}

nlohmann::json scm_to_json(const Scm& scm) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const NodeEquation& eq : scm.nodes) {
        nlohmann::json node{{"mechanism", mechanism_name(eq.kind)}, {"noise_variance", eq.noise_variance}};
        if (eq.kind == Mechanism::linear) {
            node["weights"] = std::vector<double>(eq.weights.data(), eq.weights.data() + eq.weights.size());
        } else {
            node["w_in"] = matrix_to_json(eq.w_in);
            node["w_out"] = std::vector<double>(eq.w_out.data(), eq.w_out.data() + eq.w_out.size());
        }
        nodes.push_back(std::move(node));
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const Edge& e : scm.dag.edges()) edges.push_back({e.from, e.to});
    return {{"d", scm.dag.vertex_count()}, {"edges", edges}, {"nodes", nodes}};
}

Scm scm_from_json(const nlohmann::json& j) {
    Scm scm;
    try {
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
        try {
            scm.dag = Dag(j.at("d").get<int>(), edges);
        } catch (const std::invalid_argument& e) {
            throw ValidationError(e.what());
        }
        for (const auto& node : j.at("nodes")) {
            NodeEquation eq;
            eq.kind = parse_mechanism(node.at("mechanism").get<std::string>());
            eq.noise_variance = node.at("noise_variance").get<double>();
            if (eq.kind == Mechanism::linear) {
                eq.weights = json_to_vector(node.at("weights"));
            } else {
                eq.w_in = json_to_matrix(node.at("w_in"));
                eq.w_out = json_to_vector(node.at("w_out"));
                if (eq.w_in.rows() == 0) eq.w_in.resize(static_cast<Eigen::Index>(eq.w_out.size()), 0);
            }
            scm.nodes.push_back(std::move(eq));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("SCM JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    scm.validate();
    return scm;
}

}  // namespace tdag
