#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

namespace tdag {

enum class ColumnKind { continuous, discrete };

struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::continuous;
    /// Number of categories for discrete columns, 0 otherwise.
    int cardinality = 0;

    bool operator==(const Column&) const = default;
};

/// n x d sample table. Discrete values are stored as doubles holding integers
/// in [0, cardinality).
class Dataset {
public:
    Dataset() = default;
    /// Throws ValidationError on shape mismatch, no rows, non-finite values or
    /// discrete values out of range.
    Dataset(Eigen::MatrixXd values, std::vector<Column> columns);

    Eigen::Index rows() const noexcept { return values_.rows(); }
    int variable_count() const noexcept { return static_cast<int>(columns_.size()); }
    const Eigen::MatrixXd& values() const noexcept { return values_; }
    const std::vector<Column>& columns() const noexcept { return columns_; }
    const Column& column(int j) const { return columns_[j]; }
    bool all_continuous() const;
    bool all_discrete() const;

private:
    Eigen::MatrixXd values_;
    std::vector<Column> columns_;
};

/// CSV with a header of names; sidecar JSON {"columns": [{name, kind, cardinality}]}.
void write_dataset(const Dataset& data, const std::filesystem::path& csv, const std::filesystem::path& sidecar);
/// Without a sidecar every column is read as continuous.
Dataset read_dataset(const std::filesystem::path& csv, const std::filesystem::path& sidecar = {});

nlohmann::json columns_to_json(const std::vector<Column>& columns);
std::vector<Column> columns_from_json(const nlohmann::json& j);

}  // namespace tdag
