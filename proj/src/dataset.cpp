#include "tdag/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tdag/errors.hpp"

namespace tdag {

Dataset::Dataset(Eigen::MatrixXd values, std::vector<Column> columns)
    : values_(std::move(values)), columns_(std::move(columns)) {
    if (values_.cols() != static_cast<Eigen::Index>(columns_.size()))
        throw ValidationError("column count does not match the value table");
    if (values_.rows() < 1) throw ValidationError("dataset has no rows");
    if (!values_.allFinite()) throw ValidationError("dataset contains non-finite values");
    for (int j = 0; j < variable_count(); ++j) {
        const Column& c = columns_[j];
        if (c.kind != ColumnKind::discrete) continue;
        if (c.cardinality < 1) throw ValidationError("discrete column '" + c.name + "' needs a cardinality");
        auto col = values_.col(j).array();
        if ((col < 0).any() || (col >= c.cardinality).any() || (col != col.round()).any())
            throw ValidationError("discrete column '" + c.name + "' has values outside [0, cardinality)");
    }
}

bool Dataset::all_continuous() const {
    for (const Column& c : columns_)
        if (c.kind != ColumnKind::continuous) return false;
    return true;
}

bool Dataset::all_discrete() const {
    for (const Column& c : columns_)
        if (c.kind != ColumnKind::discrete) return false;
    return true;
}

nlohmann::json columns_to_json(const std::vector<Column>& columns) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Column& c : columns) {
        nlohmann::json entry{{"name", c.name}, {"kind", c.kind == ColumnKind::discrete ? "discrete" : "continuous"}};
        if (c.kind == ColumnKind::discrete) entry["cardinality"] = c.cardinality;
        arr.push_back(std::move(entry));
    }
    return nlohmann::json{{"columns", arr}};
}

std::vector<Column> columns_from_json(const nlohmann::json& j) {
    std::vector<Column> out;
    try {
        for (const auto& entry : j.at("columns")) {
            Column c;
            c.name = entry.at("name").get<std::string>();
            const auto kind = entry.value("kind", std::string("continuous"));
            if (kind == "discrete") {
                c.kind = ColumnKind::discrete;
                c.cardinality = entry.at("cardinality").get<int>();
            } else if (kind != "continuous") {
                throw ValidationError("unknown column kind '" + kind + "'");
            }
            out.push_back(std::move(c));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("sidecar: ") + e.what(), 0, 0);
    }
    return out;
}

void write_dataset(const Dataset& data, const std::filesystem::path& csv, const std::filesystem::path& sidecar) {
    std::ofstream out(csv);
    if (!out) throw std::runtime_error("cannot write " + csv.string());
    for (int j = 0; j < data.variable_count(); ++j) out << (j ? "," : "") << data.column(j).name;
    out << '\n';
    char buf[32];
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        for (int j = 0; j < data.variable_count(); ++j) {
            if (j) out << ',';
            const double v = data.values()(r, j);
            if (data.column(j).kind == ColumnKind::discrete) {
                out << static_cast<long>(v);
            } else {
                auto res = std::to_chars(buf, buf + sizeof buf, v);
                out.write(buf, res.ptr - buf);
            }
        }
        out << '\n';
    }
    if (!sidecar.empty()) {
        std::ofstream side(sidecar);
        if (!side) throw std::runtime_error("cannot write " + sidecar.string());
        side << columns_to_json(data.columns()).dump(2) << '\n';
    }
}

Dataset read_dataset(const std::filesystem::path& csv, const std::filesystem::path& sidecar) {
    std::ifstream in(csv);
    if (!in) throw std::runtime_error("cannot read " + csv.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty CSV", 1, 1);
    std::vector<std::string> names;
    {
        std::stringstream ss(line);
        std::string name;
        while (std::getline(ss, name, ',')) names.push_back(name);
    }
    std::vector<double> flat;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::size_t col = 0, pos = 0;
        while (pos <= line.size()) {
            std::size_t end = line.find(',', pos);
            if (end == std::string::npos) end = line.size();
            double v = 0;
            auto res = std::from_chars(line.data() + pos, line.data() + end, v);
            if (res.ec != std::errc{} || res.ptr != line.data() + end)
                throw ParseError("bad number in CSV", row, static_cast<int>(pos) + 1);
            flat.push_back(v);
            ++col;
            pos = end + 1;
        }
        if (col != names.size()) throw ParseError("wrong number of fields", row, 1);
    }
    const Eigen::Index d = static_cast<Eigen::Index>(names.size());
    const Eigen::Index n = d ? static_cast<Eigen::Index>(flat.size()) / d : 0;
    Eigen::MatrixXd values = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(flat.data(), n, d);

    std::vector<Column> columns;
    if (!sidecar.empty()) {
        std::ifstream side(sidecar);
        if (!side) throw std::runtime_error("cannot read " + sidecar.string());
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(side);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("sidecar: ") + e.what(), 0, 0);
        }
        columns = columns_from_json(j);
        if (columns.size() != names.size()) throw ValidationError("sidecar and CSV disagree on column count");
        for (std::size_t c = 0; c < names.size(); ++c)
            if (columns[c].name != names[c]) throw ValidationError("sidecar column '" + columns[c].name + "' does not match CSV header");
    } else {
        for (const auto& name : names) columns.push_back({name, ColumnKind::continuous, 0});
    }
    return Dataset(std::move(values), std::move(columns));
}

}  // namespace tdag
