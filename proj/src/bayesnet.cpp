#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "tdag/errors.hpp"
#include "tdag/simulate.hpp"

namespace tdag {

namespace {

struct Token {
    enum Kind { word, number, symbol, end } kind = end;
    std::string text;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_space_and_comments();
        Token t;
        t.line = line_;
        t.column = column_;
        if (pos_ >= text_.size()) return t;
        const char c = text_[pos_];
        if (std::string_view("{}[]();,|").find(c) != std::string_view::npos) {
            t.kind = Token::symbol;
            t.text = std::string(1, c);
            advance();
            return t;
        }
        if (c == '"') {
            advance();
            while (pos_ < text_.size() && text_[pos_] != '"') t.text += advance();
            if (pos_ >= text_.size()) throw ParseError("unterminated string", t.line, t.column);
            advance();
            t.kind = Token::word;
            return t;
        }
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               std::string_view("{}[]();,|\"").find(text_[pos_]) == std::string_view::npos)
            t.text += advance();
        double dummy;
        auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), dummy);
        t.kind = (res.ec == std::errc{} && res.ptr == t.text.data() + t.text.size()) ? Token::number : Token::word;
        return t;
    }

    // Raw text up to (not including) the next ';'. Used to skip property values.
    void skip_to_semicolon() {
        while (pos_ < text_.size() && text_[pos_] != ';') advance();
    }

private:
    char advance() {
        const char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    void skip_space_and_comments() {
        while (pos_ < text_.size()) {
            if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                advance();
            } else if (text_.substr(pos_, 2) == "//") {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (text_.substr(pos_, 2) == "/*") {
                while (pos_ < text_.size() && text_.substr(pos_, 2) != "*/") advance();
                if (pos_ < text_.size()) {
                    advance();
                    advance();
                }
            } else {
                return;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

class BifParser {
public:
    explicit BifParser(std::string_view text) : lex_(text) { shift(); }

    BayesNet parse() {
        BayesNet bn;
        while (cur_.kind != Token::end) {
            if (cur_.kind != Token::word) fail("expected a block keyword");
            if (cur_.text == "network") {
                shift();
                bn.name = take_name();
                skip_block();
            } else if (cur_.text == "variable") {
                parse_variable(bn);
            } else if (cur_.text == "probability") {
                parse_probability(bn);
            } else {
                fail("unknown block '" + cur_.text + "'");
            }
        }
        for (std::size_t v = 0; v < bn.variables.size(); ++v)
            if (!has_table_[v]) throw ValidationError("variable '" + bn.variables[v].name + "' has no probability block");
        std::vector<Edge> edges;
        for (std::size_t v = 0; v < bn.variables.size(); ++v)
            for (int p : bn.variables[v].parents) edges.push_back({p, static_cast<int>(v)});
        try {
            bn.dag = Dag(static_cast<int>(bn.variables.size()), edges);
        } catch (const std::invalid_argument& e) {
            throw ValidationError(std::string("BIF structure: ") + e.what());
        }
        bn.validate();
        return bn;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, cur_.line, cur_.column); }

    void shift() { cur_ = lex_.next(); }

    void expect(const char* symbol) {
        if (cur_.kind != Token::symbol || cur_.text != symbol) fail(std::string("expected '") + symbol + "'");
        shift();
    }

    bool accept(const char* symbol) {
        if (cur_.kind == Token::symbol && cur_.text == symbol) {
            shift();
            return true;
        }
        return false;
    }

    std::string take_name() {
        if (cur_.kind != Token::word && cur_.kind != Token::number) fail("expected a name");
        std::string s = cur_.text;
        shift();
        return s;
    }

    double take_number() {
        if (cur_.kind != Token::number) fail("expected a number");
        double v = std::stod(cur_.text);
        shift();
        return v;
    }

    void skip_block() {
        expect("{");
        int depth = 1;
        while (depth > 0) {
            if (cur_.kind == Token::end) fail("unterminated block");
            if (cur_.kind == Token::word && cur_.text == "property") {
                lex_.skip_to_semicolon();
                shift();
                expect(";");
                continue;
            }
            if (cur_.kind == Token::symbol && cur_.text == "{") ++depth;
            if (cur_.kind == Token::symbol && cur_.text == "}") --depth;
            shift();
        }
    }

    int index_of(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) fail("unknown variable '" + name + "'");
        return it->second;
    }

    void parse_variable(BayesNet& bn) {
        shift();
        BnVariable var;
        var.name = take_name();
        if (index_.count(var.name)) fail("duplicate variable '" + var.name + "'");
        expect("{");
        while (!accept("}")) {
            if (cur_.kind == Token::word && cur_.text == "property") {
                lex_.skip_to_semicolon();
                shift();
                expect(";");
            } else if (cur_.kind == Token::word && cur_.text == "type") {
                shift();
                if (cur_.text != "discrete") fail("only discrete variables are supported");
                shift();
                expect("[");
                const double declared = take_number();
                expect("]");
                expect("{");
                do var.states.push_back(take_name());
                while (accept(","));
                expect("}");
                expect(";");
                if (static_cast<double>(var.states.size()) != declared) fail("state count differs from declaration");
            } else {
                fail("unexpected token in variable block");
            }
        }
        if (var.states.empty()) fail("variable without states");
        index_[var.name] = static_cast<int>(bn.variables.size());
        bn.variables.push_back(std::move(var));
        has_table_.push_back(false);
    }

    void parse_probability(BayesNet& bn) {
        shift();
        expect("(");
        const int child = index_of(take_name());
        std::vector<int> parents;
        if (accept("|")) {
            do parents.push_back(index_of(take_name()));
            while (accept(","));
        }
        expect(")");
        if (has_table_[child]) fail("second probability block for '" + bn.variables[child].name + "'");
        BnVariable& var = bn.variables[child];
        var.parents = parents;
        const std::size_t states = var.states.size();
        std::size_t rows = 1;
        for (int p : parents) rows *= bn.variables[p].states.size();
        var.cpt.assign(rows * states, std::numeric_limits<double>::quiet_NaN());

        expect("{");
        while (!accept("}")) {
            if (cur_.kind == Token::word && cur_.text == "table") {
                shift();
                for (std::size_t i = 0; i < rows * states; ++i) {
                    if (i) expect(",");
                    var.cpt[i] = take_number();
                }
                expect(";");
            } else if (cur_.kind == Token::word && cur_.text == "property") {
                lex_.skip_to_semicolon();
                shift();
                expect(";");
            } else if (accept("(")) {
                std::size_t row = 0;
                for (std::size_t k = 0; k < parents.size(); ++k) {
                    if (k) expect(",");
                    const auto& pstates = bn.variables[parents[k]].states;
                    const std::string s = take_name();
                    auto it = std::find(pstates.begin(), pstates.end(), s);
                    if (it == pstates.end()) fail("unknown state '" + s + "'");
                    row = row * pstates.size() + static_cast<std::size_t>(it - pstates.begin());
                }
                expect(")");
                for (std::size_t s = 0; s < states; ++s) {
                    if (s) expect(",");
                    var.cpt[row * states + s] = take_number();
                }
                expect(";");
            } else {
                fail("unexpected token in probability block");
            }
        }
        for (double v : var.cpt)
            if (std::isnan(v)) throw ValidationError("incomplete table for '" + var.name + "'");
        has_table_[child] = true;
    }

    Lexer lex_;
    Token cur_;
    std::map<std::string, int> index_;
    std::vector<bool> has_table_;
};

std::string format_probability(double p) {
    std::ostringstream ss;
    ss.precision(17);
    ss << p;
    return ss.str();
}

}  // namespace

void BayesNet::validate() const {
    if (static_cast<int>(variables.size()) != dag.vertex_count()) throw ValidationError("variable count differs from DAG");
    for (int v = 0; v < dag.vertex_count(); ++v) {
        const BnVariable& var = variables[v];
        std::vector<int> sorted = var.parents;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != dag.parents(v)) throw ValidationError("parents of '" + var.name + "' differ from DAG");
        std::size_t rows = 1;
        for (int p : var.parents) rows *= variables[p].states.size();
        const std::size_t k = var.states.size();
        if (var.cpt.size() != rows * k) throw ValidationError("table size mismatch for '" + var.name + "'");
        for (std::size_t r = 0; r < rows; ++r) {
            double sum = 0;
            for (std::size_t s = 0; s < k; ++s) {
                const double p = var.cpt[r * k + s];
                if (p < 0) throw ValidationError("negative probability for '" + var.name + "'");
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-6) throw ValidationError("table row of '" + var.name + "' does not sum to 1");
        }
    }
}

std::vector<Column> BayesNet::columns() const {
    std::vector<Column> out;
    for (const BnVariable& v : variables) out.push_back({v.name, ColumnKind::discrete, v.cardinality()});
    return out;
}

BayesNet parse_bif(std::string_view text) { return BifParser(text).parse(); }

BayesNet read_bif_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_bif(ss.str());
}

std::string serialize_bif(const BayesNet& bn) {
    std::ostringstream out;
    out << "network " << (bn.name.empty() ? "unknown" : bn.name) << " {\n}\n";
    for (const BnVariable& v : bn.variables) {
        out << "variable " << v.name << " {\n  type discrete [ " << v.states.size() << " ] { ";
        for (std::size_t s = 0; s < v.states.size(); ++s) out << (s ? ", " : "") << v.states[s];
        out << " };\n}\n";
    }
    for (const BnVariable& v : bn.variables) {
        out << "probability ( " << v.name;
        for (std::size_t p = 0; p < v.parents.size(); ++p) out << (p ? ", " : " | ") << bn.variables[v.parents[p]].name;
        out << " ) {\n";
        const std::size_t k = v.states.size();
        const std::size_t rows = v.cpt.size() / k;
        for (std::size_t r = 0; r < rows; ++r) {
            if (v.parents.empty()) {
                out << "  table ";
            } else {
                std::vector<std::size_t> digits(v.parents.size());
                std::size_t rest = r;
                for (std::size_t p = v.parents.size(); p-- > 0;) {
                    const std::size_t card = bn.variables[v.parents[p]].states.size();
                    digits[p] = rest % card;
                    rest /= card;
                }
                out << "  (";
                for (std::size_t p = 0; p < digits.size(); ++p)
                    out << (p ? ", " : "") << bn.variables[v.parents[p]].states[digits[p]];
                out << ") ";
            }
            for (std::size_t s = 0; s < k; ++s) out << (s ? ", " : "") << format_probability(v.cpt[r * k + s]);
            out << ";\n";
        }
        out << "}\n";
    }
    return out.str();
}

Dataset ancestral_sample(const BayesNet& bn, int n, Philox& rng) {
    if (n < 1) throw std::invalid_argument("sample count must be positive");
    bn.validate();
    const int d = bn.dag.vertex_count();
    const auto order = bn.dag.topological_order();
    Eigen::MatrixXd x(n, d);
    std::vector<int> state(d);
    for (int r = 0; r < n; ++r) {
        for (int v : order) {
            const BnVariable& var = bn.variables[v];
            std::size_t row = 0;
            for (int p : var.parents) row = row * bn.variables[p].states.size() + static_cast<std::size_t>(state[p]);
            const std::size_t k = var.states.size();
            const double u = rng.uniform();
            double acc = 0;
            int pick = static_cast<int>(k) - 1;
            for (std::size_t s = 0; s + 1 < k; ++s) {
                acc += var.cpt[row * k + s];
                if (u < acc) {
                    pick = static_cast<int>(s);
                    break;
                }
            }
            state[v] = pick;
            x(r, v) = pick;
        }
    }
    return Dataset(std::move(x), bn.columns());
}

TypeMap assign_types_topological(const Dag& dag, double expected_size, Philox& rng) {
    if (!(expected_size >= 1.0)) throw std::invalid_argument("expected group size must be at least 1");
    const int n = dag.vertex_count();
    std::vector<int> types(n, 0);
    int current = -1;
    bool first = true;
    for (int v : dag.topological_order()) {
        if (first || rng.bernoulli(1.0 / expected_size)) ++current;
        first = false;
        types[v] = current;
    }
    return TypeMap(std::move(types), std::max(current + 1, 1));
}

}  // namespace tdag
