#include "radboltz/io.hpp"
#include "radboltz/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace radboltz::io {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Node& Node::child(const std::string& key) {
    for (auto& [k, n] : children_)
        if (k == key) return n;
    children_.emplace_back(key, Node{});
    return children_.back().second;
}

const Node* Node::find(const std::string& key) const {
    for (const auto& [k, n] : children_)
        if (k == key) return &n;
    return nullptr;
}

const Node* Node::find_path(const std::string& dotted) const {
    const Node* cur = this;
    size_t pos = 0;
    while (cur && pos <= dotted.size()) {
        size_t dot = dotted.find('.', pos);
        std::string key = dotted.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
        cur = cur->find(key);
        if (dot == std::string::npos) break;
        pos = dot + 1;
    }
    return cur;
}

void Node::set(const std::string& key, const std::string& v) { child(key).set_value(v); }
void Node::set(const std::string& key, double v) { child(key).set_value(format_double(v)); }
void Node::set(const std::string& key, long long v) { child(key).set_value(std::to_string(v)); }
void Node::set(const std::string& key, bool v) { child(key).set_value(v ? "true" : "false"); }

double Node::as_double() const {
    try {
        size_t used = 0;
        double v = std::stod(value_, &used);
        if (used != value_.size()) throw std::invalid_argument(value_);
        return v;
    } catch (const std::exception&) {
        throw parse_error("expected a number, got '" + value_ + "'");
    }
}

long long Node::as_int() const {
    try {
        size_t used = 0;
        long long v = std::stoll(value_, &used);
        if (used != value_.size()) throw std::invalid_argument(value_);
        return v;
    } catch (const std::exception&) {
        throw parse_error("expected an integer, got '" + value_ + "'");
    }
}

bool Node::as_bool() const {
    if (value_ == "true" || value_ == "1" || value_ == "yes") return true;
    if (value_ == "false" || value_ == "0" || value_ == "no") return false;
    throw parse_error("expected a boolean, got '" + value_ + "'");
}

namespace {

void emit_node(const Node& node, int depth, std::string& out) {
    for (const auto& [key, child] : node.children()) {
        out.append(static_cast<size_t>(2 * depth), ' ');
        out += key;
        out += ':';
        if (child.is_leaf()) {
            if (!child.value().empty()) {
                out += ' ';
                out += child.value();
            }
            out += '\n';
        } else {
            out += '\n';
            emit_node(child, depth + 1, out);
        }
    }
}

} // namespace

std::string emit_structured(const Node& root) {
    std::string out;
    emit_node(root, 0, out);
    return out;
}

Node parse_structured(const std::string& text, const std::string& filename) {
    Node root;
    std::vector<Node*> stack = {&root};
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t indent = 0;
        while (indent < line.size() && line[indent] == ' ') ++indent;
        std::string body = line.substr(indent);
        while (!body.empty() && (body.back() == '\r' || body.back() == ' ')) body.pop_back();
        if (body.empty() || body[0] == '#') continue;
        if (indent % 2 != 0) throw parse_error(filename, lineno, "odd indentation");
        size_t depth = indent / 2;
        if (depth >= stack.size()) throw parse_error(filename, lineno, "indentation jumps a level");
        stack.resize(depth + 1);
        size_t colon = body.find(':');
        if (colon == std::string::npos) throw parse_error(filename, lineno, "missing ':'");
        std::string key = body.substr(0, colon);
        std::string value = colon + 1 < body.size() ? body.substr(colon + 1) : std::string{};
        while (!value.empty() && value.front() == ' ') value.erase(value.begin());
        Node& child = stack.back()->child(key);
        if (!value.empty()) {
            child.set_value(value);
        } else {
            stack.push_back(&child);
        }
    }
    return root;
}

std::string emit_csv(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("emit_csv: row width does not match the header");
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

CsvTable parse_csv(const std::string& text, const std::string& filename) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        size_t pos = 0;
        while (true) {
            size_t comma = line.find(',', pos);
            cells.push_back(line.substr(pos, comma == std::string::npos ? std::string::npos
                                                                        : comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (lineno == 1) {
            table.header = std::move(cells);
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            try {
                row.push_back(std::stod(c));
            } catch (const std::exception&) {
                throw parse_error(filename, lineno, "bad number '" + c + "'");
            }
        }
        if (row.size() != table.header.size())
            throw parse_error(filename, lineno, "row width does not match the header");
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty()) throw parse_error(filename, 1, "missing header row");
    return table;
}

std::vector<ConfigEntry> parse_config(const std::string& text, const std::string& filename) {
    std::vector<ConfigEntry> entries;
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string& s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
            size_t b = 0;
            while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
            s.erase(0, b);
        };
        trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw parse_error(filename, lineno, "expected 'key = value'");
        ConfigEntry e;
        e.key = line.substr(0, eq);
        e.value = line.substr(eq + 1);
        trim(e.key);
        trim(e.value);
        e.line = lineno;
        if (e.key.empty()) throw parse_error(filename, lineno, "empty key");
        for (const auto& prev : entries)
            if (prev.key == e.key)
                throw parse_error(filename, lineno, "duplicate key '" + e.key + "' (first at line " +
                                                        std::to_string(prev.line) + ")");
        entries.push_back(std::move(e));
    }
    return entries;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw parse_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw parse_error("short write to '" + path + "'");
}

std::string tables_to_csv(const spectrum::SpectrumTables& tables) {
    const int N = tables.truncation();
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<size_t>(N + 1) * (N + 1));
    for (int n = 0; n <= N; ++n)
        for (int m = 0; m <= N; ++m) {
            double w = (n >= 1 && n + m <= N) ? tables.coupling(n, m) : 0.0;
            rows.push_back({static_cast<double>(n), static_cast<double>(m), tables.lambda(n),
                            tables.alpha(n, m), w});
        }
    return emit_csv({"n", "m", "lambda", "alpha", "w"}, rows);
}

Node tables_to_snapshot(const spectrum::SpectrumTables& tables) {
    Node root;
    Node& t = root.child("radboltz_tables");
    t.set("version", static_cast<long long>(1));
    Node& model = t.child("model");
    model.set("form", cross_section::form_name(tables.model().form));
    model.set("s", tables.model().s);
    model.set("amplitude", tables.model().amplitude);
    Node& quad = t.child("quadrature");
    quad.set("abs_tol", tables.quad().abs_tol);
    quad.set("rel_tol", tables.quad().rel_tol);
    quad.set("max_subdivisions", static_cast<long long>(tables.quad().max_subdivisions));
    quad.set("grading_exponent", tables.quad().grading_exponent);
    t.set("truncation", static_cast<long long>(tables.truncation()));
    Node& lam = t.child("lambda");
    for (int n = 0; n <= tables.truncation(); ++n) lam.set(std::to_string(n), tables.lambda(n));
    Node& alpha = t.child("alpha");
    for (int n = 0; n <= tables.truncation(); ++n)
        for (int m = 0; m <= tables.truncation(); ++m)
            alpha.set(std::to_string(n) + "," + std::to_string(m), tables.alpha(n, m));
    return root;
}

spectrum::SpectrumTables tables_from_snapshot(const Node& root) {
    const Node* t = root.find("radboltz_tables");
    if (!t) throw parse_error("snapshot: missing 'radboltz_tables' section");
    auto need = [&](const Node* parent, const std::string& key) -> const Node& {
        const Node* n = parent->find(key);
        if (!n) throw parse_error("snapshot: missing key '" + key + "'");
        return *n;
    };
    cross_section::SingularityModel model;
    const Node& mn = need(t, "model");
    model.form = cross_section::form_from_name(need(&mn, "form").value());
    model.s = need(&mn, "s").as_double();
    model.amplitude = need(&mn, "amplitude").as_double();
    cross_section::QuadratureSpec quad;
    const Node& qn = need(t, "quadrature");
    quad.abs_tol = need(&qn, "abs_tol").as_double();
    quad.rel_tol = need(&qn, "rel_tol").as_double();
    quad.max_subdivisions = static_cast<int>(need(&qn, "max_subdivisions").as_int());
    quad.grading_exponent = need(&qn, "grading_exponent").as_double();
    const int N = static_cast<int>(need(t, "truncation").as_int());
    if (N < 2) throw parse_error("snapshot: truncation must be >= 2");
    std::vector<double> lambda(static_cast<size_t>(N) + 1, 0.0);
    const Node& ln = need(t, "lambda");
    for (int n = 0; n <= N; ++n) lambda[static_cast<size_t>(n)] = need(&ln, std::to_string(n)).as_double();
    std::vector<double> alpha(static_cast<size_t>(N + 1) * (N + 1), 0.0);
    const Node& an = need(t, "alpha");
    for (int n = 0; n <= N; ++n)
        for (int m = 0; m <= N; ++m)
            alpha[static_cast<size_t>(n) * (N + 1) + m] =
                need(&an, std::to_string(n) + "," + std::to_string(m)).as_double();
    return spectrum::SpectrumTables(model, quad, N, std::move(lambda), std::move(alpha));
}

} // namespace radboltz::io
