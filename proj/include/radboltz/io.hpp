#ifndef RADBOLTZ_IO_HPP
#define RADBOLTZ_IO_HPP

#include "radboltz/spectrum.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace radboltz::io {

// Floats in emitted files carry 17 significant digits so a re-read is exact.
std::string format_double(double v);

// Ordered key/value tree behind the structured text files.  Children keep
// insertion order, which makes emission deterministic.
class Node {
public:
    bool is_leaf() const { return children_.empty(); }
    const std::string& value() const { return value_; }

    Node& child(const std::string& key);             // find or append
    const Node* find(const std::string& key) const;  // single level
    const Node* find_path(const std::string& dotted) const;

    void set(const std::string& key, const std::string& v);
    void set(const std::string& key, double v);
    void set(const std::string& key, long long v);
    void set(const std::string& key, bool v);
    void set_value(std::string v) { value_ = std::move(v); }

    double as_double() const;
    long long as_int() const;
    bool as_bool() const;

    const std::vector<std::pair<std::string, Node>>& children() const { return children_; }

private:
    std::string value_;
    std::vector<std::pair<std::string, Node>> children_;
};

// Two-space indented "key: value" text.
std::string emit_structured(const Node& root);
Node parse_structured(const std::string& text, const std::string& filename = "<memory>");

// Comma-separated table with one header row.
std::string emit_csv(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
CsvTable parse_csv(const std::string& text, const std::string& filename = "<memory>");

// Flat "key = value" run-configuration text.  Returns keys in file order with
// their line numbers; duplicate keys are a parse error.
struct ConfigEntry {
    std::string key;
    std::string value;
    long line = 0;
};
std::vector<ConfigEntry> parse_config(const std::string& text,
                                      const std::string& filename = "<memory>");

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Spectrum table exchange formats.
std::string tables_to_csv(const spectrum::SpectrumTables& tables);
Node tables_to_snapshot(const spectrum::SpectrumTables& tables);
spectrum::SpectrumTables tables_from_snapshot(const Node& root);

} // namespace radboltz::io

#endif
