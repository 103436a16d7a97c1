#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csc/errors.hpp"
#include "csc/local_dictionary.hpp"

namespace csc {

// Shortest decimal form that round-trips a double exactly.
std::string format_double(double v);

// Local dictionary file, "convdict v1" header followed by n rows of m values.
void write_dictionary(const std::string& path, const LocalDictionary& dict);
LocalDictionary read_dictionary(const std::string& path);

// Plain vector file, "vec v1" header followed by one value per line.
void write_vector(const std::string& path, const Eigen::VectorXd& v);
Eigen::VectorXd read_vector(const std::string& path);

// Ordered key=value text file. Blank lines and lines starting with '#' are
// ignored on read.
class KeyValueFile {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, long long value);
    bool has(const std::string& key) const;
    std::optional<std::string> get(const std::string& key) const;
    std::string require(const std::string& key) const;
    double require_double(const std::string& key) const;
    long long require_int(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    void save(const std::string& path) const;
    static KeyValueFile load(const std::string& path);
    static KeyValueFile parse(const std::string& text);

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

// Minimal CSV table: a header row plus numeric/string cells, no quoting.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 when absent
    int require_column(const std::string& name) const;
    double value(int row, int col) const;

    void save(const std::string& path) const;
    static CsvTable load(const std::string& path);
};

double parse_double(const std::string& s);
long long parse_int(const std::string& s);
std::vector<std::string> split(const std::string& line, char sep);

}  // namespace csc
