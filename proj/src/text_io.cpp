#include "csc/text_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace csc {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // Prefer the shortest representation that still parses back exactly.
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
        if (std::strtod(shorter, nullptr) == v) return shorter;
    }
    return buf;
}

double parse_double(const std::string& s) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || errno == ERANGE) throw IoError("bad numeric value: '" + s + "'");
    return v;
}

long long parse_int(const std::string& s) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE)
        throw IoError("bad integer value: '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    return f;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open for reading: " + path);
    return f;
}

}  // namespace

void write_dictionary(const std::string& path, const LocalDictionary& dict) {
    auto f = open_out(path);
    f << "convdict v1 n=" << dict.n() << " m=" << dict.m() << "\n";
    for (int r = 0; r < dict.n(); ++r) {
        for (int c = 0; c < dict.m(); ++c) {
            if (c) f << ' ';
            f << format_double(dict.atoms(r, c));
        }
        f << "\n";
    }
    if (!f) throw IoError("write failed: " + path);
}

LocalDictionary read_dictionary(const std::string& path) {
    auto f = open_in(path);
    std::string magic, version, nfield, mfield;
    if (!(f >> magic >> version >> nfield >> mfield) || magic != "convdict" || version != "v1" ||
        nfield.rfind("n=", 0) != 0 || mfield.rfind("m=", 0) != 0)
        throw IoError("bad dictionary header in " + path);
    const long long n = parse_int(nfield.substr(2));
    const long long m = parse_int(mfield.substr(2));
    if (n < 1 || m < 1) throw IoError("bad dictionary dimensions in " + path);
    Eigen::MatrixXd atoms(n, m);
    for (long long r = 0; r < n; ++r)
        for (long long c = 0; c < m; ++c) {
            std::string tok;
            if (!(f >> tok)) throw IoError("truncated dictionary file " + path);
            atoms(r, c) = parse_double(tok);
        }
    return LocalDictionary(std::move(atoms));
}

void write_vector(const std::string& path, const Eigen::VectorXd& v) {
    auto f = open_out(path);
    f << "vec v1 len=" << v.size() << "\n";
    for (Eigen::Index i = 0; i < v.size(); ++i) f << format_double(v[i]) << "\n";
    if (!f) throw IoError("write failed: " + path);
}

Eigen::VectorXd read_vector(const std::string& path) {
    auto f = open_in(path);
    std::string magic, version, lenfield;
    if (!(f >> magic >> version >> lenfield) || magic != "vec" || version != "v1" ||
        lenfield.rfind("len=", 0) != 0)
        throw IoError("bad vector header in " + path);
    const long long len = parse_int(lenfield.substr(4));
    if (len < 0) throw IoError("bad vector length in " + path);
    Eigen::VectorXd v(len);
    for (long long i = 0; i < len; ++i) {
        std::string tok;
        if (!(f >> tok)) throw IoError("truncated vector file " + path);
        v[i] = parse_double(tok);
    }
    return v;
}

void KeyValueFile::set(const std::string& key, const std::string& value) {
    for (auto& e : entries_)
        if (e.first == key) {
            e.second = value;
            return;
        }
    entries_.emplace_back(key, value);
}

void KeyValueFile::set(const std::string& key, double value) { set(key, format_double(value)); }
void KeyValueFile::set(const std::string& key, long long value) { set(key, std::to_string(value)); }

bool KeyValueFile::has(const std::string& key) const { return get(key).has_value(); }

std::optional<std::string> KeyValueFile::get(const std::string& key) const {
    for (const auto& e : entries_)
        if (e.first == key) return e.second;
    return std::nullopt;
}

std::string KeyValueFile::require(const std::string& key) const {
    auto v = get(key);
    if (!v) throw IoError("missing key '" + key + "'");
    return *v;
}

double KeyValueFile::require_double(const std::string& key) const { return parse_double(require(key)); }
long long KeyValueFile::require_int(const std::string& key) const { return parse_int(require(key)); }

double KeyValueFile::get_double(const std::string& key, double fallback) const {
    auto v = get(key);
    return v ? parse_double(*v) : fallback;
}

long long KeyValueFile::get_int(const std::string& key, long long fallback) const {
    auto v = get(key);
    return v ? parse_int(*v) : fallback;
}

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) const {
    auto v = get(key);
    return v ? *v : fallback;
}

void KeyValueFile::save(const std::string& path) const {
    auto f = open_out(path);
    for (const auto& e : entries_) f << e.first << "=" << e.second << "\n";
    if (!f) throw IoError("write failed: " + path);
}

KeyValueFile KeyValueFile::load(const std::string& path) {
    auto f = open_in(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

KeyValueFile KeyValueFile::parse(const std::string& text) {
    KeyValueFile kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw IoError("malformed key=value line: '" + line + "'");
        kv.entries_.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    return kv;
}

int CsvTable::column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

int CsvTable::require_column(const std::string& name) const {
    const int c = column(name);
    if (c < 0) throw IoError("missing CSV column '" + name + "'");
    return c;
}

double CsvTable::value(int row, int col) const { return parse_double(rows.at(row).at(col)); }

void CsvTable::save(const std::string& path) const {
    auto f = open_out(path);
    for (size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
    f << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << row[i];
        f << "\n";
    }
    if (!f) throw IoError("write failed: " + path);
}

CsvTable CsvTable::load(const std::string& path) {
    auto f = open_in(path);
    CsvTable t;
    std::string line;
    if (!std::getline(f, line)) throw IoError("empty CSV file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    t.header = split(line, ',');
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        t.rows.push_back(split(line, ','));
    }
    return t;
}

}  // namespace csc
