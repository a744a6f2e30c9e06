#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace gfcsim::analysis {

/// RFC-4180 table: CRLF line ends, fields quoted when they contain a comma,
/// quote, CR or LF.
class CsvTable {
public:
    CsvTable() = default;
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    /// Throws std::invalid_argument if the width differs from the header.
    void add_row(std::vector<std::string> row);

    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

    void write(std::ostream& out) const;
    std::string str() const;

    static std::string quote(const std::string& field);

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string format_double(double v, int precision = 6);

struct ExperimentReport {
    std::string name;
    std::string scenario;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> metrics;
    std::map<std::string, CsvTable> tables;

    void set(const std::string& key, double v, int precision = 6) { metrics[key] = format_double(v, precision); }
    void set(const std::string& key, std::int64_t v) { metrics[key] = std::to_string(v); }
    void set(const std::string& key, std::string v) { metrics[key] = std::move(v); }
    double number(const std::string& key) const;

    /// "key = value" lines, sorted by key.
    void write_summary(std::ostream& out) const;
    std::string summary() const;
    /// Writes <name>-summary.txt and <name>-<table>.csv into `dir`.
    void write_to(const std::filesystem::path& dir) const;
};

}  // namespace gfcsim::analysis
