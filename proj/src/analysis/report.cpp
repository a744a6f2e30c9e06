#include "gfcsim/analysis/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gfcsim::analysis {

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw std::invalid_argument("csv row width does not match header");
    rows_.push_back(std::move(row));
}

std::string CsvTable::quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void CsvTable::write(std::ostream& out) const {
    auto line = [&out](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out << ',';
            out << quote(fields[i]);
        }
        out << "\r\n";
    };
    line(header_);
    for (const auto& r : rows_) line(r);
}

std::string CsvTable::str() const {
    std::ostringstream os;
    write(os);
    return os.str();
}

std::string format_double(double v, int precision) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    std::string s = buf;
    if (s == "-0" || s.find_first_not_of("-0.") == std::string::npos) s = s.substr(s[0] == '-' ? 1 : 0);
    return s;
}

double ExperimentReport::number(const std::string& key) const {
    auto it = metrics.find(key);
    if (it == metrics.end()) throw std::out_of_range("no metric " + key);
    return std::stod(it->second);
}

void ExperimentReport::write_summary(std::ostream& out) const {
    out << "report = " << name << '\n';
    out << "scenario = " << scenario << '\n';
    out << "seed = " << seed << '\n';
    for (const auto& [k, v] : metrics) out << k << " = " << v << '\n';
}

std::string ExperimentReport::summary() const {
    std::ostringstream os;
    write_summary(os);
    return os.str();
}

void ExperimentReport::write_to(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    auto open = [](const std::filesystem::path& p) {
        std::ofstream f(p, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + p.string());
        return f;
    };
    {
        auto f = open(dir / (name + "-summary.txt"));
        write_summary(f);
    }
    for (const auto& [tname, table] : tables) {
        auto f = open(dir / (name + "-" + tname + ".csv"));
        table.write(f);
    }
}

}  // namespace gfcsim::analysis
