#include "esrk/csv.hpp"

#include <sstream>

#include <fmt/format.h>

#include "esrk/error.hpp"

namespace esrk {

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw ConfigError("csv column not found: " + name);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : out_(path), header_(std::move(header)) {
    if (!out_) throw ConfigError("cannot write " + path.string());
    for (std::size_t i = 0; i < header_.size(); ++i) out_ << (i ? "," : "") << header_[i];
    out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
    if (values.size() != header_.size()) throw ConfigError("csv row width mismatch");
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ',';
        line += fmt::format("{:.17g}", values[i]);
    }
    out_ << line << '\n';
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty csv " + path.string());
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.header.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ConfigError("bad csv value '" + cell + "' in " + path.string());
            }
        }
        if (row.size() != table.header.size())
            throw ConfigError("csv row width mismatch in " + path.string());
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace esrk
