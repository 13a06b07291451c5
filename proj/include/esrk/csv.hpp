#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace esrk {

/// Numeric CSV table with a header row.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of a column; throws ConfigError if absent.
    std::size_t column(const std::string& name) const;
};

/// Streams rows to a file. Values are written with 17 significant digits so that the
/// file reads back bit-exactly.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

    void row(std::span<const double> values);
    void row(std::initializer_list<double> values) {
        row(std::span<const double>(values.begin(), values.size()));
    }
    const std::vector<std::string>& header() const noexcept { return header_; }

private:
    std::ofstream out_;
    std::vector<std::string> header_;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace esrk
