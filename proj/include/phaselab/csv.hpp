#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace phaselab {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Splits one CSV line; double quotes group fields and "" escapes a quote.
std::vector<std::string> split_csv_line(const std::string& line);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  ///< 1-based source line of each row

    /// Column index for `name`, or -1.
    long column(const std::string& name) const;
};

/// Reads a CSV with a header row. Blank lines and lines starting with '#'
/// are skipped. Rows whose field count differs from the header are rejected
/// with their line number.
CsvTable read_csv(const std::filesystem::path& path);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& fields);

private:
    std::ofstream out_;
    std::size_t columns_;
    std::filesystem::path path_;
};

}  // namespace phaselab
