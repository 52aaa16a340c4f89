#include "phaselab/csv.hpp"

#include <charconv>
#include <cmath>

#include "phaselab/error.hpp"

namespace phaselab {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

long CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<long>(i);
    return -1;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("csv: cannot open " + path.string());
    CsvTable t;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        auto fields = split_csv_line(line);
        for (auto& f : fields) {
            const auto a = f.find_first_not_of(" \t");
            const auto b = f.find_last_not_of(" \t");
            f = a == std::string::npos ? std::string() : f.substr(a, b - a + 1);
        }
        if (!have_header) {
            t.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != t.header.size())
            throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                                  std::to_string(t.header.size()) + " fields, found " + std::to_string(fields.size()));
        t.rows.push_back(std::move(fields));
        t.line_numbers.push_back(lineno);
    }
    return t;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path), columns_(header.size()), path_(path) {
    if (!out_) throw ValidationError("csv: cannot open " + path.string() + " for writing");
    raw_row(header);
}

void CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> f;
    f.reserve(values.size());
    for (double v : values) f.push_back(format_double(v));
    raw_row(f);
}

void CsvWriter::raw_row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_) throw ValidationError("csv: row width differs from header in " + path_.string());
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        const bool quote = fields[i].find_first_of(",\"") != std::string::npos;
        if (!quote) {
            out_ << fields[i];
            continue;
        }
        out_ << '"';
        for (char c : fields[i]) {
            if (c == '"') out_ << '"';
            out_ << c;
        }
        out_ << '"';
    }
    out_ << '\n';
    if (!out_) throw SolverError("csv: write failed for " + path_.string());
}

}  // namespace phaselab
