#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace cohdisc::cli {

/// CSV writer with a stable wire format: header row, comma separators, '.' decimal
/// point, 12 significant digits, LF line endings.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {}

    bool ok() const { return out_.good(); }

    void header(const std::vector<std::string>& cols) { line(cols); }

    void row(const std::vector<double>& vals) {
        std::vector<std::string> cells;
        cells.reserve(vals.size());
        for (double v : vals) cells.push_back(format(v));
        line(cells);
    }

    void row(const std::vector<std::string>& cells) { line(cells); }

    static std::string format(double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return buf;
    }

    static std::string format(long v) { return std::to_string(v); }
    static std::string format(std::uint64_t v) { return std::to_string(v); }

  private:
    void line(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::ofstream out_;
};

}  // namespace cohdisc::cli
