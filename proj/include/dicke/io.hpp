// io.hpp — full-precision numeric formatting and a small CSV writer.
// Every numeric output uses 17 significant digits so files round-trip
// doubles exactly and identical runs are byte-identical.

#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dicke {

inline std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header(const std::vector<std::string>& columns) { write_line(columns); }

    void row(const std::vector<std::string>& cells) {
        write_line(cells);
        out_.flush();  // keep completed rows on disk if a sweep is interrupted
    }

private:
    void write_line(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::ostream& out_;
};

inline std::ofstream open_output_file(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

} // namespace dicke
