#include "qnnbench/csvio.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

#include "qnnbench/errors.hpp"

namespace qnn::csvio {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split_line(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == sep) {
            std::string cell = line.substr(start, i - start);
            if (!cell.empty() && cell.back() == '\r') cell.pop_back();
            out.push_back(std::move(cell));
            start = i + 1;
        }
    }
    return out;
}

LabeledData read_labeled_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw format_error("cannot open " + path);
    LabeledData data;
    std::string line;
    std::size_t lineno = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_line(line);
        if (lineno == 1) {
            // header detection: any cell that fails to parse as a number
            double v;
            const auto& c = cells[0];
            const auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
            if (ec != std::errc{} || p != c.data() + c.size()) {
                data.header = cells;
                width = cells.size();
                continue;
            }
        }
        if (width == 0) width = cells.size();
        if (cells.size() != width)
            throw format_error(path + ":" + std::to_string(lineno) + ": expected " +
                               std::to_string(width) + " columns, got " +
                               std::to_string(cells.size()));
        if (width < 2)
            throw format_error(path + ": need at least one feature column and a label");
        std::vector<double> row(width);
        for (std::size_t i = 0; i < width; ++i) {
            const auto& c = cells[i];
            const auto [p, ec] =
                std::from_chars(c.data(), c.data() + c.size(), row[i]);
            if (ec != std::errc{} || p != c.data() + c.size())
                throw format_error(path + ":" + std::to_string(lineno) +
                                   ": non-numeric cell '" + c + "'");
        }
        data.labels.push_back(row.back());
        row.pop_back();
        data.features.push_back(std::move(row));
    }
    if (data.features.empty()) throw format_error(path + " has no data rows");
    return data;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);  // binary: byte-stable newlines
    if (!out) throw format_error("cannot write " + path);
    for (const auto& l : lines) out << l << '\n';
    if (!out) throw format_error("failed while writing " + path);
}

}  // namespace qnn::csvio
