#pragma once

#include <string>
#include <vector>

namespace qnn::csvio {

// Shortest decimal string that round-trips the exact double. Part of the
// byte-identical rerun contract for result files.
std::string format_double(double v);

std::vector<std::string> split_line(const std::string& line, char sep = ',');

// Numeric table with an optional header row; the last column is the label.
struct LabeledData {
    std::vector<std::string> header;
    std::vector<std::vector<double>> features;
    std::vector<double> labels;
};

LabeledData read_labeled_csv(const std::string& path);

void write_lines(const std::string& path, const std::vector<std::string>& lines);

}  // namespace qnn::csvio
