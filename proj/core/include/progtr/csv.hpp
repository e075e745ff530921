#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace progtr {

/// Deterministic number formatting shared by every CSV producer, so equal
/// runs emit byte-identical files.
std::string csv_num(double v);
std::string csv_num(long v);
std::string csv_num(int v);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
    void flush() { out_.flush(); }

private:
    std::ofstream out_;
    std::size_t width_;
};

} // namespace progtr
