#pragma once

#include <string>
#include <vector>

namespace hsv {

// Minimal CSV support for the artifact's own file formats. No quoting: none of
// our fields may contain commas. Numbers are written with %.17g so rereading
// is lossless and reruns are byte-identical.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const CsvTable& table);

std::string format_double(double x);
double parse_double(const std::string& s);

}  // namespace hsv
