#pragma once

#include <string>
#include <vector>

namespace pada {

// 17 significant digits; round-trips any finite double exactly.
std::string format_double(double v);

std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);

bool try_parse_double(const std::string& s, double& out);
bool try_parse_int(const std::string& s, long long& out);

std::vector<std::string> read_lines(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace pada
