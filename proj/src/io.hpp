#pragma once

#include <span>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace halfline {

// 17 significant digits; non-finite values print as null.
std::string fmt(double v);
std::string json_array(std::span<const double> v);
std::string json_string(const std::string& s);

void ensure_directory(const std::string& dir);
void write_file(const std::string& path, const std::string& content);

}  // namespace halfline
