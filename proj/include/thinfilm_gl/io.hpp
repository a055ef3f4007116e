#pragma once

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <type_traits>

#include "json.hpp"

namespace tfgl {

using Json = nlohmann::ordered_json;

// Formats a double with 17 significant digits so it round-trips exactly.
std::string format_double(double v);

// Row-oriented CSV writer; floating values are written with format_double.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::initializer_list<const char*> header);

  template <typename... Ts>
  void row(const Ts&... values) {
    std::ostringstream line;
    bool first = true;
    ((line << (first ? "" : ",") << cell(values), first = false), ...);
    out_ << line.str() << '\n';
  }

 private:
  template <typename T>
  static std::string cell(const T& v) {
    if constexpr (std::is_floating_point_v<T>) return format_double(v);
    else if constexpr (std::is_arithmetic_v<T>) return std::to_string(v);
    else return std::string(v);
  }

  std::ofstream out_;
};

void ensure_directory(const std::string& dir);
void write_json(const std::string& path, const Json& j);
Json read_json(const std::string& path);
std::string join_path(const std::string& dir, const std::string& file);

}  // namespace tfgl
