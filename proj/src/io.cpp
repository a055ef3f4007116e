#include "thinfilm_gl/io.hpp"

#include <cstdio>
#include <filesystem>

#include "thinfilm_gl/error.hpp"

namespace tfgl {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path,
                     std::initializer_list<const char*> header)
    : out_(path) {
  require(out_.good(), ErrorCode::kIoError, "cannot open " + path + " for writing");
  bool first = true;
  for (const char* h : header) {
    out_ << (first ? "" : ",") << h;
    first = false;
  }
  out_ << '\n';
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, ErrorCode::kIoError, "cannot create directory " + dir + ": " + ec.message());
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::kIoError, "cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIoError, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kIoError, path + ": " + e.what());
  }
}

std::string join_path(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

}  // namespace tfgl
