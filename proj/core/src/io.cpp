#include "loclim/io.hpp"

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace loclim {

std::string format_double(double v) {
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) return buf;
  }
  return buf;
}

namespace {

std::ofstream open_for_write(const std::string& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + file);
  return out;
}

}  // namespace

void write_samples_csv(const std::string& file, std::span<const SampleRow> rows) {
  auto out = open_for_write(file);
  out << "replica,statistic,value\n";
  for (const SampleRow& r : rows)
    out << r.replica << ',' << r.statistic << ',' << format_double(r.value) << '\n';
  if (!out) throw std::runtime_error("write failed: " + file);
}

void write_path_csv(const std::string& file, std::span<const PathPoint> points) {
  auto out = open_for_write(file);
  out << "t,value\n";
  for (const PathPoint& p : points)
    out << format_double(p.t) << ',' << format_double(p.value) << '\n';
  if (!out) throw std::runtime_error("write failed: " + file);
}

std::vector<PathPoint> read_path_csv(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open for reading: " + file);
  std::vector<PathPoint> points;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first && !line.empty() && !std::isdigit(static_cast<unsigned char>(line[0])) &&
        line[0] != '-' && line[0] != '+' && line[0] != '.') {
      first = false;
      continue;  // header
    }
    first = false;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("malformed path row (expected t,value): " + line);
    PathPoint p;
    p.t = std::stod(line.substr(0, comma));
    p.value = std::stod(line.substr(comma + 1));
    points.push_back(p);
  }
  if (points.empty()) throw std::runtime_error("no path points in " + file);
  return points;
}

void write_text_file(const std::string& file, const std::string& content) {
  auto out = open_for_write(file);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + file);
}

void ensure_directory(const std::string& dir) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
}

}  // namespace loclim
