#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "loclim/rescaled_path.hpp"

namespace loclim {

// Shortest round-trip decimal form; used for every serialised double so that
// output bytes do not depend on locale or stream state.
std::string format_double(double v);

struct SampleRow {
  std::uint64_t replica = 0;
  std::string statistic;
  double value = 0.0;
};

// Schema: replica,statistic,value
void write_samples_csv(const std::string& file, std::span<const SampleRow> rows);

// Schema: t,value
void write_path_csv(const std::string& file, std::span<const PathPoint> points);
std::vector<PathPoint> read_path_csv(const std::string& file);

void write_text_file(const std::string& file, const std::string& content);
void ensure_directory(const std::string& dir);

}  // namespace loclim
