#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cara/marl/training.hpp"

namespace cara::experiment {

struct MetricsRow {
  int episode = 0;  // 1-based
  std::string algorithm;
  std::uint64_t seed = 0;
  double learning_rate = 0.0;
  double total_reward = 0.0;
  double mean_throughput_mbps = 0.0;
  int association_failures = 0;
  int collisions = 0;
  double wall_seconds = 0.0;
};

const std::vector<std::string>& metrics_columns();
std::string metrics_header();

MetricsRow make_row(const marl::EpisodeMetrics& m, const std::string& algorithm,
                    std::uint64_t seed, double learning_rate);

// Reals with 17 significant digits.
std::string format_row(const MetricsRow& row);
MetricsRow parse_row(const std::string& line);

std::vector<MetricsRow> read_metrics(const std::filesystem::path& path);

// Rewrites a CSV keeping only rows with episode < first_episode (1-based).
void truncate_metrics(const std::filesystem::path& path, int first_episode);

/// Appends rows to a CSV, writing the header if the file is new or empty.
class MetricsWriter {
 public:
  explicit MetricsWriter(const std::filesystem::path& path);
  void write(const MetricsRow& row);

 private:
  std::filesystem::path path_;
};

// Copy of a CSV with the wall-clock column removed; used for determinism
// comparisons.
std::string strip_wall_clock(const std::string& csv_text);

}  // namespace cara::experiment
