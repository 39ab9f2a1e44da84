#include "cara/experiment/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cara::experiment {

const std::vector<std::string>& metrics_columns() {
  static const std::vector<std::string> cols{
      "episode",          "algorithm",           "seed",
      "learning_rate",    "total_reward",        "mean_throughput_mbps",
      "association_failures", "collisions",      "wall_seconds"};
  return cols;
}

std::string metrics_header() {
  std::string h;
  for (const auto& c : metrics_columns()) h += (h.empty() ? "" : ",") + c;
  return h;
}

MetricsRow make_row(const marl::EpisodeMetrics& m, const std::string& algorithm,
                    std::uint64_t seed, double learning_rate) {
  return {m.episode + 1,      algorithm,  seed,           learning_rate,
          m.total_reward,     m.mean_throughput_mbps, m.association_failures,
          m.collisions,       m.wall_seconds};
}

namespace {

std::string real17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string format_row(const MetricsRow& r) {
  return std::to_string(r.episode) + "," + r.algorithm + "," + std::to_string(r.seed) + "," +
         real17(r.learning_rate) + "," + real17(r.total_reward) + "," +
         real17(r.mean_throughput_mbps) + "," + std::to_string(r.association_failures) + "," +
         std::to_string(r.collisions) + "," + real17(r.wall_seconds);
}

MetricsRow parse_row(const std::string& line) {
  const auto cells = split_csv(line);
  if (cells.size() != metrics_columns().size())
    throw std::runtime_error("metrics row has " + std::to_string(cells.size()) +
                             " columns, expected " + std::to_string(metrics_columns().size()));
  MetricsRow r;
  r.episode = std::stoi(cells[0]);
  r.algorithm = cells[1];
  r.seed = std::stoull(cells[2]);
  r.learning_rate = std::stod(cells[3]);
  r.total_reward = std::stod(cells[4]);
  r.mean_throughput_mbps = std::stod(cells[5]);
  r.association_failures = std::stoi(cells[6]);
  r.collisions = std::stoi(cells[7]);
  r.wall_seconds = std::stod(cells[8]);
  return r;
}

std::vector<MetricsRow> read_metrics(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != metrics_header())
    throw std::runtime_error(path.string() + ": unexpected metrics header");
  std::vector<MetricsRow> rows;
  while (std::getline(is, line))
    if (!line.empty()) rows.push_back(parse_row(line));
  return rows;
}

void truncate_metrics(const std::filesystem::path& path, int first_episode) {
  if (!std::filesystem::exists(path)) return;
  std::ifstream is(path);
  std::string line;
  std::string kept;
  if (std::getline(is, line)) kept = line + "\n";
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (std::stoi(line.substr(0, line.find(','))) < first_episode) kept += line + "\n";
  }
  is.close();
  std::ofstream os(path, std::ios::trunc);
  os << kept;
}

MetricsWriter::MetricsWriter(const std::filesystem::path& path) : path_(path) {
  const bool fresh = !std::filesystem::exists(path_) || std::filesystem::file_size(path_) == 0;
  std::ofstream os(path_, std::ios::app);
  if (!os) throw std::runtime_error("cannot write " + path_.string());
  if (fresh) os << metrics_header() << '\n';
}

void MetricsWriter::write(const MetricsRow& row) {
  std::ofstream os(path_, std::ios::app);
  if (!os) throw std::runtime_error("cannot write " + path_.string());
  os << format_row(row) << '\n';
}

std::string strip_wall_clock(const std::string& csv_text) {
  std::istringstream is(csv_text);
  std::string line;
  std::string out;
  while (std::getline(is, line)) {
    const auto last = line.rfind(',');
    out += (last == std::string::npos ? line : line.substr(0, last)) + "\n";
  }
  return out;
}

}  // namespace cara::experiment
