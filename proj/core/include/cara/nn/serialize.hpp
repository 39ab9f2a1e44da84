#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cara/nn/adam.hpp"
#include "cara/nn/mlp.hpp"

namespace cara::nn {

// Binary record: u32 name length, name bytes, u64 count, count x f64, all
// little-endian.
struct NamedArray {
  std::string name;
  std::vector<double> values;

  friend bool operator==(const NamedArray&, const NamedArray&) = default;
};

void write_arrays(std::ostream& os, std::span<const NamedArray> arrays);
std::vector<NamedArray> read_arrays(std::istream& is, std::size_t count);

/// Text header: a magic line, `key value` lines, then `end`.
struct FileHeader {
  std::string magic;
  std::map<std::string, std::string> fields;

  const std::string& at(const std::string& key) const;
};

void write_header(std::ostream& os, const FileHeader& header);
FileHeader read_header(std::istream& is, std::string_view expected_magic);

std::string format_dims(const std::vector<int>& dims);
std::vector<int> parse_dims(const std::string& text);

struct NetRecord {
  std::string name;
  std::string algorithm;
  MlpNet net;
};

void write_net(std::ostream& os, std::string_view name, std::string_view algorithm,
               const MlpNet& net);
NetRecord read_net(std::istream& is);

void write_adam(std::ostream& os, std::string_view name, std::string_view algorithm,
                const AdamState& state);
// `like` supplies the expected parameter shapes.
AdamState read_adam(std::istream& is, const MlpNet& like);

void save_net(const std::filesystem::path& path, std::string_view name,
              std::string_view algorithm, const MlpNet& net);
// Throws std::runtime_error naming expected vs actual dims on mismatch.
MlpNet load_net(const std::filesystem::path& path, const std::vector<int>& expected_dims);

void save_adam(const std::filesystem::path& path, std::string_view name,
               std::string_view algorithm, const AdamState& state);
AdamState load_adam(const std::filesystem::path& path, const MlpNet& like);

}  // namespace cara::nn
