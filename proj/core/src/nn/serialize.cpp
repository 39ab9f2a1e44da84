#include "cara/nn/serialize.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cara::nn {

namespace {

template <typename T>
void put_le(std::ostream& os, T value) {
  std::array<char, sizeof(T)> buf{};
  for (std::size_t i = 0; i < sizeof(T); ++i)
    buf[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  os.write(buf.data(), buf.size());
}

template <typename T>
T get_le(std::istream& is) {
  std::array<unsigned char, sizeof(T)> buf{};
  is.read(reinterpret_cast<char*>(buf.data()), buf.size());
  if (!is) throw std::runtime_error("truncated array record");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(buf[i]) << (8 * i);
  return value;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

double parse_double(const std::string& text) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw std::runtime_error("corrupt header: bad number '" + text + "'");
  return v;
}

std::size_t parse_count(const std::string& text) {
  std::size_t v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw std::runtime_error("corrupt header: bad count '" + text + "'");
  return v;
}

std::string layer_name(std::size_t l, const char* part) {
  return "layer" + std::to_string(l) + "." + part;
}

std::vector<double> copy_out(const Eigen::MatrixXd& m) {
  return std::vector<double>(m.data(), m.data() + m.size());
}

std::vector<double> copy_out(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

void append_layers(std::vector<NamedArray>& out, const std::vector<DenseLayer>& layers,
                   const std::string& prefix) {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    out.push_back({prefix + layer_name(l, "weight"), copy_out(layers[l].weight)});
    out.push_back({prefix + layer_name(l, "bias"), copy_out(layers[l].bias)});
  }
}

template <typename Dense>
void fill(Dense& dst, const NamedArray& src, const std::string& expected_name) {
  if (src.name != expected_name)
    throw std::runtime_error("expected array '" + expected_name + "', found '" + src.name + "'");
  if (src.values.size() != static_cast<std::size_t>(dst.size()))
    throw std::runtime_error("array '" + src.name + "' has " + std::to_string(src.values.size()) +
                             " values, expected " + std::to_string(dst.size()));
  std::copy(src.values.begin(), src.values.end(), dst.data());
}

void read_layers(std::vector<DenseLayer>& layers, const std::vector<NamedArray>& arrays,
                 std::size_t& pos, const std::string& prefix) {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    fill(layers[l].weight, arrays.at(pos++), prefix + layer_name(l, "weight"));
    fill(layers[l].bias, arrays.at(pos++), prefix + layer_name(l, "bias"));
  }
}

std::vector<DenseLayer> zero_layers(const std::vector<int>& dims) {
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l)
    layers.push_back(
        {Eigen::MatrixXd::Zero(dims[l + 1], dims[l]), Eigen::VectorXd::Zero(dims[l + 1])});
  return layers;
}

}  // namespace

void write_arrays(std::ostream& os, std::span<const NamedArray> arrays) {
  for (const NamedArray& a : arrays) {
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(a.name.size()));
    os.write(a.name.data(), static_cast<std::streamsize>(a.name.size()));
    put_le<std::uint64_t>(os, a.values.size());
    for (double v : a.values) put_le<std::uint64_t>(os, std::bit_cast<std::uint64_t>(v));
  }
}

std::vector<NamedArray> read_arrays(std::istream& is, std::size_t count) {
  std::vector<NamedArray> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    NamedArray a;
    const auto len = get_le<std::uint32_t>(is);
    if (len > 4096) throw std::runtime_error("corrupt array name length");
    a.name.resize(len);
    is.read(a.name.data(), len);
    if (!is) throw std::runtime_error("truncated array name");
    const auto n = get_le<std::uint64_t>(is);
    if (n > (1ULL << 32)) throw std::runtime_error("corrupt array length");
    a.values.resize(n);
    for (auto& v : a.values) v = std::bit_cast<double>(get_le<std::uint64_t>(is));
    out.push_back(std::move(a));
  }
  return out;
}

const std::string& FileHeader::at(const std::string& key) const {
  auto it = fields.find(key);
  if (it == fields.end()) throw std::runtime_error("corrupt header: missing '" + key + "'");
  return it->second;
}

void write_header(std::ostream& os, const FileHeader& header) {
  os << header.magic << '\n';
  for (const auto& [k, v] : header.fields) os << k << ' ' << v << '\n';
  os << "end\n";
}

FileHeader read_header(std::istream& is, std::string_view expected_magic) {
  FileHeader h;
  if (!std::getline(is, h.magic) || h.magic != expected_magic)
    throw std::runtime_error("corrupt header: expected '" + std::string(expected_magic) + "'");
  std::string line;
  while (std::getline(is, line)) {
    if (line == "end") return h;
    const auto space = line.find(' ');
    if (space == std::string::npos) throw std::runtime_error("corrupt header line '" + line + "'");
    h.fields[line.substr(0, space)] = line.substr(space + 1);
  }
  throw std::runtime_error("corrupt header: missing 'end'");
}

std::string format_dims(const std::vector<int>& dims) {
  std::string out;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(dims[i]);
  }
  return out;
}

std::vector<int> parse_dims(const std::string& text) {
  std::istringstream is(text);
  std::vector<int> dims;
  int d = 0;
  while (is >> d) dims.push_back(d);
  if (!is.eof() || dims.size() < 2) throw std::runtime_error("corrupt header: dims '" + text + "'");
  return dims;
}

void write_net(std::ostream& os, std::string_view name, std::string_view algorithm,
               const MlpNet& net) {
  std::vector<NamedArray> arrays;
  append_layers(arrays, net.layers(), "");
  FileHeader h{"CARANET 1",
               {{"name", std::string(name)},
                {"algo", std::string(algorithm)},
                {"dims", format_dims(net.dims())},
                {"activation", std::string(to_string(net.output_activation()))},
                {"arrays", std::to_string(arrays.size())}}};
  write_header(os, h);
  write_arrays(os, arrays);
}

NetRecord read_net(std::istream& is) {
  const FileHeader h = read_header(is, "CARANET 1");
  const std::vector<int> dims = parse_dims(h.at("dims"));
  const auto arrays = read_arrays(is, parse_count(h.at("arrays")));
  if (arrays.size() != 2 * (dims.size() - 1))
    throw std::runtime_error("corrupt net file: array count does not match dims");
  std::vector<DenseLayer> layers = zero_layers(dims);
  std::size_t pos = 0;
  read_layers(layers, arrays, pos, "");
  return {h.at("name"), h.at("algo"),
          MlpNet(std::move(layers), parse_output_activation(h.at("activation")))};
}

void write_adam(std::ostream& os, std::string_view name, std::string_view algorithm,
                const AdamState& state) {
  std::vector<NamedArray> arrays;
  append_layers(arrays, state.first_moment, "m.");
  append_layers(arrays, state.second_moment, "v.");
  std::vector<int> dims;
  if (!state.first_moment.empty()) {
    dims.push_back(static_cast<int>(state.first_moment.front().weight.cols()));
    for (const auto& l : state.first_moment) dims.push_back(static_cast<int>(l.weight.rows()));
  }
  FileHeader h{"CARAOPT 1",
               {{"name", std::string(name)},
                {"algo", std::string(algorithm)},
                {"dims", format_dims(dims)},
                {"step", std::to_string(state.step)},
                {"learning_rate", format_double(state.config.learning_rate)},
                {"beta1", format_double(state.config.beta1)},
                {"beta2", format_double(state.config.beta2)},
                {"epsilon", format_double(state.config.epsilon)},
                {"arrays", std::to_string(arrays.size())}}};
  write_header(os, h);
  write_arrays(os, arrays);
}

AdamState read_adam(std::istream& is, const MlpNet& like) {
  const FileHeader h = read_header(is, "CARAOPT 1");
  const std::vector<int> dims = parse_dims(h.at("dims"));
  if (dims != like.dims())
    throw std::runtime_error("optimizer dims [" + h.at("dims") + "] do not match network [" +
                             format_dims(like.dims()) + "]");
  AdamConfig cfg{parse_double(h.at("learning_rate")), parse_double(h.at("beta1")),
                 parse_double(h.at("beta2")), parse_double(h.at("epsilon"))};
  AdamState state(like, cfg);
  state.step = static_cast<std::int64_t>(parse_count(h.at("step")));
  const auto arrays = read_arrays(is, parse_count(h.at("arrays")));
  std::size_t pos = 0;
  read_layers(state.first_moment, arrays, pos, "m.");
  read_layers(state.second_moment, arrays, pos, "v.");
  return state;
}

void save_net(const std::filesystem::path& path, std::string_view name,
              std::string_view algorithm, const MlpNet& net) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  write_net(os, name, algorithm, net);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

MlpNet load_net(const std::filesystem::path& path, const std::vector<int>& expected_dims) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  NetRecord rec = read_net(is);
  if (rec.net.dims() != expected_dims)
    throw std::runtime_error(path.string() + ": expected dims [" + format_dims(expected_dims) +
                             "], file has [" + format_dims(rec.net.dims()) + "]");
  return std::move(rec.net);
}

void save_adam(const std::filesystem::path& path, std::string_view name,
               std::string_view algorithm, const AdamState& state) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  write_adam(os, name, algorithm, state);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

AdamState load_adam(const std::filesystem::path& path, const MlpNet& like) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  return read_adam(is, like);
}

}  // namespace cara::nn
