#include "cara/experiment/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace cara::experiment {

ConfigError::ConfigError(const std::string& key, int line, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (key.empty() ? std::string() : "'" + key + "': ") + message),
      key_(key),
      line_(line) {}

std::string format_real(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Ctx {
  std::string key;
  int line;
  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(key, line, msg); }
};

double to_real(const Ctx& c, std::string_view v) {
  double out = 0.0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc{} || res.ptr != v.data() + v.size() || !std::isfinite(out))
    c.fail("cannot parse '" + std::string(v) + "' as a real number");
  return out;
}

long long to_integer(const Ctx& c, std::string_view v) {
  long long out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc{} || res.ptr != v.data() + v.size())
    c.fail("cannot parse '" + std::string(v) + "' as an integer");
  return out;
}

int to_int(const Ctx& c, std::string_view v) {
  const long long x = to_integer(c, v);
  if (x < -1000000000LL || x > 1000000000LL) c.fail("integer out of range");
  return static_cast<int>(x);
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = v.find(',');
    out.push_back(trim(v.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    v = v.substr(comma + 1);
  }
  return out;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  return out;
}

struct Field {
  std::string key;
  bool numeric;
  std::function<void(ExperimentConfig&, const Ctx&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

Field real_field(std::string key, double env::TopologyConfig::*member) {
  return {key, true,
          [member](ExperimentConfig& c, const Ctx& ctx, std::string_view v) {
            c.topology.*member = to_real(ctx, v);
          },
          [member](const ExperimentConfig& c) { return format_real(c.topology.*member); }};
}

Field int_field(std::string key, int env::TopologyConfig::*member) {
  return {key, true,
          [member](ExperimentConfig& c, const Ctx& ctx, std::string_view v) {
            c.topology.*member = to_int(ctx, v);
          },
          [member](const ExperimentConfig& c) { return std::to_string(c.topology.*member); }};
}

Field radio_real(std::string key, double env::RadioParams::*member) {
  return {key, true,
          [member](ExperimentConfig& c, const Ctx& ctx, std::string_view v) {
            c.topology.radio.*member = to_real(ctx, v);
          },
          [member](const ExperimentConfig& c) { return format_real(c.topology.radio.*member); }};
}

Field radio_int(std::string key, int env::RadioParams::*member) {
  return {key, true,
          [member](ExperimentConfig& c, const Ctx& ctx, std::string_view v) {
            c.topology.radio.*member = to_int(ctx, v);
          },
          [member](const ExperimentConfig& c) { return std::to_string(c.topology.radio.*member); }};
}

Field trainer_real(std::string key, double marl::TrainerConfig::*member) {
  return {key, true,
          [member](ExperimentConfig& c, const Ctx& ctx, std::string_view v) {
            c.trainer.*member = to_real(ctx, v);
          },
          [member](const ExperimentConfig& c) { return format_real(c.trainer.*member); }};
}

Field trainer_int(std::string key, int marl::TrainerConfig::*member) {
  return {key, true,
          [member](ExperimentConfig& c, const Ctx& ctx, std::string_view v) {
            c.trainer.*member = to_int(ctx, v);
          },
          [member](const ExperimentConfig& c) { return std::to_string(c.trainer.*member); }};
}

const std::vector<Field>& fields() {
  using T = env::TopologyConfig;
  using R = env::RadioParams;
  using M = marl::TrainerConfig;
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(int_field("topology.mabs_count", &T::macro_count));
    f.push_back(int_field("topology.mibs_count", &T::micro_count));
    f.push_back(int_field("topology.pbs_count", &T::pico_count));
    f.push_back(int_field("topology.vue_count", &T::vue_count));
    f.push_back(real_field("topology.mabs_radius_m", &T::macro_radius_m));
    f.push_back(real_field("topology.mibs_radius_m", &T::micro_radius_m));
    f.push_back(real_field("topology.pbs_radius_m", &T::pico_radius_m));
    f.push_back(real_field("topology.mabs_power_dbm", &T::macro_power_dbm));
    f.push_back(real_field("topology.mibs_power_dbm", &T::micro_power_dbm));
    f.push_back(real_field("topology.pbs_power_dbm", &T::pico_power_dbm));
    f.push_back(real_field("topology.shared_bandwidth_hz", &T::shared_bandwidth_hz));
    f.push_back(real_field("topology.mmwave_bandwidth_hz", &T::mmwave_bandwidth_hz));
    f.push_back(real_field("topology.shared_pathloss_a_db", &T::shared_pathloss_a_db));
    f.push_back(real_field("topology.shared_pathloss_b_db", &T::shared_pathloss_b_db));
    f.push_back(real_field("topology.mmwave_pathloss_a_db", &T::mmwave_pathloss_a_db));
    f.push_back(real_field("topology.mmwave_pathloss_b_db", &T::mmwave_pathloss_b_db));
    f.push_back(real_field("topology.deployment_radius_m", &T::deployment_radius_m));
    f.push_back(radio_int("topology.shared_channels", &R::shared_channels));
    f.push_back(radio_int("topology.mmwave_channels", &R::mmwave_channels));
    f.push_back(radio_int("topology.max_channels", &R::max_channels));
    f.push_back(radio_real("topology.qos_threshold_db", &R::qos_threshold_db));
    f.push_back(radio_real("topology.noise_density_dbm_hz", &R::noise_density_dbm_hz));
    f.push_back(radio_real("topology.power_cost", &R::power_cost));
    f.push_back(radio_real("topology.profit_per_mbps", &R::profit_per_mbps));
    f.push_back(radio_real("topology.failure_penalty", &R::failure_penalty));

    f.push_back(trainer_int("trainer.episodes", &M::episodes));
    f.push_back(trainer_int("trainer.steps", &M::steps_per_episode));
    f.push_back(trainer_int("trainer.minibatch", &M::minibatch));
    f.push_back(trainer_real("trainer.gamma", &M::gamma));
    f.push_back(trainer_real("trainer.tau", &M::tau));
    f.push_back(trainer_real("trainer.noise_initial", &M::noise_initial));
    f.push_back(trainer_real("trainer.noise_final", &M::noise_final));
    f.push_back(trainer_real("trainer.learning_rate", &M::learning_rate));
    f.push_back(trainer_real("trainer.grad_clip", &M::grad_clip));
    f.push_back({"trainer.noise_decay_episodes", true,
                 [](ExperimentConfig& c, const Ctx& ctx, std::string_view v) {
                   c.noise_decay_episodes = to_int(ctx, v);
                 },
                 [](const ExperimentConfig& c) {
                   return std::to_string(c.resolved_trainer(0).noise_decay_episodes);
                 }});
    f.push_back({"trainer.buffer_capacity", true,
                 [](ExperimentConfig& c, const Ctx& ctx, std::string_view v) {
                   const long long x = to_integer(ctx, v);
                   if (x < 1) ctx.fail("must be positive");
                   c.trainer.buffer_capacity = static_cast<std::size_t>(x);
                 },
                 [](const ExperimentConfig& c) { return std::to_string(c.trainer.buffer_capacity); }});
    f.push_back({"trainer.hidden", false,
                 [](ExperimentConfig& c, const Ctx& ctx, std::string_view v) {
                   std::vector<int> dims;
                   for (auto part : split_list(v)) dims.push_back(to_int(ctx, part));
                   c.trainer.hidden = dims;
                 },
                 [](const ExperimentConfig& c) { return join(c.trainer.hidden); }});

    f.push_back({"run.algo", false,
                 [](ExperimentConfig& c, const Ctx& ctx, std::string_view v) {
                   const auto& tags = algorithm_tags();
                   if (std::find(tags.begin(), tags.end(), v) == tags.end())
                     ctx.fail("unknown algorithm '" + std::string(v) +
                              "' (expected maddpg, ddpg, ac or random)");
                   c.run.algorithm = std::string(v);
                 },
                 [](const ExperimentConfig& c) { return c.run.algorithm; }});
    f.push_back({"run.output_dir", false,
                 [](ExperimentConfig& c, const Ctx& ctx, std::string_view v) {
                   if (v.empty()) ctx.fail("output directory must not be empty");
                   c.run.output_dir = std::string(v);
                 },
                 [](const ExperimentConfig& c) { return c.run.output_dir.string(); }});
    f.push_back({"run.checkpoint_every", true,
                 [](ExperimentConfig& c, const Ctx& ctx, std::string_view v) {
                   c.run.checkpoint_every = to_int(ctx, v);
                 },
                 [](const ExperimentConfig& c) { return std::to_string(c.run.checkpoint_every); }});
    f.push_back({"run.seeds", false,
                 [](ExperimentConfig& c, const Ctx& ctx, std::string_view v) {
                   std::vector<std::uint64_t> seeds;
                   for (auto part : split_list(v)) {
                     const long long s = to_integer(ctx, part);
                     if (s < 0) ctx.fail("seeds must be non-negative");
                     seeds.push_back(static_cast<std::uint64_t>(s));
                   }
                   c.run.seeds = seeds;
                 },
                 [](const ExperimentConfig& c) { return join(c.run.seeds); }});
    std::sort(f.begin(), f.end(), [](const Field& a, const Field& b) { return a.key < b.key; });
    return f;
  }();
  return table;
}

const Field* find_field(std::string_view key) {
  for (const Field& f : fields())
    if (f.key == key) return &f;
  return nullptr;
}

}  // namespace

const std::vector<std::string>& algorithm_tags() {
  static const std::vector<std::string> tags{"maddpg", "ddpg", "ac", "random"};
  return tags;
}

marl::TrainerConfig ExperimentConfig::resolved_trainer(std::uint64_t seed) const {
  marl::TrainerConfig t = trainer;
  t.noise_decay_episodes = noise_decay_episodes.value_or(
      std::max(1, static_cast<int>(std::lround(0.8 * trainer.episodes))));
  t.seed = seed;
  return t;
}

namespace {

using LineMap = std::map<std::string, int, std::less<>>;

void check(bool ok, const LineMap& lines, const std::string& key, const std::string& msg) {
  if (ok) return;
  auto it = lines.find(key);
  throw ConfigError(key, it == lines.end() ? 0 : it->second, msg);
}

void validate_with_lines(const ExperimentConfig& c, const LineMap& lines) {
  const auto& t = c.topology;
  const auto& r = t.radio;
  const auto& m = c.trainer;
  check(t.macro_count >= 1, lines, "topology.mabs_count", "must be >= 1");
  check(t.micro_count >= 1, lines, "topology.mibs_count", "must be >= 1");
  check(t.pico_count >= 1, lines, "topology.pbs_count", "must be >= 1");
  check(t.vue_count >= 1, lines, "topology.vue_count", "must be >= 1");
  check(t.macro_radius_m > 0, lines, "topology.mabs_radius_m", "must be positive");
  check(t.micro_radius_m > 0, lines, "topology.mibs_radius_m", "must be positive");
  check(t.pico_radius_m > 0, lines, "topology.pbs_radius_m", "must be positive");
  check(t.shared_bandwidth_hz > 0, lines, "topology.shared_bandwidth_hz", "must be positive");
  check(t.mmwave_bandwidth_hz > 0, lines, "topology.mmwave_bandwidth_hz", "must be positive");
  check(t.deployment_radius_m >= 0 && t.deployment_radius_m <= t.macro_radius_m, lines,
        "topology.deployment_radius_m", "must lie in [0, topology.mabs_radius_m]");
  check(r.shared_channels >= 1, lines, "topology.shared_channels", "S must be >= 1");
  check(r.mmwave_channels >= 1, lines, "topology.mmwave_channels", "P must be >= 1");
  check(r.max_channels >= 1, lines, "topology.max_channels", "c_bar must be >= 1");
  check(r.power_cost >= 0, lines, "topology.power_cost", "must be >= 0");
  check(r.profit_per_mbps > 0, lines, "topology.profit_per_mbps", "must be positive");
  check(r.failure_penalty >= 0, lines, "topology.failure_penalty", "must be >= 0");

  check(m.episodes >= 1, lines, "trainer.episodes", "must be >= 1");
  check(m.steps_per_episode >= 1, lines, "trainer.steps", "must be >= 1");
  check(m.minibatch >= 1, lines, "trainer.minibatch", "must be >= 1");
  check(m.gamma >= 0.0 && m.gamma < 1.0, lines, "trainer.gamma",
        "discount gamma must lie in [0, 1), got " + format_real(m.gamma));
  check(m.tau >= 0.0 && m.tau <= 1.0, lines, "trainer.tau", "must lie in [0, 1]");
  check(m.noise_initial >= 0.0, lines, "trainer.noise_initial", "must be >= 0");
  check(m.noise_final >= 0.0, lines, "trainer.noise_final", "must be >= 0");
  check(!c.noise_decay_episodes || *c.noise_decay_episodes >= 1, lines,
        "trainer.noise_decay_episodes", "must be >= 1");
  check(m.learning_rate > 0.0, lines, "trainer.learning_rate", "must be positive");
  check(m.grad_clip >= 0.0, lines, "trainer.grad_clip", "must be >= 0");
  check(static_cast<std::size_t>(m.minibatch) <= m.buffer_capacity, lines, "trainer.minibatch",
        "must not exceed trainer.buffer_capacity");
  check(!m.hidden.empty() && std::all_of(m.hidden.begin(), m.hidden.end(),
                                         [](int h) { return h >= 1; }),
        lines, "trainer.hidden", "layer sizes must be positive");
  check(c.run.checkpoint_every >= 0, lines, "run.checkpoint_every", "must be >= 0");
  check(!c.run.seeds.empty(), lines, "run.seeds", "must list at least one seed");

  // Backstop for cross-field invariants owned by the modules themselves.
  try {
    t.validate();
    c.resolved_trainer(0).validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("", 0, e.what());
  }
}

}  // namespace

void ExperimentConfig::validate() const { validate_with_lines(*this, {}); }

void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value,
                      int line) {
  const Field* f = find_field(key);
  if (!f) throw ConfigError(std::string(key), line, "unknown configuration key");
  f->set(cfg, Ctx{std::string(key), line}, trim(value));
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  LineMap lines;
  int line_no = 0;
  std::istringstream is{std::string(text)};
  std::string raw;
  while (std::getline(is, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("", line_no, "expected 'key = value', got '" + std::string(line) + "'");
    const std::string_view key = trim(line.substr(0, eq));
    set_config_value(cfg, key, line.substr(eq + 1), line_no);
    lines[std::string(key)] = line_no;
  }
  validate_with_lines(cfg, lines);
  return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("", 0, "cannot read config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

bool is_config_key(std::string_view key) { return find_field(key) != nullptr; }

bool is_numeric_config_key(std::string_view key) {
  const Field* f = find_field(key);
  return f && f->numeric;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const Field& f : fields()) keys.push_back(f.key);
  return keys;
}

std::string get_config_value(const ExperimentConfig& cfg, std::string_view key) {
  const Field* f = find_field(key);
  if (!f) throw ConfigError(std::string(key), 0, "unknown configuration key");
  return f->get(cfg);
}

std::string resolved_config_text(const ExperimentConfig& cfg) {
  std::string out;
  for (const Field& f : fields()) out += f.key + " = " + f.get(cfg) + "\n";
  return out;
}

ExperimentConfig desk_preset() {
  ExperimentConfig cfg;
  cfg.topology.macro_count = 1;
  cfg.topology.micro_count = 2;
  cfg.topology.pico_count = 4;
  cfg.topology.vue_count = 4;
  cfg.topology.radio.shared_channels = 6;
  cfg.topology.radio.mmwave_channels = 3;
  // Spread over the full 3000 m macro disc, four VUEs almost never land in a
  // small cell; keep them within a micro radius of the macro.
  cfg.topology.deployment_radius_m = 500.0;
  cfg.trainer.episodes = 300;
  cfg.trainer.steps_per_episode = 50;
  return cfg;
}

}  // namespace cara::experiment
