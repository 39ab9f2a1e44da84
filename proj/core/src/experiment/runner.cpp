#include "cara/experiment/runner.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cara/baselines/actor_critic.hpp"
#include "cara/baselines/ddpg.hpp"
#include "cara/baselines/random_policy.hpp"
#include "cara/env/hetvnet_env.hpp"
#include "cara/experiment/metrics.hpp"
#include "cara/marl/maddpg.hpp"
#include "cara/nn/serialize.hpp"

namespace fs = std::filesystem;

namespace cara::experiment {

std::unique_ptr<marl::Learner> make_learner(const std::string& algorithm,
                                            const env::Topology& topology,
                                            const marl::TrainerConfig& trainer) {
  const std::size_t n = topology.vue_count();
  const int l = topology.action_length();
  if (algorithm == "maddpg") return std::make_unique<marl::MaddpgLearner>(n, l, trainer);
  if (algorithm == "ddpg") return std::make_unique<baselines::DdpgLearner>(n, l, trainer);
  if (algorithm == "ac") return std::make_unique<baselines::VanillaAcLearner>(n, l, trainer);
  if (algorithm == "random")
    return std::make_unique<baselines::RandomLearner>(n, l, trainer.seed);
  throw std::invalid_argument("unknown algorithm '" + algorithm + "'");
}

env::Topology run_topology(const ExperimentConfig& cfg, std::uint64_t seed) {
  return env::build_topology(cfg.topology, seed);
}

fs::path metrics_path(const fs::path& out, const std::string& algorithm, std::uint64_t seed) {
  return out / ("metrics_" + algorithm + "_seed" + std::to_string(seed) + ".csv");
}

fs::path checkpoint_root(const fs::path& out, const std::string& algorithm, std::uint64_t seed) {
  return out / "checkpoints" / (algorithm + "_seed" + std::to_string(seed));
}

fs::path checkpoint_dir(const fs::path& out, const std::string& algorithm, std::uint64_t seed,
                        int episodes) {
  return checkpoint_root(out, algorithm, seed) / ("episode_" + std::to_string(episodes));
}

namespace {

constexpr const char* kProgressMagic = "CARAPROGRESS 1";

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

void save_checkpoint(const fs::path& dir, const ExperimentConfig& cfg, const marl::Learner& learner,
                     const std::string& algorithm, std::uint64_t seed, int next_episode,
                     const fs::path& out) {
  fs::create_directories(dir);
  learner.save(dir);
  ExperimentConfig echo = cfg;
  echo.run.algorithm = algorithm;
  echo.run.seeds = {seed};
  write_text(dir / "resolved-config", resolved_config_text(echo));
  nn::FileHeader h;
  h.magic = kProgressMagic;
  h.fields["algorithm"] = algorithm;
  h.fields["seed"] = std::to_string(seed);
  h.fields["next_episode"] = std::to_string(next_episode);
  h.fields["output_dir"] = fs::absolute(out).lexically_normal().string();
  std::ofstream os(dir / "progress", std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + (dir / "progress").string());
  nn::write_header(os, h);
}

// Shared by fresh runs and resumes.
RunResult drive(const ExperimentConfig& cfg, const std::string& algorithm, std::uint64_t seed,
                const fs::path& out, int first_episode, std::ostream* log,
                const fs::path& resume_from = {}) {
  RunResult result;
  result.algorithm = algorithm;
  result.seed = seed;

  const marl::TrainerConfig trainer = cfg.resolved_trainer(seed);
  env::HetVNetEnv env(run_topology(cfg, seed));
  auto learner = make_learner(algorithm, env.topology(), trainer);
  if (!resume_from.empty()) learner->load(resume_from);

  std::optional<MetricsWriter> writer;
  if (!out.empty()) {
    fs::create_directories(out);
    result.csv = metrics_path(out, algorithm, seed);
    if (first_episode == 0) {
      fs::remove(result.csv);
    } else {
      truncate_metrics(result.csv, first_episode + 1);
    }
    writer.emplace(result.csv);
  }

  marl::TrainingHooks hooks;
  hooks.first_episode = first_episode;
  const int every = cfg.run.checkpoint_every;
  hooks.on_episode = [&](const marl::EpisodeMetrics& m) {
    if (writer) {
      writer->write(make_row(m, algorithm, seed, trainer.learning_rate));
      const int done = m.episode + 1;
      if (done == trainer.episodes || (every > 0 && done % every == 0))
        save_checkpoint(checkpoint_dir(out, algorithm, seed, done), cfg, *learner, algorithm, seed,
                        done, out);
    }
    if (log && ((m.episode + 1) % 50 == 0 || m.episode + 1 == trainer.episodes))
      *log << algorithm << " seed " << seed << " episode " << m.episode + 1 << "/"
           << trainer.episodes << " reward " << format_real(m.total_reward) << std::endl;
  };

  try {
    result.series = marl::run_training(env, *learner, trainer, hooks);
  } catch (const marl::TrainingAborted& e) {
    result.aborted = true;
    result.error = e.what();
    if (log) *log << algorithm << " seed " << seed << ": " << e.what() << '\n';
  }
  return result;
}

}  // namespace

RunResult run_single(const ExperimentConfig& cfg, const std::string& algorithm,
                     std::uint64_t seed, const fs::path& out, std::ostream* log) {
  return drive(cfg, algorithm, seed, out, 0, log);
}

int run_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  cfg.validate();
  const fs::path out = cfg.run.output_dir;
  fs::create_directories(out);
  write_text(out / "resolved-config", resolved_config_text(cfg));
  bool aborted = false;
  for (std::uint64_t seed : cfg.run.seeds)
    aborted |= run_single(cfg, cfg.run.algorithm, seed, out, log).aborted;
  return aborted ? 1 : 0;
}

int sweep(const ExperimentConfig& cfg, const std::string& param,
          const std::vector<std::string>& values, std::ostream* log) {
  const std::string key = param == "algo" ? "run.algo" : param;
  if (key != "run.algo" && !is_numeric_config_key(key))
    throw ConfigError(param, 0, "not a numeric configuration key");
  if (values.empty()) throw ConfigError(param, 0, "sweep needs at least one value");
  int status = 0;
  for (const std::string& v : values) {
    ExperimentConfig c = cfg;
    set_config_value(c, key, v);
    c.run.output_dir = cfg.run.output_dir / (param + "=" + v);
    c.validate();
    if (log) *log << "sweep " << param << " = " << v << '\n';
    status |= run_experiment(c, log);
  }
  return status;
}

CheckpointInfo read_checkpoint_info(const fs::path& dir) {
  std::ifstream is(dir / "progress");
  if (!is) throw std::runtime_error("no progress file in " + dir.string());
  const nn::FileHeader h = nn::read_header(is, kProgressMagic);
  CheckpointInfo info;
  info.algorithm = h.at("algorithm");
  info.seed = std::stoull(h.at("seed"));
  info.next_episode = std::stoi(h.at("next_episode"));
  info.output_dir = h.at("output_dir");
  return info;
}

int resume(const fs::path& checkpoint, std::ostream* log,
           const std::optional<fs::path>& output_override) {
  const CheckpointInfo info = read_checkpoint_info(checkpoint);
  ExperimentConfig cfg = parse_config_file(checkpoint / "resolved-config");
  const fs::path out = output_override.value_or(info.output_dir);
  cfg.run.output_dir = out;
  if (info.next_episode >= cfg.trainer.episodes) {
    if (log) *log << "checkpoint is already at the final episode\n";
    return 0;
  }
  return drive(cfg, info.algorithm, info.seed, out, info.next_episode, log, checkpoint).aborted
             ? 1
             : 0;
}

}  // namespace cara::experiment
