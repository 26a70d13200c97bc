#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "agrnn/adaptivity.hpp"
#include "agrnn/splitting.hpp"
#include "json.hpp"

namespace agrnn {

enum class StageKind { FreqInit, FixedInit, NeuronGrowth, LayerGrowth, Split };

const char* to_string(StageKind kind);

struct SolverConfig {
  int picard = 1;
  int newton = 0;
};

/// Dense network drawn from a fixed distribution: U(-r, r), m neurons.
struct DenseConfig {
  Vec r;
  int m = 0;
  AnchorMode anchors = AnchorMode::BoxUniform;
  Activation activation{ActivationKind::Tanh};
};

struct StageConfig {
  StageKind kind = StageKind::FixedInit;
  std::string label;
  std::vector<double> paper_e0;  // one reference per executed step, if known
  std::optional<SolverConfig> solver;
  bool warm_start = true;

  FreqInitConfig freq;  // freq_init, neuron_growth
  DenseConfig dense;    // fixed_init; split segments

  std::vector<int> m_add;  // neuron_growth
  double eps_s = 1e-4;
  bool monotone = true;  // reject growth steps that raise the training loss

  LayerGrowthConfig layer;
  std::string pilot;  // layer_growth / split: label of the pilot solution

  int segments = 2;  // split
  PartitionMode partition = PartitionMode::PilotRange;
  std::string indicator;
  bool continuous = false;
  double eps_r = 0.0;
};

struct RunConfig {
  std::string case_id;
  std::string problem;
  double eta = 0.0;
  std::vector<int> interior;
  std::vector<int> boundary_counts;
  double epsilon_c = kDefaultEpsilonC;
  int quadrature = 0;
  std::uint64_t seed = 1;
  SolverConfig solver;
  std::vector<int> output_grid;
  double prune_tol = 1e-14;
  std::vector<StageConfig> stages;
};

/// Validates and fills defaults; errors name the offending field path.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& cfg);

/// Built-in configurations mirroring the reference experiments.
std::optional<RunConfig> builtin_config(const std::string& case_id);
std::vector<std::string> builtin_cases();

/// Named characteristic indicators usable by split stages.
SegmentIndicator named_indicator(const std::string& name);

}  // namespace agrnn
