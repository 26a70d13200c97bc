#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agrnn/config.hpp"
#include "agrnn/nonlinear.hpp"
#include "agrnn/splitting.hpp"

namespace agrnn {

/// One row of results.csv: a stage, or one step of a neuron-growth stage.
struct StageRecord {
  int stage_index = 0;
  StageKind kind = StageKind::FixedInit;
  std::string label;
  int M = 0;    // basis functions after pruning
  int m_p = 0;  // pruned columns
  Vec r_opt;    // empty unless frequency-selected
  double interior_rms = 0.0;
  double boundary_rms = 0.0;
  double loss = 0.0;
  double lsq_residual = 0.0;  // ||A c - b|| of the final solve
  double e0 = 0.0;
  std::optional<double> paper_e0;
  bool accepted = true;  // false: growth step rejected, previous network kept
  double wall_time_s = 0.0;
  IterationLog log;
};

/// Failure inside a stage; the message carries the stage index and label.
class StageError : public Error {
 public:
  StageError(const Error& cause, int stage_index, std::string label)
      : Error(cause.kind(), "stage " + std::to_string(stage_index) + " (" + label + "): " + strip(cause.what(), cause.kind())),
        stage_index_(stage_index),
        label_(std::move(label)) {}

  int stage_index() const { return stage_index_; }
  const std::string& label() const { return label_; }

 private:
  static std::string strip(const std::string& what, ErrorKind kind) {
    const std::string prefix = std::string(to_string(kind)) + ": ";
    return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
  }

  int stage_index_;
  std::string label_;
};

struct PipelineOptions {
  std::optional<std::uint64_t> seed;      // overrides the config seed
  std::optional<std::filesystem::path> spectra_dir;  // dump sampled spectra here
  std::function<void(const StageRecord&)> on_record;  // progress callback
};

struct PipelineResult {
  RunConfig config;
  PdeProblem problem;
  CollocationSet colloc;
  QuadratureRule quadrature;
  std::vector<StageRecord> records;
  std::optional<Solution> solution;  // latest single-network solution
  std::optional<SplitModel> split;   // set when the last stage is a split
  std::map<std::string, Solution> labeled;
  std::vector<FrequencyChoice> choices;

  /// Final model: the split when present, else the latest solution.
  Vec predict(const PointSet& points) const;
  double final_e0() const { return records.empty() ? 0.0 : records.back().e0; }
};

/// Builds the problem, collocation and quadrature for a config.
PdeProblem build_problem(const RunConfig& cfg);

PipelineResult run_pipeline(const RunConfig& cfg, const PipelineOptions& opts = {});

inline constexpr const char* kResultsSchema = "# agrnn-results v1";

/// results.csv, solution_grid.csv and config_echo.json under `dir`.
void write_outputs(const PipelineResult& result, const std::filesystem::path& dir);
void write_results_csv(std::ostream& out, const std::vector<StageRecord>& records);

}  // namespace agrnn
