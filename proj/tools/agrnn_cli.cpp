#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "agrnn/config.hpp"
#include "agrnn/error.hpp"
#include "agrnn/pipeline.hpp"
#include "agrnn/spectral.hpp"

namespace fs = std::filesystem;
using namespace agrnn;

namespace {

void print_record(const StageRecord& r) {
  std::cerr << "[stage " << r.stage_index << ' ' << to_string(r.kind) << ' ' << r.label << "] M=" << r.M
            << " m_p=" << r.m_p;
  if (r.r_opt.size() > 0) {
    std::cerr << " r_opt=(";
    for (Eigen::Index t = 0; t < r.r_opt.size(); ++t) std::cerr << (t ? "," : "") << r.r_opt[t];
    std::cerr << ')';
  }
  std::cerr << std::setprecision(4) << " loss=" << r.loss << " res=" << r.lsq_residual << " e0=" << r.e0;
  if (r.paper_e0) std::cerr << " (paper " << *r.paper_e0 << ')';
  if (!r.accepted) std::cerr << " rejected";
  std::cerr << " t=" << std::setprecision(3) << r.wall_time_s << "s\n";
}

int run(const RunConfig& cfg, std::optional<std::uint64_t> seed, const fs::path& out_dir, bool dump_spectra) {
  PipelineOptions opts;
  opts.seed = seed;
  opts.on_record = print_record;
  if (dump_spectra) opts.spectra_dir = out_dir / "spectra";
  const PipelineResult result = run_pipeline(cfg, opts);
  write_outputs(result, out_dir);
  std::cerr << "wrote " << (out_dir / "results.csv").string() << '\n';
  return 0;
}

// Spectrum of f on the sampling grid of the first frequency-selected stage.
int spectrum(const RunConfig& cfg, const std::optional<fs::path>& out_path) {
  const PdeProblem problem = build_problem(cfg);
  FreqInitConfig freq;
  for (const auto& s : cfg.stages) {
    if (s.kind == StageKind::FreqInit || s.kind == StageKind::NeuronGrowth) {
      freq = s.freq;
      break;
    }
  }
  const SpectrumSample sample =
      sample_on_grid(problem.rhs, problem.domain.bounding_box(), freq.sampling_rate(problem.dim()));
  if (out_path) {
    std::ofstream out(*out_path);
    write_spectrum_csv(out, sample);
  } else {
    write_spectrum_csv(std::cout, sample);
  }
  try {
    const PeakFrequency peak = peak_frequency(sample);
    std::cerr << "peak xi0 = (";
    for (Eigen::Index t = 0; t < peak.xi.size(); ++t) std::cerr << (t ? "," : "") << peak.xi[t];
    std::cerr << ")\n";
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive growing randomized neural networks for PDEs"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "agrnn-out";
  bool dump_spectra = false;
  auto* solve = app.add_subcommand("solve", "Run the pipeline described by a JSON config");
  solve->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  solve->add_option("--seed", seed, "Override the config seed");
  solve->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
  solve->add_flag("--dump-spectra", dump_spectra, "Write sampled spectra as CSV under <out-dir>/spectra");

  std::string case_id;
  auto* reproduce = app.add_subcommand("reproduce", "Run a built-in reference configuration");
  reproduce->add_option("case", case_id, "Case id (see 'list')")->required();
  reproduce->add_option("--seed", seed, "Override the config seed");
  reproduce->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
  reproduce->add_flag("--dump-spectra", dump_spectra, "Write sampled spectra as CSV under <out-dir>/spectra");

  std::string spectrum_config;
  std::optional<std::string> spectrum_out;
  auto* spec = app.add_subcommand("spectrum", "Print the one-sided spectrum of f as CSV");
  spec->add_option("--config", spectrum_config, "Config file")->required()->check(CLI::ExistingFile);
  spec->add_option("--out", spectrum_out, "Write to a file instead of stdout");

  std::string show_case;
  auto* list = app.add_subcommand("list", "List built-in cases");
  auto* show = app.add_subcommand("show", "Print the resolved JSON of a built-in case");
  show->add_option("case", show_case, "Case id")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return run(load_config(config_path), seed, out_dir, dump_spectra);
    if (*reproduce) {
      const auto cfg = builtin_config(case_id);
      if (!cfg) {
        std::cerr << "error: unknown case id '" << case_id << "'; known cases:";
        for (const auto& c : builtin_cases()) std::cerr << ' ' << c;
        std::cerr << '\n';
        return 2;
      }
      return run(*cfg, seed, out_dir, dump_spectra);
    }
    if (*spec) {
      std::optional<fs::path> out;
      if (spectrum_out) out = *spectrum_out;
      return spectrum(load_config(spectrum_config), out);
    }
    if (*list) {
      for (const auto& c : builtin_cases()) std::cout << c << '\n';
      return 0;
    }
    if (*show) {
      const auto cfg = builtin_config(show_case);
      if (!cfg) {
        std::cerr << "error: unknown case id '" << show_case << "'\n";
        return 2;
      }
      std::cout << to_json(*cfg).dump(2) << '\n';
      return 0;
    }
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::InvalidConfig ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
