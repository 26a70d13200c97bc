#include "agrnn/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "agrnn/adaptivity.hpp"
#include "agrnn/assembly.hpp"
#include "agrnn/error.hpp"
#include "agrnn/spectral.hpp"

namespace agrnn {

Vec PipelineResult::predict(const PointSet& points) const {
  if (split) return split->predict(points);
  if (solution) return solution->predict(points);
  throw Error(ErrorKind::InvalidConfig, "pipeline produced no model");
}

PdeProblem build_problem(const RunConfig& cfg) {
  ProblemSetup setup;
  setup.eta = cfg.eta;
  setup.boundary_counts = cfg.boundary_counts;
  return make_problem(cfg.problem, setup);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Solved {
  Solution u;
  int removed = 0;
  IterationLog log;
  double residual = 0.0;
};

Solved solve_and_prune(const PdeProblem& problem, const RnnSpace& space, const CollocationSet& colloc,
                       const SolverConfig& solver, const Solution* initial, const Vec* frozen, double prune_tol) {
  SolveOptions o;
  o.picard = solver.picard;
  o.newton = solver.newton;
  o.initial = initial;
  o.frozen = frozen;
  SolveOutcome out = solve_problem(problem, space, colloc, o);
  const double residual = out.report.residual_norm;
  if (prune_tol <= 0.0) return Solved{std::move(out.solution), 0, std::move(out.log), residual};
  PruneResult p = prune(out.solution.space, out.solution.coeffs, prune_tol);
  return Solved{Solution(std::move(p.space), std::move(p.coeffs)), p.removed, std::move(out.log), residual};
}

class Runner {
 public:
  Runner(const RunConfig& cfg, const PipelineOptions& opts, PipelineResult& res)
      : cfg_(cfg), opts_(opts), res_(res), rng_(opts.seed.value_or(cfg.seed)) {
    if (res_.problem.exact) exact_q_ = evaluate(*res_.problem.exact, res_.quadrature.nodes);
  }

  void run() {
    for (size_t i = 0; i < cfg_.stages.size(); ++i) {
      const StageConfig& s = cfg_.stages[i];
      try {
        run_stage(static_cast<int>(i), s);
      } catch (const StageError&) {
        throw;
      } catch (const Error& e) {
        throw StageError(e, static_cast<int>(i), s.label);
      }
    }
  }

 private:
  SolverConfig solver_for(const StageConfig& s) const { return s.solver.value_or(cfg_.solver); }

  double e0_of(const Vec& approx) const {
    if (!res_.problem.exact) return std::numeric_limits<double>::quiet_NaN();
    return relative_l2_error(approx, exact_q_, res_.quadrature.weights);
  }

  StageRecord base_record(int index, const StageConfig& s, size_t step) const {
    StageRecord r;
    r.stage_index = index;
    r.kind = s.kind;
    r.label = s.label;
    if (step < s.paper_e0.size()) r.paper_e0 = s.paper_e0[step];
    return r;
  }

  void finish(StageRecord r, const Solution& u, const Solved& solved, Clock::time_point t0) {
    const LossReport loss = loss_eta(res_.problem, u, res_.colloc);
    r.M = u.space.size();
    r.m_p = solved.removed;
    r.interior_rms = loss.interior_rms;
    r.boundary_rms = loss.boundary_rms;
    r.loss = loss.loss;
    r.lsq_residual = solved.residual;
    r.e0 = e0_of(u.predict(res_.quadrature.nodes));
    r.log = solved.log;
    r.wall_time_s = seconds_since(t0);
    push(std::move(r));
  }

  void push(StageRecord r) {
    if (opts_.on_record) opts_.on_record(r);
    res_.records.push_back(std::move(r));
  }

  void dump_spectrum(const Vec& signal, int index, const std::string& label, int step, double fs) const {
    if (!opts_.spectra_dir) return;
    std::filesystem::create_directories(*opts_.spectra_dir);
    std::ostringstream name;
    name << "spectrum_stage" << index << '_' << label;
    if (step >= 0) name << '_' << step;
    name << ".csv";
    std::ofstream out(*opts_.spectra_dir / name.str());
    write_spectrum_csv(out, sample_values(signal, res_.problem.domain.bounding_box(), fs));
  }

  Vec spectral_signal(const FreqInitConfig& f, const Solution* u) const {
    const PointSet grid = spectral_grid(res_.problem.domain.bounding_box(), f.sampling_rate(res_.problem.dim()));
    if (!u) return evaluate(res_.problem.rhs, grid);
    return -operator_residual(res_.problem, *u, grid);
  }

  void adopt_base(const StageConfig& s, Solution u) {
    res_.labeled.insert_or_assign(s.label, u);
    base_ = u;
    res_.solution = std::move(u);
  }

  const Solution& lookup(const std::string& label) const {
    const auto it = res_.labeled.find(label);
    if (it == res_.labeled.end()) throw Error(ErrorKind::InvalidConfig, "unknown pilot label '" + label + "'");
    return it->second;
  }

  void run_stage(int index, const StageConfig& s) {
    switch (s.kind) {
      case StageKind::FreqInit: return run_freq_init(index, s);
      case StageKind::FixedInit: return run_fixed_init(index, s);
      case StageKind::NeuronGrowth: return run_neuron_growth(index, s);
      case StageKind::LayerGrowth: return run_layer_growth(index, s);
      case StageKind::Split: return run_split(index, s);
    }
  }

  void run_freq_init(int index, const StageConfig& s) {
    const auto t0 = Clock::now();
    if (opts_.spectra_dir)
      dump_spectrum(spectral_signal(s.freq, nullptr), index, s.label, -1, s.freq.sampling_rate(res_.problem.dim()));
    GrowthStep step = freq_init(res_.problem, s.freq, cache_, rng_);
    Solved solved = solve_and_prune(res_.problem, RnnSpace(std::move(step.block)), res_.colloc, solver_for(s),
                                    nullptr, nullptr, cfg_.prune_tol);
    StageRecord r = base_record(index, s, 0);
    r.r_opt = step.choice.r_opt;
    res_.choices.push_back(step.choice);
    finish(std::move(r), solved.u, solved, t0);
    adopt_base(s, std::move(solved.u));
  }

  void run_fixed_init(int index, const StageConfig& s) {
    const auto t0 = Clock::now();
    DenseLayerBlock block = fixed_init(res_.problem, s.dense.r, s.dense.m, s.dense.anchors, s.dense.activation, rng_);
    Solved solved = solve_and_prune(res_.problem, RnnSpace(std::move(block)), res_.colloc, solver_for(s), nullptr,
                                    nullptr, cfg_.prune_tol);
    finish(base_record(index, s, 0), solved.u, solved, t0);
    adopt_base(s, std::move(solved.u));
  }

  void run_neuron_growth(int index, const StageConfig& s) {
    Vec prev_values = base_->predict(res_.quadrature.nodes);
    for (size_t k = 0; k < s.m_add.size(); ++k) {
      const auto t0 = Clock::now();
      const Solution& u = *base_;
      if (opts_.spectra_dir)
        dump_spectrum(spectral_signal(s.freq, &u), index, s.label, static_cast<int>(k),
                      s.freq.sampling_rate(res_.problem.dim()));
      std::optional<GrowthStep> step = neuron_growth(res_.problem, u, s.m_add[k], s.freq, cache_, rng_);
      if (!step) break;
      const RnnSpace space(u.space.dense().append(step->block));
      Solved solved = solve_and_prune(res_.problem, space, res_.colloc, solver_for(s), s.warm_start ? &u : nullptr,
                                      nullptr, cfg_.prune_tol);
      StageRecord r = base_record(index, s, k);
      r.r_opt = step->choice.r_opt;
      res_.choices.push_back(step->choice);

      // A step that raises the training loss is rejected and the network kept.
      if (s.monotone && loss_eta(res_.problem, solved.u, res_.colloc).loss > loss_eta(res_.problem, u, res_.colloc).loss) {
        r.accepted = false;
        const Solved kept{u, 0, std::move(solved.log), res_.records.back().lsq_residual};
        finish(std::move(r), u, kept, t0);
        continue;
      }
      const Vec now = solved.u.predict(res_.quadrature.nodes);
      const double change = l1_difference(now, prev_values, res_.quadrature.weights);
      prev_values = now;
      finish(std::move(r), solved.u, solved, t0);
      adopt_base(s, std::move(solved.u));
      if (s.eps_s > 0.0 && change < s.eps_s) break;
    }
  }

  void run_layer_growth(int index, const StageConfig& s) {
    const auto t0 = Clock::now();
    const Solution pilot = s.pilot.empty() ? *base_ : lookup(s.pilot);
    const ErrorPoints err = select_error_points(res_.problem, res_.colloc, pilot, s.layer.m2, s.layer.indicator);
    CompositeLayerBlock block = layer_growth(pilot, err.points, s.layer, rng_);
    const RnnSpace space = pilot.space.with_block(std::move(block));
    const Vec* frozen = s.layer.retrain_first_layer ? nullptr : &pilot.coeffs;
    Solved solved = solve_and_prune(res_.problem, space, res_.colloc, solver_for(s),
                                    s.warm_start ? &pilot : nullptr, frozen, cfg_.prune_tol);
    finish(base_record(index, s, 0), solved.u, solved, t0);
    res_.labeled.insert_or_assign(s.label, solved.u);
    res_.solution = std::move(solved.u);
  }

  Domain segment_domain(const PointSet& pts) const {
    const Hypercube& box = res_.problem.domain.bounding_box();
    Vec lo = pts.colwise().minCoeff().transpose();
    Vec hi = pts.colwise().maxCoeff().transpose();
    for (Eigen::Index t = 0; t < lo.size(); ++t) {
      if (!(hi[t] > lo[t])) {
        lo[t] = box.lower()[t];
        hi[t] = box.upper()[t];
      }
    }
    return Domain::box(Hypercube(lo, hi));
  }

  void run_split(int index, const StageConfig& s) {
    const auto t0 = Clock::now();
    const Solution pilot = s.pilot.empty() ? *res_.solution : lookup(s.pilot);
    const RangePartition partition =
        s.partition == PartitionMode::UserIndicator
            ? indicator_partition(named_indicator(s.indicator), s.segments)
            : build_partition(pilot, res_.problem, res_.colloc, s.segments, s.partition);
    const double eps_r = s.eps_r > 0.0 ? s.eps_r : default_eps_r(partition);
    const SegmentAssignment asg = assign_points(partition, &pilot, res_.colloc, eps_r);

    std::vector<RnnSpace> spaces;
    for (const auto& seg : asg.segments)
      spaces.emplace_back(draw_dense_block(segment_domain(seg.interior), s.dense.r, s.dense.m, s.dense.anchors,
                                           s.dense.activation, rng_));
    SplitOptions o;
    o.continuous = s.continuous;
    o.eps_r = eps_r;
    o.solve.picard = solver_for(s).picard;
    o.solve.newton = solver_for(s).newton;
    o.solve.initial = s.warm_start ? &pilot : nullptr;
    SplitModel model = solve_split(res_.problem, partition, &pilot, asg, spaces, o);

    StageRecord r = base_record(index, s, 0);
    double int_sq = 0.0, bnd_sq = 0.0;
    int int_n = 0, bnd_n = 0;
    for (size_t j = 0; j < model.segments.size(); ++j) {
      auto& seg = model.segments[j];
      // An identically zero segment solution is kept as is.
      if (cfg_.prune_tol > 0.0 && seg.coeffs.cwiseAbs().maxCoeff() > 0.0) {
        PruneResult p = prune(seg.space, seg.coeffs, cfg_.prune_tol);
        r.m_p += p.removed;
        seg = Solution(std::move(p.space), std::move(p.coeffs));
      }
      r.M += seg.space.size();
      const CollocationSet& c = asg.segments[j];
      const LossReport l = loss_eta(res_.problem, seg, c);
      const int nb = c.boundary_count();
      int_sq += l.interior_rms * l.interior_rms * c.interior_count();
      bnd_sq += l.boundary_rms * l.boundary_rms * nb;
      int_n += c.interior_count();
      bnd_n += nb;
    }
    r.interior_rms = int_n > 0 ? std::sqrt(int_sq / int_n) : 0.0;
    r.boundary_rms = bnd_n > 0 ? std::sqrt(bnd_sq / bnd_n) : 0.0;
    r.loss = r.interior_rms + res_.problem.eta * r.boundary_rms;
    r.lsq_residual = std::sqrt(int_sq + res_.problem.eta * res_.problem.eta * bnd_sq);
    r.e0 = e0_of(model.predict(res_.quadrature.nodes));
    for (const auto& log : model.logs) r.log.records.insert(r.log.records.end(), log.records.begin(), log.records.end());
    r.wall_time_s = seconds_since(t0);
    push(std::move(r));
    res_.split = std::move(model);
  }

  const RunConfig& cfg_;
  const PipelineOptions& opts_;
  PipelineResult& res_;
  Rng rng_;
  SpectralCache cache_;
  std::optional<Solution> base_;
  Vec exact_q_;
};

}  // namespace

PipelineResult run_pipeline(const RunConfig& cfg, const PipelineOptions& opts) {
  PdeProblem problem = build_problem(cfg);
  CollocationSet colloc = make_collocation(problem.domain, cfg.interior, problem.segments(), cfg.epsilon_c);
  QuadratureRule quad = tensor_quadrature(problem.domain.bounding_box(), cfg.quadrature);
  PipelineResult res{cfg, std::move(problem), std::move(colloc), std::move(quad), {}, {}, {}, {}, {}};
  if (opts.seed) res.config.seed = *opts.seed;
  Runner(cfg, opts, res).run();
  return res;
}

namespace {

void put(std::ostream& out, double v) {
  if (std::isfinite(v)) out << v;
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<StageRecord>& records) {
  out << kResultsSchema << '\n';
  out << "stage_index,stage_kind,label,M,m_p,r_opt,interior_rms,boundary_rms,loss,lsq_residual,e0,paper_e0,accepted,wall_time_s\n";
  out << std::setprecision(17);
  for (const auto& r : records) {
    out << r.stage_index << ',' << to_string(r.kind) << ',' << r.label << ',' << r.M << ',' << r.m_p << ',';
    for (Eigen::Index t = 0; t < r.r_opt.size(); ++t) out << (t ? ";" : "") << r.r_opt[t];
    out << ',';
    put(out, r.interior_rms);
    out << ',';
    put(out, r.boundary_rms);
    out << ',';
    put(out, r.loss);
    out << ',';
    put(out, r.lsq_residual);
    out << ',';
    put(out, r.e0);
    out << ',';
    if (r.paper_e0) put(out, *r.paper_e0);
    out << ',' << (r.accepted ? 1 : 0) << ',';
    put(out, r.wall_time_s);
    out << '\n';
  }
}

void write_outputs(const PipelineResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "results.csv");
    write_results_csv(out, result.records);
  }
  {
    const Hypercube& box = result.problem.domain.bounding_box();
    std::vector<Vec> axes;
    for (int t = 0; t < box.dim(); ++t)
      axes.push_back(Vec::LinSpaced(result.config.output_grid[static_cast<size_t>(t)], box.lower()[t], box.upper()[t]));
    const PointSet grid = tensor_grid(axes);
    const Vec u = result.predict(grid);
    std::ofstream out(dir / "solution_grid.csv");
    out << std::setprecision(17);
    for (int t = 0; t < box.dim(); ++t) out << 'x' << t << ',';
    out << "u";
    if (result.problem.exact) out << ",exact";
    out << '\n';
    for (Eigen::Index i = 0; i < grid.rows(); ++i) {
      for (Eigen::Index t = 0; t < grid.cols(); ++t) out << grid(i, t) << ',';
      out << u[i];
      if (result.problem.exact) out << ',' << (*result.problem.exact)(grid.row(i).transpose());
      out << '\n';
    }
  }
  std::ofstream(dir / "config_echo.json") << to_json(result.config).dump(2) << '\n';
}

}  // namespace agrnn
