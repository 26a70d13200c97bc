#include "agrnn/adaptivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "agrnn/assembly.hpp"
#include "agrnn/error.hpp"

namespace agrnn {

PointSet draw_anchors(const Domain& domain, int m, AnchorMode mode, Rng& rng) {
  const Hypercube& box = domain.bounding_box();
  const int d = box.dim();
  PointSet B(m, d);
  if (mode == AnchorMode::GaussLegendre) {
    int n = 1;
    while (std::pow(static_cast<double>(n), d) < m) ++n;
    const PointSet grid = tensor_quadrature(box, n).nodes;
    B = grid.topRows(m);
    return B;
  }
  for (int i = 0; i < m; ++i) {
    for (int attempt = 0;; ++attempt) {
      for (int t = 0; t < d; ++t) B(i, t) = rng.uniform(box.lower()[t], box.upper()[t]);
      if (mode == AnchorMode::BoxUniform || domain.contains(B.row(i).transpose())) break;
      if (attempt > 1000000)
        throw Error(ErrorKind::InvalidConfig, "rejection sampling found no point inside the domain");
    }
  }
  return B;
}

DenseLayerBlock draw_dense_block(const Domain& domain, const Vec& r, int m, AnchorMode mode,
                                 Activation act, Rng& rng) {
  const int d = domain.dim();
  if (m < 1) throw Error(ErrorKind::InvalidConfig, "neuron count must be >= 1");
  if (r.size() != d || (r.array() <= 0.0).any())
    throw Error(ErrorKind::InvalidConfig, "uniform range needs one positive entry per dimension");
  Mat W(m, d);
  for (int i = 0; i < m; ++i) {
    for (int t = 0; t < d; ++t) W(i, t) = rng.uniform(-r[t], r[t]);
  }
  const PointSet B = draw_anchors(domain, m, mode, rng);
  Vec b = -(W.array() * B.array()).rowwise().sum().matrix();
  return DenseLayerBlock(std::move(W), std::move(b), act);
}

double FreqInitConfig::sampling_rate(int dim) const {
  if (fs > 0.0) return fs;
  return dim == 1 ? 1e4 : 1e2;
}

CandidateMode FreqInitConfig::mode(int dim) const {
  if (candidate_mode) return *candidate_mode;
  return dim <= 2 ? CandidateMode::Full : CandidateMode::PerAxis;
}

const CandidateSet& candidate_set(const PdeProblem& problem, const FreqInitConfig& cfg, SpectralCache& cache) {
  const int d = problem.dim();
  const CandidateMode mode = cfg.mode(d);
  const double fs = cfg.sampling_rate(d);
  std::ostringstream key;
  key.precision(17);
  key << problem.id << '|' << cfg.r_max << '|' << cfg.lambda << '|' << cfg.activation.name() << '|' << fs
      << '|' << static_cast<int>(mode);
  return cache.get(key.str(), [&] {
    CandidateSet set;
    set.mode = mode;
    set.r_max = cfg.r_max;
    set.lambda = cfg.lambda;
    set.weights = candidate_weights(cfg.r_max, cfg.lambda, d, mode);
    const Hypercube& box = problem.domain.bounding_box();
    for (const auto& peak :
         candidate_spectra(candidate_operator(problem), cfg.activation, set.weights, box.center(), box, fs))
      set.xi.push_back(peak.xi);
    return set;
  });
}

namespace {

GrowthStep grow_from_signal(const PdeProblem& problem, const Vec& signal, int m, const FreqInitConfig& cfg,
                            SpectralCache& cache, Rng& rng) {
  const Hypercube& box = problem.domain.bounding_box();
  const PeakFrequency peak = peak_frequency(sample_values(signal, box, cfg.sampling_rate(problem.dim())));
  const CandidateSet& set = candidate_set(problem, cfg, cache);
  FrequencyChoice choice = choose_frequency(peak.xi, set);
  DenseLayerBlock block = draw_dense_block(problem.domain, choice.r_opt, m, cfg.anchor_mode, cfg.activation, rng);
  return GrowthStep{std::move(block), std::move(choice)};
}

}  // namespace

GrowthStep freq_init(const PdeProblem& problem, const FreqInitConfig& cfg, SpectralCache& cache, Rng& rng) {
  const Hypercube& box = problem.domain.bounding_box();
  const PointSet grid = spectral_grid(box, cfg.sampling_rate(problem.dim()));
  const Vec f = evaluate(problem.rhs, grid);
  if (f.cwiseAbs().maxCoeff() == 0.0)
    throw Error(ErrorKind::ZeroSignal,
                "right-hand side is identically zero; use fixed_init with a fixed distribution such as U(-1, 1)");
  return grow_from_signal(problem, f, cfg.m1, cfg, cache, rng);
}

std::optional<GrowthStep> neuron_growth(const PdeProblem& problem, const Solution& u, int m_add,
                                        const FreqInitConfig& cfg, SpectralCache& cache, Rng& rng) {
  if (m_add < 1) throw Error(ErrorKind::InvalidConfig, "m_add entries must be positive");
  const Hypercube& box = problem.domain.bounding_box();
  const PointSet grid = spectral_grid(box, cfg.sampling_rate(problem.dim()));
  const Vec residual = -operator_residual(problem, u, grid);
  const Vec f = evaluate(problem.rhs, grid);
  const double scale = std::max(1.0, f.cwiseAbs().maxCoeff());
  if (residual.cwiseAbs().maxCoeff() <= 1e-12 * scale) return std::nullopt;
  return grow_from_signal(problem, residual, m_add, cfg, cache, rng);
}

DenseLayerBlock fixed_init(const PdeProblem& problem, const Vec& r1, int m1, AnchorMode mode, Activation act,
                           Rng& rng) {
  return draw_dense_block(problem.domain, r1, m1, mode, act, rng);
}

ErrorPoints select_error_points(const PdeProblem& problem, const CollocationSet& colloc, const Solution& u,
                                int m2, Indicator indicator) {
  const int n = colloc.interior_count();
  if (m2 < 1 || m2 > n) throw Error(ErrorKind::InvalidConfig, "m2 must lie in [1, number of interior points]");
  Vec score(n);
  if (indicator == Indicator::Residual) {
    score = operator_residual(problem, u, colloc.interior).cwiseAbs();
  } else {
    for (int i = 0; i < n; ++i) score[i] = u.jet(colloc.interior.row(i).transpose(), 1).gradient.norm();
  }
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return score[a] > score[b]; });
  ErrorPoints out;
  out.points.resize(m2, colloc.interior.cols());
  out.values.resize(m2);
  for (int k = 0; k < m2; ++k) {
    out.indices.push_back(order[static_cast<size_t>(k)]);
    out.points.row(k) = colloc.interior.row(order[static_cast<size_t>(k)]);
    out.values[k] = score[order[static_cast<size_t>(k)]];
  }
  return out;
}

CompositeLayerBlock layer_growth(const Solution& pilot, const PointSet& x_err, const LayerGrowthConfig& cfg,
                                 Rng& rng) {
  if (pilot.space.blocks().size() != 1 || pilot.space.has_composite())
    throw Error(ErrorKind::InvalidConfig, "layer growth composes over a single dense block");
  const auto parent = std::make_shared<const DenseLayerBlock>(pilot.space.dense());
  const int d = parent->dim();
  if (x_err.cols() != d) throw Error(ErrorKind::InvalidConfig, "error points have the wrong dimension");
  if (cfg.h0_mode == H0Mode::Random && (cfg.r2.size() != d || (cfg.r2.array() <= 0.0).any()))
    throw Error(ErrorKind::InvalidConfig, "random H0 needs r2 > 0 componentwise");

  std::vector<Vec> rows;
  std::vector<int> kept;
  for (Eigen::Index j = 0; j < x_err.rows(); ++j) {
    Vec h(d);
    if (cfg.h0_mode == H0Mode::Random) {
      for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
        for (int t = 0; t < d; ++t) h[t] = rng.uniform(-cfg.r2[t], cfg.r2[t]);
        if (h.cwiseAbs().sum() > 0.0) break;
      }
    } else {
      h = cfg.eta1 * pilot.jet(x_err.row(j).transpose(), 1).gradient;
    }
    if (!(h.cwiseAbs().sum() > 0.0)) continue;
    rows.push_back(h);
    kept.push_back(static_cast<int>(j));
  }
  if (kept.empty()) throw Error(ErrorKind::DegenerateSpace, "every grown neuron had a zero H0 row");

  const auto m2 = static_cast<Eigen::Index>(kept.size());
  CompositeLayerBlock blk;
  blk.parent = parent;
  blk.parent_coeffs = pilot.coeffs;
  blk.scale.resize(m2);
  blk.anchor_values.resize(m2);
  blk.anchor_points.resize(m2, d);
  blk.loc_rows.resize(m2, d);
  for (Eigen::Index k = 0; k < m2; ++k) {
    const Vec x = x_err.row(kept[static_cast<size_t>(k)]).transpose();
    blk.loc_rows.row(k) = rows[static_cast<size_t>(k)].transpose();
    blk.scale[k] = rows[static_cast<size_t>(k)].cwiseAbs().sum();
    blk.anchor_points.row(k) = x.transpose();
    blk.anchor_values[k] = pilot_value(*parent, pilot.coeffs, x);
  }
  blk.eta2 = cfg.eta2;
  blk.localize = cfg.localize;
  blk.activation = cfg.activation;
  return blk;
}

}  // namespace agrnn
