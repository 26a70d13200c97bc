#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "agrnn/basis.hpp"
#include "agrnn/geometry.hpp"
#include "agrnn/pde.hpp"
#include "agrnn/spectral.hpp"

namespace agrnn {

/// mt19937_64 with a portable uniform: 53 high bits scaled to [0, 1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

enum class AnchorMode { BoxUniform, DomainUniform, GaussLegendre };

/// m points used as bias anchors B_i.
PointSet draw_anchors(const Domain& domain, int m, AnchorMode mode, Rng& rng);

/// W ~ U(-r, r) row-wise, anchors per mode, b_i = -w_i . B_i.
DenseLayerBlock draw_dense_block(const Domain& domain, const Vec& r, int m, AnchorMode mode,
                                 Activation act, Rng& rng);

struct FreqInitConfig {
  double r_max = 100.0;
  int lambda = 50;
  int m1 = 100;
  AnchorMode anchor_mode = AnchorMode::BoxUniform;
  Activation activation{ActivationKind::Gaussian};
  double fs = 0.0;  // 0 selects 1e4 in 1-D, 1e2 otherwise
  std::optional<CandidateMode> candidate_mode;  // default Full for d <= 2, PerAxis above

  double sampling_rate(int dim) const;
  CandidateMode mode(int dim) const;
};

struct GrowthStep {
  DenseLayerBlock block;  // freq_init: the whole layer; neuron_growth: the new rows
  FrequencyChoice choice;
};

/// Candidate spectra for (problem, cfg), computed once per cache key.
const CandidateSet& candidate_set(const PdeProblem& problem, const FreqInitConfig& cfg, SpectralCache& cache);

GrowthStep freq_init(const PdeProblem& problem, const FreqInitConfig& cfg, SpectralCache& cache, Rng& rng);

/// Returns nothing when the residual f - G(u) vanishes on the spectral grid.
std::optional<GrowthStep> neuron_growth(const PdeProblem& problem, const Solution& u, int m_add,
                                        const FreqInitConfig& cfg, SpectralCache& cache, Rng& rng);

DenseLayerBlock fixed_init(const PdeProblem& problem, const Vec& r1, int m1, AnchorMode mode,
                           Activation act, Rng& rng);

enum class Indicator { Residual, GradientNorm };

struct ErrorPoints {
  PointSet points;
  std::vector<int> indices;  // into the interior collocation set
  Vec values;
};

/// Top m2 interior points by indicator, stable (ties by point index).
ErrorPoints select_error_points(const PdeProblem& problem, const CollocationSet& colloc, const Solution& u,
                                int m2, Indicator indicator);

enum class H0Mode { Random, Gradient };

struct LayerGrowthConfig {
  int m2 = 100;
  H0Mode h0_mode = H0Mode::Random;
  Vec r2;            // Random mode
  double eta1 = 1.0; // Gradient mode
  double eta2 = 1.0;
  bool localize = true;
  bool retrain_first_layer = true;
  Indicator indicator = Indicator::Residual;
  Activation activation{ActivationKind::Gaussian};
};

inline constexpr int kMaxRedraws = 100;

/// Composite block over the pilot's dense block. Zero H0 rows are redrawn
/// (Random, at most kMaxRedraws times) or dropped (Gradient).
CompositeLayerBlock layer_growth(const Solution& pilot, const PointSet& x_err, const LayerGrowthConfig& cfg,
                                 Rng& rng);

}  // namespace agrnn
