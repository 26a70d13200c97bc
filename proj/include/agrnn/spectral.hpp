#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "agrnn/activation.hpp"
#include "agrnn/geometry.hpp"
#include "agrnn/pde.hpp"

namespace agrnn {

/// Values of a function on the right-open uniform grid x_k = p + (k/N)(q - p),
/// flattened with the first axis slowest.
struct SpectrumSample {
  Vec values;
  std::vector<int> sizes;
  Hypercube box;
  double fs = 0.0;
};

struct PeakFrequency {
  Vec xi;  // cycles per unit length, per axis
  double magnitude = 0.0;
  std::vector<int> bin;
};

/// N_t = max(8, round(fs * side_t)).
std::vector<int> spectral_grid_sizes(const Hypercube& box, double fs);
PointSet spectral_grid(const Hypercube& box, double fs);

SpectrumSample sample_on_grid(const ScalarField& fn, const Hypercube& box, double fs);
SpectrumSample sample_values(Vec values, const Hypercube& box, double fs);

/// Argmax of the DFT magnitude over the one-sided quadrant (bins 0..N_t/2 on
/// every axis) without the DC bin; ties go to the lexicographically smallest bin.
/// Throws zero-signal for an all-zero sample.
PeakFrequency peak_frequency(const SpectrumSample& sample);

/// (bin frequencies, magnitude) rows of the one-sided quadrant as CSV.
void write_spectrum_csv(std::ostream& out, const SpectrumSample& sample);

/// Operator coefficients as a field over the box.
using CoefficientField = std::function<PointCoeffs(const Vec&)>;

/// Linear operators as they are; Burgers linearized at the zero state.
CoefficientField candidate_operator(const PdeProblem& problem);
CoefficientField identity_operator(int dim);

enum class CandidateMode {
  Full,     // all Lambda^d vectors (r_{k_1}, ..., r_{k_d}), lexicographic
  PerAxis,  // one 1-D sweep per axis, other components at r_1
};

/// Candidate weight vectors with magnitudes r_k = (k / Lambda) r_max.
std::vector<Vec> candidate_weights(double r_max, int lambda, int dim, CandidateMode mode);

/// Peak of G(phi_j) for phi_j(x) = rho(w_j . (x - x_c)), sampled on the spectral grid.
std::vector<PeakFrequency> candidate_spectra(const CoefficientField& op, const Activation& act,
                                             const std::vector<Vec>& candidates, const Vec& x_c,
                                             const Hypercube& box, double fs);

/// Nearest candidate strictly dominating xi0 componentwise; falls back to >=,
/// then to the global nearest. Euclidean distance, ties to the smallest index.
int select_j0(const Vec& xi0, const std::vector<Vec>& candidates);

struct CandidateSet {
  CandidateMode mode = CandidateMode::Full;
  double r_max = 0.0;
  int lambda = 0;
  std::vector<Vec> weights;
  std::vector<Vec> xi;
};

struct FrequencyChoice {
  Vec xi0;
  Vec r_opt;
  std::vector<int> j0;  // one index (Full) or one per axis (PerAxis), 0-based into the set
};

FrequencyChoice choose_frequency(const Vec& xi0, const CandidateSet& set);

/// Write-once store of candidate spectra, reused across growth stages.
class SpectralCache {
 public:
  const CandidateSet& get(const std::string& key, const std::function<CandidateSet()>& build);
  bool contains(const std::string& key) const { return key_ == key && set_.has_value(); }

 private:
  std::string key_;
  std::optional<CandidateSet> set_;
};

}  // namespace agrnn
