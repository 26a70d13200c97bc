#include "agrnn/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <ostream>

#include "agrnn/error.hpp"

namespace agrnn {

std::vector<int> spectral_grid_sizes(const Hypercube& box, double fs) {
  if (!(fs > 0.0)) throw Error(ErrorKind::InvalidConfig, "sampling rate must be positive");
  std::vector<int> n(box.dim());
  for (int t = 0; t < box.dim(); ++t)
    n[t] = std::max(8, static_cast<int>(std::lround(fs * box.sides()[t])));
  return n;
}

PointSet spectral_grid(const Hypercube& box, double fs) {
  const auto n = spectral_grid_sizes(box, fs);
  std::vector<Vec> axes(box.dim());
  for (int t = 0; t < box.dim(); ++t) {
    axes[t].resize(n[t]);
    const double p = box.lower()[t], q = box.upper()[t];
    for (int k = 0; k < n[t]; ++k) axes[t][k] = p + (static_cast<double>(k) / n[t]) * (q - p);
  }
  return tensor_grid(axes);
}

SpectrumSample sample_values(Vec values, const Hypercube& box, double fs) {
  auto sizes = spectral_grid_sizes(box, fs);
  Eigen::Index total = 1;
  for (int s : sizes) total *= s;
  if (values.size() != total)
    throw Error(ErrorKind::InvalidConfig, "sample length does not match the spectral grid");
  return SpectrumSample{std::move(values), std::move(sizes), box, fs};
}

SpectrumSample sample_on_grid(const ScalarField& fn, const Hypercube& box, double fs) {
  const PointSet pts = spectral_grid(box, fs);
  Vec v(pts.rows());
  for (Eigen::Index i = 0; i < pts.rows(); ++i) v[i] = fn(pts.row(i).transpose());
  return sample_values(std::move(v), box, fs);
}

namespace {

// One r2c plan and its buffers per grid shape; planning is single-threaded.
class FftWorkspace {
 public:
  explicit FftWorkspace(const std::vector<int>& n) : n_(n) {
    total_ = 1;
    for (int s : n) total_ *= s;
    half_ = n.back() / 2 + 1;
    out_count_ = total_ / n.back() * half_;
    in_ = fftw_alloc_real(static_cast<size_t>(total_));
    out_ = fftw_alloc_complex(static_cast<size_t>(out_count_));
    plan_ = fftw_plan_dft_r2c(static_cast<int>(n.size()), n.data(), in_, out_, FFTW_ESTIMATE);
  }
  ~FftWorkspace() {
    fftw_destroy_plan(plan_);
    fftw_free(in_);
    fftw_free(out_);
  }
  FftWorkspace(const FftWorkspace&) = delete;
  FftWorkspace& operator=(const FftWorkspace&) = delete;

  // Magnitudes over the one-sided quadrant, lexicographic over bins.
  template <class Visit>
  void transform(const Vec& values, Visit&& visit) {
    std::copy(values.data(), values.data() + total_, in_);
    fftw_execute(plan_);
    const int d = static_cast<int>(n_.size());
    std::vector<int> bin(d, 0);
    while (true) {
      long idx = 0;
      for (int t = 0; t < d; ++t) idx = idx * (t + 1 < d ? n_[t] : half_) + bin[t];
      visit(bin, std::hypot(out_[idx][0], out_[idx][1]));
      int t = d - 1;
      for (; t >= 0; --t) {
        if (++bin[t] <= n_[t] / 2) break;
        bin[t] = 0;
      }
      if (t < 0) break;
    }
  }

 private:
  std::vector<int> n_;
  long total_ = 0;
  long half_ = 0;
  long out_count_ = 0;
  double* in_ = nullptr;
  fftw_complex* out_ = nullptr;
  fftw_plan plan_ = nullptr;
};

FftWorkspace& workspace(const std::vector<int>& n) {
  static std::map<std::vector<int>, std::unique_ptr<FftWorkspace>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FftWorkspace>(n);
  return *slot;
}

}  // namespace

PeakFrequency peak_frequency(const SpectrumSample& sample) {
  for (int s : sample.sizes) {
    if (s < 8) throw Error(ErrorKind::InvalidConfig, "spectral grid needs at least 8 points per axis");
  }
  if (sample.values.cwiseAbs().maxCoeff() == 0.0)
    throw Error(ErrorKind::ZeroSignal, "sampled signal is identically zero");
  PeakFrequency best;
  best.magnitude = -1.0;
  workspace(sample.sizes).transform(sample.values, [&](const std::vector<int>& bin, double mag) {
    if (std::all_of(bin.begin(), bin.end(), [](int b) { return b == 0; })) return;
    if (mag > best.magnitude) {
      best.magnitude = mag;
      best.bin = bin;
    }
  });
  const Vec sides = sample.box.sides();
  best.xi.resize(static_cast<Eigen::Index>(best.bin.size()));
  for (size_t t = 0; t < best.bin.size(); ++t) best.xi[static_cast<Eigen::Index>(t)] = best.bin[t] / sides[t];
  return best;
}

void write_spectrum_csv(std::ostream& out, const SpectrumSample& sample) {
  const Vec sides = sample.box.sides();
  const int d = static_cast<int>(sample.sizes.size());
  for (int t = 0; t < d; ++t) out << "xi" << t << ',';
  out << "magnitude\n";
  out.precision(17);
  workspace(sample.sizes).transform(sample.values, [&](const std::vector<int>& bin, double mag) {
    for (int t = 0; t < d; ++t) out << bin[t] / sides[t] << ',';
    out << mag << '\n';
  });
}

CoefficientField candidate_operator(const PdeProblem& problem) {
  if (const auto* b = std::get_if<BurgersViscous>(&problem.op)) {
    const BurgersViscous op = *b;
    return [op](const Vec&) { return burgers_coeffs(op, 0.0, Vec::Zero(2), Linearization::Picard); };
  }
  const OperatorDescriptor op = problem.op;
  return [op](const Vec& x) { return linear_coeffs(op, x); };
}

CoefficientField identity_operator(int dim) {
  return [dim](const Vec&) {
    PointCoeffs c;
    c.c_val = 1.0;
    c.c_grad = Vec::Zero(dim);
    c.c_lap = Vec::Zero(dim);
    return c;
  };
}

std::vector<Vec> candidate_weights(double r_max, int lambda, int dim, CandidateMode mode) {
  if (!(r_max > 0.0) || lambda < 2 || dim < 1)
    throw Error(ErrorKind::InvalidConfig, "candidate grid needs r_max > 0 and Lambda >= 2");
  Vec r(lambda);
  for (int k = 1; k <= lambda; ++k) r[k - 1] = static_cast<double>(k) / lambda * r_max;
  std::vector<Vec> out;
  if (mode == CandidateMode::PerAxis) {
    for (int t = 0; t < dim; ++t) {
      for (int k = 0; k < lambda; ++k) {
        Vec w = Vec::Constant(dim, r[0]);
        w[t] = r[k];
        out.push_back(std::move(w));
      }
    }
    return out;
  }
  std::vector<Vec> axes(dim, r);
  const PointSet grid = tensor_grid(axes);
  for (Eigen::Index i = 0; i < grid.rows(); ++i) out.push_back(grid.row(i).transpose());
  return out;
}

std::vector<PeakFrequency> candidate_spectra(const CoefficientField& op, const Activation& act,
                                             const std::vector<Vec>& candidates, const Vec& x_c,
                                             const Hypercube& box, double fs) {
  const PointSet pts = spectral_grid(box, fs);
  const auto n = pts.rows();
  const int d = box.dim();
  std::vector<PointCoeffs> coeffs;
  coeffs.reserve(static_cast<size_t>(n));
  int order = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    coeffs.push_back(op(pts.row(i).transpose()));
    order = std::max(order, coeffs.back().order());
  }
  if (order >= 2 && !act.twice_differentiable())
    throw Error(ErrorKind::UnsupportedDerivative, "candidate operator needs second derivatives");
  const Mat shifted = pts.rowwise() - x_c.transpose();

  std::vector<PeakFrequency> out;
  out.reserve(candidates.size());
  Vec values(n);
  for (const Vec& w : candidates) {
    if (w.size() != d) throw Error(ErrorKind::InvalidConfig, "candidate dimension mismatch");
    const Vec w2 = w.cwiseAbs2();
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto j = act.eval(shifted.row(i).dot(w));
      const PointCoeffs& c = coeffs[static_cast<size_t>(i)];
      double v = c.c_val * j.value;
      if (c.c_grad.size() > 0) v += j.d1 * c.c_grad.dot(w);
      if (c.c_lap.size() > 0) v += j.d2 * c.c_lap.dot(w2);
      values[i] = v;
    }
    out.push_back(peak_frequency(sample_values(values, box, fs)));
  }
  return out;
}

int select_j0(const Vec& xi0, const std::vector<Vec>& candidates) {
  if (candidates.empty()) throw Error(ErrorKind::InvalidConfig, "candidate list is empty");
  auto nearest = [&](auto&& admissible) {
    int best = -1;
    double best_dist = 0.0;
    for (size_t j = 0; j < candidates.size(); ++j) {
      if (!admissible(candidates[j])) continue;
      const double dist = (candidates[j] - xi0).norm();
      if (best < 0 || dist < best_dist) {
        best = static_cast<int>(j);
        best_dist = dist;
      }
    }
    return best;
  };
  int j = nearest([&](const Vec& c) { return (c.array() > xi0.array()).all(); });
  if (j < 0) j = nearest([&](const Vec& c) { return (c.array() >= xi0.array()).all(); });
  if (j < 0) j = nearest([](const Vec&) { return true; });
  return j;
}

FrequencyChoice choose_frequency(const Vec& xi0, const CandidateSet& set) {
  FrequencyChoice choice;
  choice.xi0 = xi0;
  if (set.mode == CandidateMode::Full) {
    const int j = select_j0(xi0, set.xi);
    choice.j0 = {j};
    choice.r_opt = set.weights[static_cast<size_t>(j)];
    return choice;
  }
  const auto d = xi0.size();
  choice.r_opt.resize(d);
  for (Eigen::Index t = 0; t < d; ++t) {
    std::vector<Vec> axis_xi;
    for (int k = 0; k < set.lambda; ++k)
      axis_xi.push_back(Vec::Constant(1, set.xi[static_cast<size_t>(t * set.lambda + k)][t]));
    const int k = select_j0(Vec::Constant(1, xi0[t]), axis_xi);
    choice.j0.push_back(static_cast<int>(t) * set.lambda + k);
    choice.r_opt[t] = set.weights[static_cast<size_t>(t * set.lambda + k)][t];
  }
  return choice;
}

const CandidateSet& SpectralCache::get(const std::string& key, const std::function<CandidateSet()>& build) {
  if (!contains(key)) {
    set_ = build();
    key_ = key;
  }
  return *set_;
}

}  // namespace agrnn
