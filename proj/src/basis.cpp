#include "agrnn/basis.hpp"

#include <algorithm>
#include <cmath>

#include "agrnn/error.hpp"

namespace agrnn {

double Jet2::second_derivative(int i, int j) const {
  if (mode == JetMode::Laplacian) {
    if (i != j)
      throw Error(ErrorKind::UnsupportedDerivative,
                  "cross derivatives are not stored in Laplacian mode");
    return second(i, 0);
  }
  return second(i, j);
}

double Jet2::laplacian() const {
  return mode == JetMode::Laplacian ? second.col(0).sum() : second.diagonal().sum();
}

DenseLayerBlock::DenseLayerBlock(Mat w, Vec b, Activation act)
    : weights(std::move(w)), bias(std::move(b)), activation(act) {
  if (weights.rows() < 1 || weights.rows() != bias.size())
    throw Error(ErrorKind::InvalidConfig, "dense block needs m >= 1 rows and one bias per row");
}

DenseLayerBlock DenseLayerBlock::append(const DenseLayerBlock& more) const {
  if (more.dim() != dim() || !(more.activation == activation))
    throw Error(ErrorKind::InvalidConfig, "appended neurons must share dimension and activation");
  Mat w(size() + more.size(), dim());
  w << weights, more.weights;
  Vec b(size() + more.size());
  b << bias, more.bias;
  return DenseLayerBlock(std::move(w), std::move(b), activation);
}

DenseLayerBlock DenseLayerBlock::select(const std::vector<int>& keep) const {
  Mat w(static_cast<Eigen::Index>(keep.size()), dim());
  Vec b(static_cast<Eigen::Index>(keep.size()));
  for (size_t k = 0; k < keep.size(); ++k) {
    w.row(static_cast<Eigen::Index>(k)) = weights.row(keep[k]);
    b[static_cast<Eigen::Index>(k)] = bias[keep[k]];
  }
  return DenseLayerBlock(std::move(w), std::move(b), activation);
}

CompositeLayerBlock CompositeLayerBlock::select(const std::vector<int>& keep) const {
  CompositeLayerBlock out = *this;
  const auto n = static_cast<Eigen::Index>(keep.size());
  out.scale.resize(n);
  out.anchor_values.resize(n);
  out.anchor_points.resize(n, dim());
  out.loc_rows.resize(n, dim());
  for (Eigen::Index k = 0; k < n; ++k) {
    out.scale[k] = scale[keep[k]];
    out.anchor_values[k] = anchor_values[keep[k]];
    out.anchor_points.row(k) = anchor_points.row(keep[k]);
    out.loc_rows.row(k) = loc_rows.row(keep[k]);
  }
  return out;
}

namespace {

int block_size_of(const Block& b) {
  return std::visit([](const auto& blk) { return blk.size(); }, b);
}

int block_dim_of(const Block& b) {
  return std::visit([](const auto& blk) { return blk.dim(); }, b);
}

void require_order(const Activation& act, int order) {
  if (order >= 2 && !act.twice_differentiable())
    throw Error(ErrorKind::UnsupportedDerivative,
                "second derivatives requested for activation '" + act.name() + "'");
}

// Pilot u0 = alpha . phi and its derivatives (diagonal or full Hessian).
struct PilotJet {
  double value = 0.0;
  Vec grad;
  Vec diag;
  Mat hess;
};

PilotJet pilot_jet(const DenseLayerBlock& parent, const Vec& alpha, const Vec& x, int order,
                   bool full) {
  const int d = parent.dim();
  PilotJet p;
  p.grad = Vec::Zero(d);
  p.diag = Vec::Zero(d);
  if (full) p.hess = Mat::Zero(d, d);
  for (int i = 0; i < parent.size(); ++i) {
    const double s = parent.weights.row(i).dot(x) + parent.bias[i];
    const auto j = parent.activation.eval(s);
    const double a = alpha[i];
    p.value += a * j.value;
    if (order >= 1) p.grad.noalias() += (a * j.d1) * parent.weights.row(i).transpose();
    if (order >= 2) {
      const auto w = parent.weights.row(i).transpose();
      p.diag.array() += (a * j.d2) * w.array().square();
      if (full) p.hess.noalias() += (a * j.d2) * w * w.transpose();
    }
  }
  return p;
}

void eval_dense(const DenseLayerBlock& blk, const Vec& x, int order, int off, PointJets& out) {
  require_order(blk.activation, order);
  const int d = blk.dim();
  for (int i = 0; i < blk.size(); ++i) {
    const double s = blk.weights.row(i).dot(x) + blk.bias[i];
    const auto j = blk.activation.eval(s);
    out.value[off + i] = j.value;
    if (order >= 1) {
      for (int t = 0; t < d; ++t) out.gradient(off + i, t) = j.d1 * blk.weights(i, t);
    }
    if (order >= 2) {
      for (int t = 0; t < d; ++t) {
        const double w = blk.weights(i, t);
        out.second_diag(off + i, t) = j.d2 * w * w;
      }
    }
  }
}

void eval_composite(const CompositeLayerBlock& blk, const Vec& x, int order, int off,
                    PointJets& out) {
  require_order(blk.activation, order);
  require_order(blk.parent->activation, order);
  const int d = blk.dim();
  const PilotJet u = pilot_jet(*blk.parent, blk.parent_coeffs, x, order, false);
  const double e2 = blk.eta2 * blk.eta2;
  for (int j = 0; j < blk.size(); ++j) {
    const double H = blk.scale[j];
    const auto r = blk.activation.eval(H * (u.value - blk.anchor_values[j]));
    double G = 1.0;
    if (blk.localize) {
      double q = 0.0;
      for (int t = 0; t < d; ++t) {
        const double z = blk.eta2 * blk.loc_rows(j, t) * (x[t] - blk.anchor_points(j, t));
        q += z * z;
      }
      G = std::exp(-q);
    }
    out.value[off + j] = G * r.value;
    if (order < 1) continue;
    for (int t = 0; t < d; ++t) {
      const double dpsi = r.d1 * H * u.grad[t];
      double dG = 0.0, ddG = 0.0;
      if (blk.localize) {
        const double h2 = e2 * blk.loc_rows(j, t) * blk.loc_rows(j, t);
        const double dx = x[t] - blk.anchor_points(j, t);
        dG = -2.0 * h2 * dx * G;
        ddG = (4.0 * h2 * h2 * dx * dx - 2.0 * h2) * G;
      }
      out.gradient(off + j, t) = dG * r.value + G * dpsi;
      if (order >= 2) {
        const double ddpsi = r.d2 * H * H * u.grad[t] * u.grad[t] + r.d1 * H * u.diag[t];
        out.second_diag(off + j, t) = ddG * r.value + 2.0 * dG * dpsi + G * ddpsi;
      }
    }
  }
}

void full_dense(const DenseLayerBlock& blk, const Vec& x, int order, std::vector<Jet2>& out,
                int off) {
  require_order(blk.activation, order);
  for (int i = 0; i < blk.size(); ++i) {
    const Vec w = blk.weights.row(i).transpose();
    const auto j = blk.activation.eval(w.dot(x) + blk.bias[i]);
    Jet2& jet = out[off + i];
    jet.value = j.value;
    if (order >= 1) jet.gradient = j.d1 * w;
    if (order >= 2) jet.second = j.d2 * w * w.transpose();
  }
}

void full_composite(const CompositeLayerBlock& blk, const Vec& x, int order,
                    std::vector<Jet2>& out, int off) {
  require_order(blk.activation, order);
  require_order(blk.parent->activation, order);
  const int d = blk.dim();
  const PilotJet u = pilot_jet(*blk.parent, blk.parent_coeffs, x, order, true);
  for (int j = 0; j < blk.size(); ++j) {
    const double H = blk.scale[j];
    const auto r = blk.activation.eval(H * (u.value - blk.anchor_values[j]));
    double G = 1.0;
    Vec g = Vec::Zero(d);
    Vec c = Vec::Zero(d);
    if (blk.localize) {
      double q = 0.0;
      for (int t = 0; t < d; ++t) {
        const double h2 = blk.eta2 * blk.eta2 * blk.loc_rows(j, t) * blk.loc_rows(j, t);
        const double dx = x[t] - blk.anchor_points(j, t);
        q += h2 * dx * dx;
        g[t] = -2.0 * h2 * dx;
        c[t] = -2.0 * h2;
      }
      G = std::exp(-q);
    }
    Jet2& jet = out[off + j];
    jet.value = G * r.value;
    if (order < 1) continue;
    const Vec dpsi = r.d1 * H * u.grad;
    const Vec dG = G * g;
    jet.gradient = dG * r.value + G * dpsi;
    if (order >= 2) {
      const Mat hpsi = r.d2 * H * H * u.grad * u.grad.transpose() + r.d1 * H * u.hess;
      Mat hG = G * (g * g.transpose());
      hG.diagonal() += G * c;
      jet.second = hG * r.value + dG * dpsi.transpose() + dpsi * dG.transpose() + G * hpsi;
    }
  }
}

}  // namespace

double pilot_value(const DenseLayerBlock& parent, const Vec& alpha, const Vec& x) {
  return pilot_jet(parent, alpha, x, 0, false).value;
}

RnnSpace::RnnSpace(DenseLayerBlock dense) : RnnSpace(std::vector<Block>{std::move(dense)}) {}

RnnSpace::RnnSpace(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw Error(ErrorKind::InvalidConfig, "a space needs at least one block");
  dim_ = block_dim_of(blocks_.front());
  for (const auto& b : blocks_) {
    if (block_dim_of(b) != dim_)
      throw Error(ErrorKind::InvalidConfig, "all blocks of a space must share the input dimension");
    if (const auto* c = std::get_if<CompositeLayerBlock>(&b)) {
      if (!c->parent || c->parent_coeffs.size() != c->parent->size())
        throw Error(ErrorKind::InvalidConfig, "composite block needs one coefficient per parent neuron");
    }
    offsets_.push_back(total_);
    total_ += block_size_of(b);
  }
}

int RnnSpace::block_size(int b) const { return block_size_of(blocks_[b]); }

std::pair<int, int> RnnSpace::column(int global) const {
  if (global < 0 || global >= total_)
    throw Error(ErrorKind::InvalidConfig, "column index out of range");
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), global);
  const int b = static_cast<int>(it - offsets_.begin()) - 1;
  return {b, global - offsets_[b]};
}

const DenseLayerBlock& RnnSpace::dense() const {
  for (const auto& b : blocks_) {
    if (const auto* d = std::get_if<DenseLayerBlock>(&b)) return *d;
  }
  throw Error(ErrorKind::InvalidConfig, "space has no dense block");
}

bool RnnSpace::has_composite() const {
  return std::any_of(blocks_.begin(), blocks_.end(), [](const Block& b) {
    return std::holds_alternative<CompositeLayerBlock>(b);
  });
}

RnnSpace RnnSpace::with_block(Block block) const {
  auto blocks = blocks_;
  blocks.push_back(std::move(block));
  return RnnSpace(std::move(blocks));
}

int RnnSpace::max_order() const {
  int order = 2;
  for (const auto& b : blocks_) {
    std::visit(
        [&](const auto& blk) {
          using T = std::decay_t<decltype(blk)>;
          if (!blk.activation.twice_differentiable()) order = 1;
          if constexpr (std::is_same_v<T, CompositeLayerBlock>) {
            if (!blk.parent->activation.twice_differentiable()) order = 1;
          }
        },
        b);
  }
  return order;
}

void RnnSpace::eval_point(const Vec& x, int order, PointJets& out) const {
  if (out.value.size() != total_) out.value.resize(total_);
  if (order >= 1 && (out.gradient.rows() != total_ || out.gradient.cols() != dim_))
    out.gradient.resize(total_, dim_);
  if (order >= 2 && (out.second_diag.rows() != total_ || out.second_diag.cols() != dim_))
    out.second_diag.resize(total_, dim_);
  for (size_t b = 0; b < blocks_.size(); ++b) {
    const int off = offsets_[b];
    std::visit(
        [&](const auto& blk) {
          using T = std::decay_t<decltype(blk)>;
          if constexpr (std::is_same_v<T, DenseLayerBlock>)
            eval_dense(blk, x, order, off, out);
          else
            eval_composite(blk, x, order, off, out);
        },
        blocks_[b]);
  }
}

Vec RnnSpace::eval_values(const Vec& x) const {
  PointJets jets;
  eval_point(x, 0, jets);
  return jets.value;
}

std::vector<Jet2> RnnSpace::eval_point_jets(const Vec& x, int order, JetMode mode) const {
  std::vector<Jet2> jets(total_);
  if (mode == JetMode::Laplacian) {
    PointJets pj;
    eval_point(x, order, pj);
    for (int k = 0; k < total_; ++k) {
      Jet2& j = jets[k];
      j.mode = JetMode::Laplacian;
      j.value = pj.value[k];
      if (order >= 1) j.gradient = pj.gradient.row(k).transpose();
      if (order >= 2) j.second = pj.second_diag.row(k).transpose();
    }
    return jets;
  }
  for (auto& j : jets) j.mode = JetMode::Full;
  for (size_t b = 0; b < blocks_.size(); ++b) {
    const int off = offsets_[b];
    std::visit(
        [&](const auto& blk) {
          using T = std::decay_t<decltype(blk)>;
          if constexpr (std::is_same_v<T, DenseLayerBlock>)
            full_dense(blk, x, order, jets, off);
          else
            full_composite(blk, x, order, jets, off);
        },
        blocks_[b]);
  }
  return jets;
}

std::vector<std::vector<Jet2>> eval_jets(const RnnSpace& space, const PointSet& points, int order,
                                         JetMode mode) {
  std::vector<std::vector<Jet2>> out;
  out.reserve(static_cast<size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    out.push_back(space.eval_point_jets(points.row(i).transpose(), order, mode));
  return out;
}

Solution::Solution(RnnSpace s, Vec c) : space(std::move(s)), coeffs(std::move(c)) {
  if (coeffs.size() != space.size())
    throw Error(ErrorKind::InvalidConfig, "coefficient count must equal the space dimension");
}

double Solution::predict(const Vec& x) const { return coeffs.dot(space.eval_values(x)); }

Vec Solution::predict(const PointSet& points) const {
  Vec out(points.rows());
  PointJets pj;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    space.eval_point(points.row(i).transpose(), 0, pj);
    out[i] = coeffs.dot(pj.value);
  }
  return out;
}

Jet2 Solution::jet(const Vec& x, int order, JetMode mode) const {
  Jet2 u;
  u.mode = mode;
  if (mode == JetMode::Laplacian) {
    PointJets pj;
    space.eval_point(x, order, pj);
    u.value = coeffs.dot(pj.value);
    if (order >= 1) u.gradient = pj.gradient.transpose() * coeffs;
    if (order >= 2) u.second = pj.second_diag.transpose() * coeffs;
    return u;
  }
  const auto jets = space.eval_point_jets(x, order, mode);
  const int d = space.dim();
  u.gradient = Vec::Zero(d);
  u.second = Mat::Zero(d, d);
  for (size_t k = 0; k < jets.size(); ++k) {
    const double c = coeffs[static_cast<Eigen::Index>(k)];
    u.value += c * jets[k].value;
    if (order >= 1) u.gradient += c * jets[k].gradient;
    if (order >= 2) u.second += c * jets[k].second;
  }
  return u;
}

Vec Solution::block_coeffs(int b) const { return coeffs.segment(space.block_offset(b), space.block_size(b)); }

PruneResult prune(const RnnSpace& space, const Vec& coeffs, double tol_rel) {
  if (coeffs.size() != space.size())
    throw Error(ErrorKind::InvalidConfig, "coefficient count must equal the space dimension");
  const double cut = tol_rel * coeffs.cwiseAbs().maxCoeff();
  std::vector<Block> blocks;
  std::vector<int> kept;
  for (size_t b = 0; b < space.blocks().size(); ++b) {
    const int off = space.block_offset(static_cast<int>(b));
    std::vector<int> local;
    for (int i = 0; i < space.block_size(static_cast<int>(b)); ++i) {
      if (std::abs(coeffs[off + i]) > cut) {
        local.push_back(i);
        kept.push_back(off + i);
      }
    }
    if (local.empty()) continue;
    std::visit([&](const auto& blk) { blocks.emplace_back(blk.select(local)); }, space.blocks()[b]);
  }
  if (kept.empty()) throw Error(ErrorKind::DegenerateSpace, "pruning removed every basis function");
  Vec c(static_cast<Eigen::Index>(kept.size()));
  for (size_t k = 0; k < kept.size(); ++k) c[static_cast<Eigen::Index>(k)] = coeffs[kept[k]];
  const int removed = space.size() - static_cast<int>(kept.size());
  return PruneResult{RnnSpace(std::move(blocks)), std::move(c), removed, std::move(kept)};
}

Vec partition_hyperplane_density(const DenseLayerBlock& block, const PointSet& centers,
                                 double tau) {
  if (!(tau > 0.0)) throw Error(ErrorKind::InvalidConfig, "tau must be positive");
  Vec density = Vec::Zero(centers.rows());
  const Vec norms = block.weights.rowwise().norm();
  for (Eigen::Index c = 0; c < centers.rows(); ++c) {
    int hits = 0;
    for (int i = 0; i < block.size(); ++i) {
      if (norms[i] == 0.0) continue;
      const double dist = std::abs(block.weights.row(i).dot(centers.row(c)) + block.bias[i]) / norms[i];
      if (dist <= tau) ++hits;
    }
    density[c] = static_cast<double>(hits) / block.size();
  }
  return density;
}

}  // namespace agrnn
