#include <cmath>
#include <numbers>

#include "agrnn/error.hpp"
#include "agrnn/pde.hpp"

namespace agrnn {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSharpness = 120.0;  // A in the arctan profile
constexpr double kCircleRadius = 43.0 / 64.0;

double poisson_case1(double x) {
  double u = 0.0;
  for (int s = 1; s <= 6; ++s) u += std::sin(std::ldexp(kPi, s) * x);
  return u / 6.0;
}

double poisson_case1_rhs(double x) {
  double f = 0.0;
  for (int s = 1; s <= 6; ++s) {
    const double k = std::ldexp(kPi, s);
    f += k * k * std::sin(k * x);
  }
  return f / 6.0;
}

// u = a(S) p(x), a = 4^d (1/2 + atan(A S)/pi), S = 1/16 - sum (x_i - 1/2)^2,
// p = prod x_i (1 - x_i).
double arctan_bump(const Vec& x) {
  const auto d = x.size();
  const double S = 1.0 / 16.0 - (x.array() - 0.5).square().sum();
  const double a = std::pow(4.0, static_cast<double>(d)) * (0.5 + std::atan(kSharpness * S) / kPi);
  return a * (x.array() * (1.0 - x.array())).prod();
}

double arctan_bump_rhs(const Vec& x) {
  const auto d = x.size();
  const double A = kSharpness;
  const double S = 1.0 / 16.0 - (x.array() - 0.5).square().sum();
  const double scale = std::pow(4.0, static_cast<double>(d));
  const double q = 1.0 + A * A * S * S;
  const double k = A / q;
  const double dk = -2.0 * A * A * A * S / (q * q);
  const double a = scale * (0.5 + std::atan(A * S) / kPi);
  const Vec pi = (x.array() * (1.0 - x.array())).matrix();
  const double p = pi.prod();

  double lap = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    double others = 1.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (j != i) others *= pi[j];
    }
    const double dS = -2.0 * (x[i] - 0.5);
    const double a_i = scale / kPi * k * dS;
    const double a_ii = scale / kPi * (dk * dS * dS - 2.0 * k);
    const double p_i = (1.0 - 2.0 * x[i]) * others;
    const double p_ii = -2.0 * others;
    lap += a_ii * p + 2.0 * a_i * p_i + a * p_ii;
  }
  return -lap;
}

double burgers2(double t, double x) { return 1.0 / (1.0 + std::exp((x - t) / (2.0 * 0.01))); }

double burgers3(double t, double x) {
  if (t <= 0.0) return x <= 0.0 ? 0.0 : 1.0;
  if (x < 0.0) return 0.0;
  if (x <= t) return x / t;
  return 1.0;
}

double burgers4(double t, double x) { return x < 0.5 * t ? 1.0 : 0.0; }

double ar1_exact(const Vec& x) {
  return x[0] * x[0] + x[1] * x[1] < kCircleRadius * kCircleRadius ? -1.0 : 1.0;
}

double ar2_strip(double x) {
  for (int k = 0; k < 5; ++k) {
    const double lo = 0.2 * k;
    if (x > lo && x < lo + 0.1) return 1.0;
  }
  return 0.0;
}

BoundarySegment segment(std::string id, int axis, double value, std::vector<int> counts,
                        BoundaryKind kind = BoundaryKind::Dirichlet) {
  BoundarySegment s;
  s.id = std::move(id);
  s.axis = axis;
  s.value = value;
  s.kind = kind;
  s.counts = std::move(counts);
  return s;
}

void apply_counts(std::vector<BoundaryCondition>& bcs, const std::vector<int>& counts) {
  if (counts.empty()) return;
  if (counts.size() != bcs.size())
    throw Error(ErrorKind::InvalidConfig, "boundary_counts needs one entry per boundary segment (" +
                                              std::to_string(bcs.size()) + ")");
  for (size_t i = 0; i < bcs.size(); ++i) {
    for (auto& c : bcs[i].segment.counts) c = counts[i];
  }
}

PdeProblem poisson(int case_id) {
  const int d = case_id == 1 ? 1 : case_id == 4 ? 3 : 2;
  const Hypercube box = Hypercube::unit(d);
  const int per_axis = d == 1 ? 1 : d == 2 ? 3000 : 40;
  PdeProblem p{"poisson-" + std::to_string(case_id), Poisson{}, Domain::box(box), {}, {}, 1.0, {}};
  if (case_id == 1) {
    p.rhs = [](const Vec& x) { return poisson_case1_rhs(x[0]); };
    p.exact = [](const Vec& x) { return poisson_case1(x[0]); };
    p.eta = 1.0;
  } else {
    p.rhs = arctan_bump_rhs;
    p.exact = arctan_bump;
    p.eta = d == 2 ? 3000.0 : 5000.0;
  }
  const ScalarField g = *p.exact;
  for (auto& s : box_faces(box, per_axis)) p.boundary.push_back({s, g});
  return p;
}

PdeProblem advection(int case_id) {
  const Hypercube box = Hypercube::unit(2);
  PdeProblem p{"ar-" + std::to_string(case_id), AdvectionReaction{}, Domain::box(box),
               [](const Vec&) { return 0.0; }, {}, 1.0, {}};
  if (case_id == 1) {
    p.op = AdvectionReaction{[](const Vec& x) {
                               Vec b(2);
                               b << -x[1], x[0];
                               return b;
                             },
                             [](const Vec&) { return 0.0; }, 0.0};
    p.exact = ar1_exact;
    p.boundary.push_back({segment("bottom", 1, 0.0, {200}), ar1_exact});
    p.boundary.push_back({segment("right", 0, 1.0, {200}), ar1_exact});
  } else {
    p.op = AdvectionReaction{[](const Vec&) {
                               Vec b(2);
                               b << 0.0, 1.0;
                               return b;
                             },
                             [](const Vec&) { return 0.0; }, 0.0};
    p.exact = [](const Vec& x) { return ar2_strip(x[0]); };
    p.boundary.push_back({segment("bottom", 1, 0.0, {200}), *p.exact});
  }
  return p;
}

PdeProblem burgers(int case_id) {
  double eps = 0.0, lo = -1.0, hi = 2.0, eta = 10.0;
  int n_initial = 200, n_side = 66;
  switch (case_id) {
    case 1: eps = 0.1 / kPi, lo = -1.0, hi = 1.0, eta = 200.0, n_side = 200; break;
    case 2: eps = 0.01, lo = 0.0, hi = 1.0, eta = 200.0, n_side = 200; break;
    case 3: eta = 10.0; break;
    default: eta = 20.0; break;
  }
  Vec slo(1), shi(1);
  slo << lo;
  shi << hi;
  const Domain dom = Domain::space_time(1.0, Hypercube(slo, shi));
  ScalarField exact = [case_id](const Vec& z) { return burgers_exact(case_id, z[0], z[1]); };
  PdeProblem p{"burgers-" + std::to_string(case_id), BurgersViscous{eps}, dom,
               [](const Vec&) { return 0.0; }, {}, eta, exact};
  // The Case 2 profile travels at speed 1, twice the Rankine-Hugoniot speed of
  // u^2/2, so it is imposed as a manufactured solution: f = u(1 - u) / (4 eps).
  if (case_id == 2)
    p.rhs = [eps](const Vec& z) {
      const double u = burgers2(z[0], z[1]);
      return u * (1.0 - u) / (4.0 * eps);
    };
  p.boundary.push_back({segment("initial", 0, 0.0, {n_initial}, BoundaryKind::Initial), exact});
  p.boundary.push_back({segment("left", 1, lo, {n_side}), exact});
  p.boundary.push_back({segment("right", 1, hi, {n_side}), exact});
  return p;
}

int case_number(const std::string& id, const std::string& prefix, int max_case) {
  if (id.rfind(prefix, 0) != 0 || id.size() != prefix.size() + 1) return 0;
  const int c = id.back() - '0';
  return c >= 1 && c <= max_case ? c : 0;
}

}  // namespace

double poisson_exact(int case_id, const Vec& x) {
  return case_id == 1 ? poisson_case1(x[0]) : arctan_bump(x);
}

double poisson_rhs(int case_id, const Vec& x) {
  return case_id == 1 ? poisson_case1_rhs(x[0]) : arctan_bump_rhs(x);
}

// Uses the identity  int (x-y)/t e^{-H/2eps} dy = int u0(y) e^{-H/2eps} dy  so the
// quotient carries no 1/t, and integrates in the shift z = x - y over the window
// where the heat kernel exp(-z^2/(4 eps t)) is non-negligible.
double cole_hopf(double eps, double t, double x, int panels, int nodes) {
  if (t <= 0.0) return -std::sin(kPi * x);
  const double width = 12.0 * std::sqrt(2.0 * eps * t);
  const GaussLegendre rule = composite_gauss_legendre(-width, width, panels, nodes);
  const auto n = rule.nodes.size();
  Vec expo(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double z = rule.nodes[k];
    const double y = x - z;
    const double H = (std::cos(kPi * y) - 1.0) / kPi + z * z / (2.0 * t);
    expo[k] = -H / (2.0 * eps);
  }
  const double shift = expo.maxCoeff();
  double num = 0.0, den = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double w = rule.weights[k] * std::exp(expo[k] - shift);
    num += w * -std::sin(kPi * (x - rule.nodes[k]));
    den += w;
  }
  return num / den;
}

double burgers_exact(int case_id, double t, double x) {
  switch (case_id) {
    case 1: return cole_hopf(0.1 / kPi, t, x);
    case 2: return burgers2(t, x);
    case 3: return burgers3(t, x);
    case 4: return burgers4(t, x);
    default: throw Error(ErrorKind::InvalidConfig, "unknown Burgers case " + std::to_string(case_id));
  }
}

PdeProblem make_problem(const std::string& id, const ProblemSetup& setup) {
  PdeProblem p = [&] {
    if (int c = case_number(id, "poisson-", 4)) return poisson(c);
    if (int c = case_number(id, "ar-", 2)) return advection(c);
    if (int c = case_number(id, "burgers-", 4)) return burgers(c);
    throw Error(ErrorKind::InvalidConfig, "unknown problem id '" + id + "'");
  }();
  if (setup.eta < 0.0) throw Error(ErrorKind::InvalidConfig, "eta must be positive");
  if (setup.eta > 0.0) p.eta = setup.eta;
  apply_counts(p.boundary, setup.boundary_counts);
  return p;
}

std::vector<std::string> problem_ids() {
  return {"poisson-1", "poisson-2", "poisson-3", "poisson-4", "ar-1",
          "ar-2",      "burgers-1", "burgers-2", "burgers-3", "burgers-4"};
}

}  // namespace agrnn
