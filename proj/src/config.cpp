#include "agrnn/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "agrnn/error.hpp"

namespace agrnn {

using nlohmann::json;

const char* to_string(StageKind kind) {
  switch (kind) {
    case StageKind::FreqInit: return "freq_init";
    case StageKind::FixedInit: return "fixed_init";
    case StageKind::NeuronGrowth: return "neuron_growth";
    case StageKind::LayerGrowth: return "layer_growth";
    case StageKind::Split: return "split";
  }
  return "stage";
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::InvalidConfig, path + ": " + msg);
}

template <class E>
struct Names {
  std::vector<std::pair<std::string, E>> entries;

  E parse(const std::string& s, const std::string& path) const {
    for (const auto& [name, value] : entries) {
      if (name == s) return value;
    }
    std::string allowed;
    for (const auto& e : entries) allowed += (allowed.empty() ? "" : ", ") + e.first;
    fail(path, "unknown value '" + s + "' (expected one of: " + allowed + ")");
  }
  std::string name(E v) const {
    for (const auto& [name, value] : entries) {
      if (value == v) return name;
    }
    return "";
  }
};

const Names<StageKind> kStageNames{{{"freq_init", StageKind::FreqInit},
                                    {"fixed_init", StageKind::FixedInit},
                                    {"neuron_growth", StageKind::NeuronGrowth},
                                    {"layer_growth", StageKind::LayerGrowth},
                                    {"split", StageKind::Split}}};
const Names<AnchorMode> kAnchorNames{{{"box-uniform", AnchorMode::BoxUniform},
                                      {"domain-uniform", AnchorMode::DomainUniform},
                                      {"gauss-legendre", AnchorMode::GaussLegendre}}};
const Names<PartitionMode> kPartitionNames{{{"pilot-range", PartitionMode::PilotRange},
                                            {"boundary-midpoint", PartitionMode::BoundaryMidpoint},
                                            {"indicator", PartitionMode::UserIndicator}}};
const Names<H0Mode> kH0Names{{{"random", H0Mode::Random}, {"gradient", H0Mode::Gradient}}};
const Names<Indicator> kIndicatorNames{{{"residual", Indicator::Residual},
                                        {"gradient-norm", Indicator::GradientNorm}}};
const Names<CandidateMode> kCandidateNames{{{"full", CandidateMode::Full}, {"per-axis", CandidateMode::PerAxis}}};

// JSON object with a path prefix for error messages.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : j_.items()) {
      if (!ok.count(k)) fail(field(k), "unknown field");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  Node child(const char* key) const { return Node(j_.at(key), field(key)); }
  const json& raw(const char* key) const { return j_.at(key); }

  double number(const char* key, double def) const {
    if (!has(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_number()) fail(field(key), "expected a number");
    return v.get<double>();
  }
  double positive(const char* key, double def) const {
    const double v = number(key, def);
    if (!(v > 0.0)) fail(field(key), "must be positive");
    return v;
  }
  int integer(const char* key, int def, int min_value) const {
    if (!has(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_number_integer()) fail(field(key), "expected an integer");
    const int x = v.get<int>();
    if (x < min_value) fail(field(key), "must be >= " + std::to_string(min_value));
    return x;
  }
  int required_integer(const char* key, int min_value) const {
    if (!has(key)) fail(field(key), "required field is missing");
    return integer(key, 0, min_value);
  }
  bool boolean(const char* key, bool def) const {
    if (!has(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_boolean()) fail(field(key), "expected true or false");
    return v.get<bool>();
  }
  std::string string(const char* key, const std::string& def) const {
    if (!has(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_string()) fail(field(key), "expected a string");
    return v.get<std::string>();
  }
  std::vector<int> ints(const char* key, int min_value) const {
    std::vector<int> out;
    if (!has(key)) return out;
    const auto& v = j_.at(key);
    if (!v.is_array()) fail(field(key), "expected an array of integers");
    for (size_t i = 0; i < v.size(); ++i) {
      const std::string p = field(key) + "[" + std::to_string(i) + "]";
      if (!v[i].is_number_integer()) fail(p, "expected an integer");
      if (v[i].get<int>() < min_value) fail(p, "must be >= " + std::to_string(min_value));
      out.push_back(v[i].get<int>());
    }
    return out;
  }
  std::vector<double> numbers(const char* key) const {
    std::vector<double> out;
    if (!has(key)) return out;
    const auto& v = j_.at(key);
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array()) fail(field(key), "expected a number or an array of numbers");
    for (size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(field(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }
  Vec positive_vec(const char* key, int dim) const {
    const auto v = numbers(key);
    if (static_cast<int>(v.size()) != dim)
      fail(field(key), "expected " + std::to_string(dim) + " entries (one per dimension)");
    Vec out(dim);
    for (int t = 0; t < dim; ++t) {
      if (!(v[static_cast<size_t>(t)] > 0.0)) fail(field(key), "entries must be positive");
      out[t] = v[static_cast<size_t>(t)];
    }
    return out;
  }
  Activation activation(const char* key, Activation def) const {
    if (!has(key)) return def;
    try {
      return Activation::from_name(string(key, ""));
    } catch (const Error&) {
      fail(field(key), "unknown activation '" + string(key, "") + "' (tanh, gaussian, sine, ramp-jump)");
    }
  }
  template <class E>
  E choice(const char* key, const Names<E>& names, E def) const {
    if (!has(key)) return def;
    return names.parse(string(key, ""), field(key));
  }

 private:
  const json& j_;
  std::string path_;
};

SolverConfig parse_solver(const Node& n) {
  n.allow({"picard", "newton"});
  SolverConfig s;
  s.picard = n.integer("picard", 1, 0);
  s.newton = n.integer("newton", 0, 0);
  if (s.picard + s.newton < 1) fail(n.field("picard"), "picard + newton must be >= 1");
  return s;
}

void parse_freq(const Node& n, FreqInitConfig& f) {
  f.r_max = n.positive("r_max", f.r_max);
  f.lambda = n.integer("lambda", f.lambda, 2);
  f.activation = n.activation("activation", f.activation);
  f.anchor_mode = n.choice("anchors", kAnchorNames, f.anchor_mode);
  f.fs = n.number("fs", f.fs);
  if (f.fs < 0.0) fail(n.field("fs"), "must be non-negative");
  if (n.has("candidate_mode")) f.candidate_mode = n.choice("candidate_mode", kCandidateNames, CandidateMode::Full);
}

DenseConfig parse_dense(const Node& n, int dim) {
  DenseConfig d;
  d.r = n.positive_vec("r", dim);
  d.m = n.required_integer("m1", 1);
  d.activation = n.activation("activation", d.activation);
  d.anchors = n.choice("anchors", kAnchorNames, d.anchors);
  return d;
}

StageConfig parse_stage(const Node& n, int dim, const FreqInitConfig* freq_defaults) {
  StageConfig s;
  if (!n.has("kind")) fail(n.field("kind"), "required field is missing");
  s.kind = kStageNames.parse(n.string("kind", ""), n.field("kind"));
  s.label = n.string("label", to_string(s.kind));
  s.paper_e0 = n.numbers("paper_e0");
  if (n.has("solver")) s.solver = parse_solver(n.child("solver"));

  switch (s.kind) {
    case StageKind::FreqInit:
      n.allow({"kind", "label", "paper_e0", "solver", "r_max", "lambda", "m1", "activation", "anchors", "fs",
               "candidate_mode"});
      s.freq.activation = Activation(ActivationKind::Gaussian);
      parse_freq(n, s.freq);
      s.freq.m1 = n.required_integer("m1", 1);
      break;
    case StageKind::FixedInit:
      n.allow({"kind", "label", "paper_e0", "solver", "r", "m1", "activation", "anchors"});
      s.dense = parse_dense(n, dim);
      break;
    case StageKind::NeuronGrowth:
      n.allow({"kind", "label", "paper_e0", "solver", "warm_start", "m_add", "eps_s", "monotone", "r_max",
               "lambda", "activation", "anchors", "fs", "candidate_mode"});
      if (freq_defaults) s.freq = *freq_defaults;
      else if (!n.has("r_max") || !n.has("lambda"))
        fail(n.field("r_max"), "neuron growth after a fixed init needs r_max and lambda");
      parse_freq(n, s.freq);
      s.m_add = n.ints("m_add", 1);
      if (s.m_add.empty()) fail(n.field("m_add"), "needs at least one entry");
      s.eps_s = n.number("eps_s", s.eps_s);
      if (s.eps_s < 0.0) fail(n.field("eps_s"), "must be non-negative (0 disables the stopping rule)");
      s.warm_start = n.boolean("warm_start", true);
      s.monotone = n.boolean("monotone", true);
      break;
    case StageKind::LayerGrowth: {
      n.allow({"kind", "label", "paper_e0", "solver", "warm_start", "pilot", "m2", "h0", "r2", "eta1", "eta2",
               "localize", "retrain_first_layer", "indicator", "activation"});
      auto& L = s.layer;
      L.m2 = n.required_integer("m2", 1);
      L.h0_mode = n.choice("h0", kH0Names, H0Mode::Random);
      if (L.h0_mode == H0Mode::Random) L.r2 = n.positive_vec("r2", dim);
      L.eta1 = n.positive("eta1", 1.0);
      L.eta2 = n.positive("eta2", 1.0);
      L.localize = n.boolean("localize", true);
      L.retrain_first_layer = n.boolean("retrain_first_layer", true);
      L.indicator = n.choice("indicator", kIndicatorNames, Indicator::Residual);
      L.activation = n.activation("activation", Activation(ActivationKind::Gaussian));
      s.warm_start = n.boolean("warm_start", true);
      s.pilot = n.string("pilot", "");
      break;
    }
    case StageKind::Split:
      n.allow({"kind", "label", "paper_e0", "solver", "warm_start", "pilot", "segments", "mode", "indicator",
               "continuous", "eps_r", "segment"});
      s.segments = n.integer("segments", 2, 2);
      s.partition = n.choice("mode", kPartitionNames, PartitionMode::PilotRange);
      s.indicator = n.string("indicator", "");
      if (s.partition == PartitionMode::UserIndicator) {
        if (s.indicator.empty()) fail(n.field("indicator"), "indicator mode needs an indicator name");
        try {
          named_indicator(s.indicator);
        } catch (const Error&) {
          fail(n.field("indicator"), "unknown indicator '" + s.indicator + "'");
        }
      }
      s.continuous = n.boolean("continuous", false);
      s.eps_r = n.number("eps_r", 0.0);
      if (s.eps_r < 0.0) fail(n.field("eps_r"), "must be non-negative");
      s.pilot = n.string("pilot", "");
      s.warm_start = n.boolean("warm_start", false);
      if (!n.has("segment")) fail(n.field("segment"), "required field is missing");
      {
        const Node seg = n.child("segment");
        seg.allow({"r", "m1", "activation", "anchors"});
        s.dense = parse_dense(seg, dim);
      }
      break;
  }
  return s;
}

std::vector<int> default_interior(const std::string& problem) {
  static const std::map<std::string, std::vector<int>> table{
      {"poisson-1", {2000}},     {"poisson-2", {300, 300}}, {"poisson-3", {300, 300}},
      {"poisson-4", {40, 40, 40}}, {"ar-1", {100, 100}},     {"ar-2", {100, 100}},
      {"burgers-1", {100, 200}}, {"burgers-2", {200, 200}}, {"burgers-3", {66, 200}},
      {"burgers-4", {66, 200}}};
  return table.at(problem);
}

json dense_json(const DenseConfig& d) {
  return json{{"r", std::vector<double>(d.r.data(), d.r.data() + d.r.size())},
              {"m1", d.m},
              {"activation", d.activation.name()},
              {"anchors", kAnchorNames.name(d.anchors)}};
}

json freq_json(const FreqInitConfig& f, int dim) {
  return json{{"r_max", f.r_max},
              {"lambda", f.lambda},
              {"activation", f.activation.name()},
              {"anchors", kAnchorNames.name(f.anchor_mode)},
              {"fs", f.sampling_rate(dim)},
              {"candidate_mode", kCandidateNames.name(f.mode(dim))}};
}

}  // namespace

RunConfig parse_config(const json& j) {
  const Node root(j, "");
  root.allow({"case_id", "problem", "eta", "interior", "boundary_counts", "epsilon_c", "quadrature", "seed",
              "solver", "output_grid", "prune_tol", "stages"});
  RunConfig cfg;
  cfg.case_id = root.string("case_id", "");
  if (!root.has("problem")) fail("problem", "required field is missing");
  cfg.problem = root.string("problem", "");
  PdeProblem probe_problem = [&] {
    try {
      return make_problem(cfg.problem);
    } catch (const Error& e) {
      fail("problem", e.what());
    }
  }();
  const int dim = probe_problem.dim();
  cfg.eta = root.number("eta", probe_problem.eta);
  if (!(cfg.eta > 0.0)) fail("eta", "must be positive");
  cfg.interior = root.has("interior") ? root.ints("interior", 2) : default_interior(cfg.problem);
  if (static_cast<int>(cfg.interior.size()) != dim)
    fail("interior", "expected " + std::to_string(dim) + " counts (one per dimension)");
  cfg.boundary_counts = root.ints("boundary_counts", 1);
  if (!cfg.boundary_counts.empty() && cfg.boundary_counts.size() != probe_problem.boundary.size())
    fail("boundary_counts", "expected " + std::to_string(probe_problem.boundary.size()) + " entries (one per segment)");
  if (cfg.boundary_counts.empty()) {
    for (const auto& bc : probe_problem.boundary)
      cfg.boundary_counts.push_back(bc.segment.counts.empty() ? 1 : bc.segment.counts.front());
  }
  cfg.epsilon_c = root.number("epsilon_c", kDefaultEpsilonC);
  if (cfg.epsilon_c < 0.0) fail("epsilon_c", "must be non-negative");
  cfg.quadrature = root.integer("quadrature", dim == 1 ? 200 : dim == 2 ? 100 : 40, 1);
  if (root.has("seed")) {
    if (!root.raw("seed").is_number_unsigned()) fail("seed", "expected a non-negative integer");
    cfg.seed = root.raw("seed").get<std::uint64_t>();
  }
  if (root.has("solver")) cfg.solver = parse_solver(root.child("solver"));
  cfg.output_grid = root.has("output_grid") ? root.ints("output_grid", 2)
                                            : std::vector<int>(static_cast<size_t>(dim), dim == 1 ? 501 : dim == 2 ? 101 : 21);
  if (static_cast<int>(cfg.output_grid.size()) != dim)
    fail("output_grid", "expected " + std::to_string(dim) + " counts (one per dimension)");
  cfg.prune_tol = root.number("prune_tol", 1e-14);
  if (cfg.prune_tol < 0.0) fail("prune_tol", "must be non-negative");

  if (!root.has("stages") || !root.raw("stages").is_array() || root.raw("stages").empty())
    fail("stages", "expected a non-empty array of stages");
  const json& stages = root.raw("stages");
  std::optional<FreqInitConfig> freq_defaults;
  for (size_t i = 0; i < stages.size(); ++i) {
    const std::string path = "stages[" + std::to_string(i) + "]";
    cfg.stages.push_back(parse_stage(Node(stages[i], path), dim, freq_defaults ? &*freq_defaults : nullptr));
    const StageConfig& s = cfg.stages.back();
    const bool init = s.kind == StageKind::FreqInit || s.kind == StageKind::FixedInit;
    if (i == 0 && !init) fail(path + ".kind", "the first stage must be freq_init or fixed_init");
    if (i > 0 && init) fail(path + ".kind", "only the first stage may be an init stage");
    if (i > 0 && cfg.stages[i - 1].kind == StageKind::Split) fail(path, "split must be the last stage");
    if (s.kind == StageKind::FreqInit) freq_defaults = s.freq;
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidConfig, "cannot open config file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidConfig, path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& cfg) {
  const int dim = static_cast<int>(cfg.interior.size());
  json j;
  if (!cfg.case_id.empty()) j["case_id"] = cfg.case_id;
  j["problem"] = cfg.problem;
  j["eta"] = cfg.eta;
  j["interior"] = cfg.interior;
  j["boundary_counts"] = cfg.boundary_counts;
  j["epsilon_c"] = cfg.epsilon_c;
  j["quadrature"] = cfg.quadrature;
  j["seed"] = cfg.seed;
  j["solver"] = {{"picard", cfg.solver.picard}, {"newton", cfg.solver.newton}};
  j["output_grid"] = cfg.output_grid;
  j["prune_tol"] = cfg.prune_tol;
  json stages = json::array();
  for (const auto& s : cfg.stages) {
    json st{{"kind", to_string(s.kind)}, {"label", s.label}};
    if (!s.paper_e0.empty()) st["paper_e0"] = s.paper_e0;
    if (s.solver) st["solver"] = {{"picard", s.solver->picard}, {"newton", s.solver->newton}};
    switch (s.kind) {
      case StageKind::FreqInit:
        st.update(freq_json(s.freq, dim));
        st["m1"] = s.freq.m1;
        break;
      case StageKind::FixedInit:
        st.update(dense_json(s.dense));
        break;
      case StageKind::NeuronGrowth:
        st.update(freq_json(s.freq, dim));
        st["m_add"] = s.m_add;
        st["eps_s"] = s.eps_s;
        st["monotone"] = s.monotone;
        st["warm_start"] = s.warm_start;
        break;
      case StageKind::LayerGrowth: {
        const auto& L = s.layer;
        st["m2"] = L.m2;
        st["h0"] = kH0Names.name(L.h0_mode);
        if (L.h0_mode == H0Mode::Random) st["r2"] = std::vector<double>(L.r2.data(), L.r2.data() + L.r2.size());
        st["eta1"] = L.eta1;
        st["eta2"] = L.eta2;
        st["localize"] = L.localize;
        st["retrain_first_layer"] = L.retrain_first_layer;
        st["indicator"] = kIndicatorNames.name(L.indicator);
        st["activation"] = L.activation.name();
        st["warm_start"] = s.warm_start;
        if (!s.pilot.empty()) st["pilot"] = s.pilot;
        break;
      }
      case StageKind::Split:
        st["segments"] = s.segments;
        st["mode"] = kPartitionNames.name(s.partition);
        if (!s.indicator.empty()) st["indicator"] = s.indicator;
        st["continuous"] = s.continuous;
        st["eps_r"] = s.eps_r;
        st["warm_start"] = s.warm_start;
        if (!s.pilot.empty()) st["pilot"] = s.pilot;
        st["segment"] = dense_json(s.dense);
        break;
    }
    stages.push_back(std::move(st));
  }
  j["stages"] = std::move(stages);
  return j;
}

SegmentIndicator named_indicator(const std::string& name) {
  if (name == "ar1-circle") {
    return [](const Vec& x) { return x[0] * x[0] + x[1] * x[1] < (43.0 / 64.0) * (43.0 / 64.0) ? 0 : 1; };
  }
  if (name == "burgers4-shock") {
    return [](const Vec& z) { return z[1] < 0.5 * z[0] ? 0 : 1; };
  }
  throw Error(ErrorKind::InvalidConfig, "unknown indicator '" + name + "' (ar1-circle, burgers4-shock)");
}

namespace {

const std::map<std::string, const char*>& builtin_sources() {
  static const std::map<std::string, const char*> sources{
      {"poisson-case1", R"({
        "problem": "poisson-1", "interior": [2000],
        "stages": [
          {"kind": "freq_init", "label": "init", "r_max": 400, "lambda": 50, "m1": 200,
           "activation": "gaussian", "paper_e0": 2.68e-4},
          {"kind": "neuron_growth", "label": "growth", "m_add": [100, 50, 50, 50, 50], "eps_s": 0,
           "paper_e0": [6.41e-8, 2.85e-8, 4.37e-9, 5.89e-9, 3.45e-11]}
        ]})"},
      {"poisson-case2", R"({
        "problem": "poisson-2", "interior": [300, 300],
        "stages": [
          {"kind": "fixed_init", "label": "u0", "r": [15, 15], "m1": 2000, "activation": "tanh", "paper_e0": 5.59e-3},
          {"kind": "layer_growth", "label": "u1", "m2": 1500, "r2": [10, 10], "localize": false, "paper_e0": 4.92e-3},
          {"kind": "layer_growth", "label": "u2", "m2": 1500, "r2": [10, 10], "retrain_first_layer": false, "paper_e0": 1.10e-5},
          {"kind": "layer_growth", "label": "u3", "m2": 1500, "h0": "gradient", "paper_e0": 1.37e-5},
          {"kind": "layer_growth", "label": "u4", "m2": 1500, "r2": [10, 10], "paper_e0": 8.77e-7}
        ]})"},
      {"poisson-case2-small", R"({
        "problem": "poisson-2", "interior": [300, 300],
        "stages": [
          {"kind": "fixed_init", "label": "u0", "r": [15, 15], "m1": 1000, "activation": "tanh", "paper_e0": 1.49e-2},
          {"kind": "layer_growth", "label": "u1", "m2": 500, "r2": [10, 10], "localize": false, "paper_e0": 1.05e-2},
          {"kind": "layer_growth", "label": "u2", "m2": 500, "r2": [10, 10], "retrain_first_layer": false, "paper_e0": 1.69e-3},
          {"kind": "layer_growth", "label": "u3", "m2": 500, "h0": "gradient", "paper_e0": 3.21e-4},
          {"kind": "layer_growth", "label": "u4", "m2": 500, "r2": [10, 10], "paper_e0": 8.03e-5}
        ]})"},
      {"poisson-case3", R"({
        "problem": "poisson-3", "interior": [300, 300],
        "stages": [
          {"kind": "freq_init", "label": "init", "r_max": 100, "lambda": 100, "m1": 600, "activation": "tanh",
           "paper_e0": 2.81e-2},
          {"kind": "neuron_growth", "label": "growth", "m_add": [400, 200, 200, 200, 200, 200], "eps_s": 0,
           "paper_e0": [1.65e-2, 1.30e-2, 1.10e-2, 9.42e-3, 7.90e-3, 6.80e-3]},
          {"kind": "layer_growth", "label": "u4", "m2": 1500, "r2": [10, 10], "paper_e0": 1.92e-6}
        ]})"},
      {"poisson-case4", R"({
        "problem": "poisson-4", "interior": [50, 50, 50], "quadrature": 60,
        "stages": [
          {"kind": "fixed_init", "label": "u0", "r": [5, 5, 5], "m1": 1000, "activation": "tanh", "paper_e0": 1.40e-1},
          {"kind": "layer_growth", "label": "u4", "m2": 1000, "r2": [8, 8, 8], "paper_e0": 4.10e-3}
        ]})"},
      {"ar-case1-layer", R"({
        "problem": "ar-1", "interior": [100, 100],
        "stages": [
          {"kind": "fixed_init", "label": "u0", "r": [10, 10], "m1": 500, "activation": "tanh", "paper_e0": 1.87e-1},
          {"kind": "layer_growth", "label": "u4", "m2": 500, "r2": [5, 5], "indicator": "gradient-norm",
           "paper_e0": 5.55e-2}
        ]})"},
      {"ar-case1-pilot", R"({
        "problem": "ar-1", "interior": [100, 100],
        "stages": [
          {"kind": "fixed_init", "label": "u0", "r": [10, 10], "m1": 500, "activation": "tanh", "paper_e0": 1.87e-1},
          {"kind": "split", "label": "split", "mode": "pilot-range", "segments": 2,
           "segment": {"r": [10, 10], "m1": 500, "activation": "tanh"}, "paper_e0": 9.05e-2}
        ]})"},
      {"ar-case1-characteristic", R"({
        "problem": "ar-1", "interior": [100, 100],
        "stages": [
          {"kind": "fixed_init", "label": "u0", "r": [10, 10], "m1": 500, "activation": "tanh", "paper_e0": 1.87e-1},
          {"kind": "split", "label": "split", "mode": "indicator", "indicator": "ar1-circle", "segments": 2,
           "segment": {"r": [10, 10], "m1": 500, "activation": "tanh"}, "paper_e0": 1.42e-9}
        ]})"},
      {"ar-case2", R"({
        "problem": "ar-2", "interior": [100, 100],
        "stages": [
          {"kind": "fixed_init", "label": "u0", "r": [20, 1], "m1": 1000, "activation": "tanh", "paper_e0": 2.21e-1},
          {"kind": "split", "label": "split", "mode": "pilot-range", "segments": 2,
           "segment": {"r": [20, 1], "m1": 1000, "activation": "tanh"}, "paper_e0": 4.94e-2}
        ]})"},
      {"burgers-case1-tuned", R"({
        "problem": "burgers-1", "interior": [100, 200],
        "stages": [
          {"kind": "fixed_init", "label": "u0", "r": [8, 25], "m1": 1000, "activation": "gaussian",
           "solver": {"picard": 20, "newton": 0}, "paper_e0": 4.84e-6}
        ]})"},
      {"burgers-case1", R"({
        "problem": "burgers-1", "interior": [100, 200],
        "stages": [
          {"kind": "fixed_init", "label": "init", "r": [1, 1], "m1": 200, "activation": "gaussian",
           "solver": {"picard": 10, "newton": 0}, "paper_e0": 1.64e-1},
          {"kind": "neuron_growth", "label": "growth", "r_max": 100, "lambda": 100, "activation": "gaussian",
           "m_add": [200, 200, 200, 200], "eps_s": 0, "solver": {"picard": 5, "newton": 0},
           "paper_e0": [1.03e-2, 5.47e-4, 1.52e-4, 2.83e-5]}
        ]})"},
      {"burgers-case2", R"({
        "problem": "burgers-2", "interior": [200, 200],
        "stages": [
          {"kind": "fixed_init", "label": "u0", "r": [20, 20], "m1": 500, "activation": "tanh",
           "solver": {"picard": 10, "newton": 0}, "paper_e0": 2.9285e-2},
          {"kind": "layer_growth", "label": "u3", "m2": 500, "h0": "gradient",
           "solver": {"picard": 0, "newton": 3}, "paper_e0": 1.7374e-3},
          {"kind": "layer_growth", "label": "u4", "m2": 500, "r2": [7, 7],
           "solver": {"picard": 0, "newton": 3}, "paper_e0": 3.5720e-5}
        ]})"},
      {"burgers-case3", R"({
        "problem": "burgers-3", "interior": [66, 200],
        "stages": [
          {"kind": "fixed_init", "label": "u0", "r": [3, 15], "m1": 1000, "activation": "tanh",
           "solver": {"picard": 10, "newton": 0}, "paper_e0": 2.83e-2},
          {"kind": "layer_growth", "label": "u4", "m2": 1000, "r2": [20, 20], "indicator": "gradient-norm",
           "solver": {"picard": 0, "newton": 5}, "paper_e0": 4.31e-3}
        ]})"},
      {"burgers-case4", R"({
        "problem": "burgers-4", "interior": [66, 200],
        "stages": [
          {"kind": "fixed_init", "label": "u0", "r": [15, 15], "m1": 1000, "activation": "tanh",
           "solver": {"picard": 10, "newton": 0}},
          {"kind": "split", "label": "split", "mode": "indicator", "indicator": "burgers4-shock", "segments": 2,
           "segment": {"r": [15, 15], "m1": 1000, "activation": "tanh"},
           "solver": {"picard": 10, "newton": 0}, "paper_e0": 9.78e-16}
        ]})"},
      {"burgers-case4-all", R"({
        "problem": "burgers-4", "interior": [100, 300], "boundary_counts": [300, 183, 183],
        "stages": [
          {"kind": "fixed_init", "label": "init", "r": [1, 1], "m1": 100, "activation": "gaussian",
           "solver": {"picard": 10, "newton": 0}, "paper_e0": 1.8389e-1},
          {"kind": "neuron_growth", "label": "growth", "r_max": 100, "lambda": 100, "activation": "gaussian",
           "m_add": [100, 100], "eps_s": 1e-4, "solver": {"picard": 5, "newton": 0},
           "paper_e0": [1.3625e-1, 1.2972e-1]},
          {"kind": "layer_growth", "label": "smooth", "m2": 700, "r2": [10, 10], "indicator": "gradient-norm",
           "solver": {"picard": 0, "newton": 5}, "paper_e0": 1.24e-1},
          {"kind": "layer_growth", "label": "ramp", "m2": 700, "r2": [10, 10], "indicator": "gradient-norm",
           "activation": "ramp-jump", "solver": {"picard": 0, "newton": 5}, "paper_e0": 8.36e-2},
          {"kind": "split", "label": "split", "pilot": "smooth", "mode": "pilot-range", "segments": 2,
           "segment": {"r": [2, 2], "m1": 500, "activation": "gaussian"},
           "solver": {"picard": 2, "newton": 0}, "paper_e0": 3.91e-2}
        ]})"}};
  return sources;
}

}  // namespace

std::optional<RunConfig> builtin_config(const std::string& case_id) {
  const auto& src = builtin_sources();
  const auto it = src.find(case_id);
  if (it == src.end()) return std::nullopt;
  json j = json::parse(it->second);
  j["case_id"] = case_id;
  return parse_config(j);
}

std::vector<std::string> builtin_cases() {
  std::vector<std::string> out;
  for (const auto& [k, v] : builtin_sources()) out.push_back(k);
  return out;
}

}  // namespace agrnn
