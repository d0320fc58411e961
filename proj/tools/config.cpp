#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace isq::app {

using nlohmann::json;

namespace {

// Reads the members of one JSON object, remembering which keys were used so
// that leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(where() + " must be a JSON object");
  }

  bool has(const std::string& key) {
    allowed_.insert(key);
    return obj_.contains(key);
  }

  const json& at(const std::string& key) { return obj_.at(key); }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_number()) throw ConfigError(key_path(key) + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(key_path(key) + " must be finite");
    return d;
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) throw ConfigError(key_path(key) + " must be an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_boolean()) throw ConfigError(key_path(key) + " must be true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_string()) throw ConfigError(key_path(key) + " must be a string");
    return v.get<std::string>();
  }

  void reject_unknown() const {
    for (const auto& item : obj_.items()) {
      if (!allowed_.count(item.key())) throw ConfigError("unknown key '" + key_path(item.key()) + "'");
    }
  }

 private:
  std::string where() const { return path_.empty() ? "config" : "'" + path_ + "'"; }

  const json& obj_;
  std::string path_;
  std::set<std::string> allowed_;
};

cplx parse_complex(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(path + " must be a number or a [re, im] pair");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<cplx> parse_complex_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path + " must be an array of [re, im] pairs");
  std::vector<cplx> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(parse_complex(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> parse_number_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(path + " must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

void parse_U(const json& v, RunConfig& cfg) {
  if (v.is_string()) {
    cfg.U_spec = v.get<std::string>();
    try {
      cfg.U = unitary_from_keyword(cfg.U_spec);
    } catch (const InvalidParameter& e) {
      throw ConfigError(std::string("U: ") + e.what());
    }
    return;
  }
  if (!v.is_array() || v.size() != 4) {
    throw ConfigError("U must be a keyword or four [re, im] entries in row order");
  }
  for (int i = 0; i < 4; ++i) cfg.U(i / 2, i % 2) = parse_complex(v[i], "U[" + std::to_string(i) + "]");
  cfg.U_spec = "matrix";
}

GridOptions parse_grid(ObjectReader& r, const std::string& key, GridOptions g) {
  if (!r.has(key)) return g;
  ObjectReader gr(r.at(key), r.key_path(key));
  g.x_min = gr.number("x_min", g.x_min);
  g.x_max = gr.number("x_max", g.x_max);
  g.points = gr.integer("points", g.points);
  gr.reject_unknown();
  if (!(g.x_max > g.x_min) || g.points < 2) throw ConfigError(r.key_path(key) + " needs x_max > x_min and points >= 2");
  return g;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void parse_task_options(ObjectReader& top, RunConfig& cfg) {
  if (top.has("classical")) {
    ObjectReader r(top.at("classical"), "classical");
    auto& o = cfg.classical;
    o.energy = r.number("energy", o.energy);
    o.t0 = r.number("t0", o.t0);
    o.sign = r.integer("sign", o.sign);
    o.t_end = r.number("t_end", o.t_end);
    o.dt = r.number("dt", o.dt);
    r.reject_unknown();
    require(o.sign == 1 || o.sign == -1, "classical.sign must be 1 or -1");
    require(o.t_end > 0.0 && o.dt > 0.0, "classical.t_end and classical.dt must be positive");
  }
  if (top.has("spectrum")) {
    ObjectReader r(top.at("spectrum"), "spectrum");
    auto& o = cfg.spectrum;
    o.n_max = r.integer("n_max", o.n_max);
    if (r.has("L")) {
      const json& v = r.at("L");
      if (v.is_string() && v.get<std::string>() == "inf") {
        o.L = INFINITY;
      } else if (v.is_number()) {
        o.L = v.get<double>();
      } else {
        throw ConfigError("spectrum.L must be a number or \"inf\"");
      }
    }
    r.reject_unknown();
    require(o.n_max >= 0, "spectrum.n_max must be non-negative");
  }
  if (top.has("eigenstates")) {
    ObjectReader r(top.at("eigenstates"), "eigenstates");
    auto& o = cfg.eigenstates;
    o.n_max = r.integer("n_max", o.n_max);
    o.grid = parse_grid(r, "grid", o.grid);
    r.reject_unknown();
    require(o.n_max >= 0, "eigenstates.n_max must be non-negative");
  }
  if (top.has("kernel")) {
    ObjectReader r(top.at("kernel"), "kernel");
    auto& o = cfg.kernel;
    if (r.has("tuples")) {
      const json& v = r.at("tuples");
      require(v.is_array(), "kernel.tuples must be an array of [x_f, x_i, T]");
      for (const auto& t : v) {
        const std::vector<double> xs = parse_number_list(t, "kernel.tuples[]");
        require(xs.size() == 3, "kernel.tuples entries must be [x_f, x_i, T]");
        o.tuples.push_back({xs[0], xs[1], xs[2]});
      }
    }
    o.random_tuples = r.integer("random_tuples", o.random_tuples);
    o.compare = r.boolean("compare", o.compare);
    o.epsilon = r.number("epsilon", o.epsilon);
    r.reject_unknown();
    require(o.random_tuples >= 0, "kernel.random_tuples must be non-negative");
  }
  if (top.has("evolve")) {
    ObjectReader r(top.at("evolve"), "evolve");
    auto& o = cfg.evolve;
    if (r.has("packet")) {
      ObjectReader pr(r.at("packet"), "evolve.packet");
      o.packet.type = pr.string("type", o.packet.type);
      o.packet.center = pr.number("center", o.packet.center);
      o.packet.width = pr.number("width", o.packet.width);
      if (pr.has("c1")) o.packet.c1 = parse_complex_list(pr.at("c1"), "evolve.packet.c1");
      if (pr.has("c2")) o.packet.c2 = parse_complex_list(pr.at("c2"), "evolve.packet.c2");
      pr.reject_unknown();
      require(o.packet.type == "gaussian" || o.packet.type == "coefficients",
              "evolve.packet.type must be \"gaussian\" or \"coefficients\"");
      require(o.packet.width > 0.0, "evolve.packet.width must be positive");
    }
    o.n_max = r.integer("n_max", o.n_max);
    if (r.has("times")) o.times = parse_number_list(r.at("times"), "evolve.times");
    o.grid = parse_grid(r, "grid", o.grid);
    r.reject_unknown();
    require(o.n_max >= 0, "evolve.n_max must be non-negative");
  }
  if (top.has("copy-demo")) {
    ObjectReader r(top.at("copy-demo"), "copy-demo");
    auto& o = cfg.copy_demo;
    if (r.has("k")) {
      o.k.clear();
      for (double v : parse_number_list(r.at("k"), "copy-demo.k")) {
        require(v >= 1.0 && v == std::floor(v), "copy-demo.k entries must be integers >= 1");
        o.k.push_back(static_cast<int>(v));
      }
    }
    o.center = r.number("center", o.center);
    o.width = r.number("width", o.width);
    o.n_max = r.integer("n_max", o.n_max);
    o.frames = r.integer("frames", o.frames);
    o.grid = parse_grid(r, "grid", o.grid);
    r.reject_unknown();
    require(o.center > 0.0 && o.width > 0.0, "copy-demo.center and copy-demo.width must be positive");
    require(o.frames >= 1 && o.n_max >= 0, "copy-demo.frames must be >= 1 and n_max >= 0");
  }
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json grid_json(const GridOptions& g) { return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"points", g.points}}; }

}  // namespace

std::string to_string(Profile p) { return p == Profile::strict ? "strict" : "fast"; }

Profile profile_from_string(const std::string& s) {
  if (s == "strict") return Profile::strict;
  if (s == "fast") return Profile::fast;
  throw ConfigError("tolerance profile must be \"strict\" or \"fast\", got '" + s + "'");
}

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names{"classical", "spectrum", "eigenstates", "kernel",
                                              "evolve",    "copy-demo", "selftest"};
  return names;
}

bool RunConfig::is_sigma1() const { return (U - pauli_sigma1()).cwiseAbs().maxCoeff() <= 1e-12; }

RunConfig parse_config(const json& doc) {
  RunConfig cfg;
  ObjectReader r(doc, "");
  cfg.params.m = r.number("m", cfg.params.m);
  cfg.params.omega = r.number("omega", cfg.params.omega);
  cfg.params.hbar = r.number("hbar", cfg.params.hbar);
  const bool has_g = r.has("g");
  const bool has_a = r.has("a");
  if (has_g && has_a) throw ConfigError("give either g or a, not both");
  cfg.params.g = r.number("g", cfg.params.g);
  const std::string mode = r.string("coupling_mode", "tunneling");
  if (mode == "tunneling") {
    cfg.mode = CouplingMode::tunneling;
  } else if (mode == "limit_test") {
    cfg.mode = CouplingMode::limit_test;
  } else {
    throw ConfigError("coupling_mode must be \"tunneling\" or \"limit_test\"");
  }
  if (has_a) {
    const double a = r.number("a", 0.75);
    if (!(a >= 0.5)) throw ConfigError("a must be at least 1/2");
    cfg.params.g = coupling_for_exponent(a, cfg.params);
  }
  if (r.has("U")) parse_U(r.at("U"), cfg);
  cfg.L0 = r.number("L0", cfg.L0);
  cfg.task = r.string("task", cfg.task);
  cfg.out = r.string("out", cfg.out);
  if (r.has("seed")) {
    const json& v = r.at("seed");
    if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError("seed must be a non-negative integer");
    cfg.seed = v.get<std::uint64_t>();
  }
  cfg.profile = profile_from_string(r.string("tolerance_profile", "strict"));
  parse_task_options(r, cfg);
  r.reject_unknown();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

void validate_config(const RunConfig& cfg) {
  const auto& names = task_names();
  if (std::find(names.begin(), names.end(), cfg.task) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw ConfigError("unknown task '" + cfg.task + "' (expected one of: " + list + ")");
  }
  try {
    exponents_from_coupling(cfg.params, cfg.mode);
    decompose_unitary(cfg.U, cfg.L0);
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
}

json resolved_config(const RunConfig& cfg) {
  const Exponents e = exponents_from_coupling(cfg.params, cfg.mode);
  json U = json::array();
  for (int i = 0; i < 4; ++i) U.push_back(complex_json(cfg.U(i / 2, i % 2)));
  json tuples = json::array();
  for (const auto& t : cfg.kernel.tuples) tuples.push_back({t[0], t[1], t[2]});
  json c1 = json::array(), c2 = json::array();
  for (cplx z : cfg.evolve.packet.c1) c1.push_back(complex_json(z));
  for (cplx z : cfg.evolve.packet.c2) c2.push_back(complex_json(z));
  json spectrum = {{"n_max", cfg.spectrum.n_max}};
  if (cfg.spectrum.L) {
    spectrum["L"] = std::isinf(*cfg.spectrum.L) ? json("inf") : json(*cfg.spectrum.L);
  }
  return {
      {"m", cfg.params.m},
      {"omega", cfg.params.omega},
      {"hbar", cfg.params.hbar},
      {"g", cfg.params.g},
      {"coupling_mode", cfg.mode == CouplingMode::tunneling ? "tunneling" : "limit_test"},
      {"derived", {{"a", e.a}, {"c1", e.c1}, {"c2", e.c2}}},
      {"U", U},
      {"U_spec", cfg.U_spec},
      {"L0", cfg.L0},
      {"task", cfg.task},
      {"out", cfg.out},
      {"seed", cfg.seed},
      {"tolerance_profile", to_string(cfg.profile)},
      {"classical",
       {{"energy", cfg.classical.energy},
        {"t0", cfg.classical.t0},
        {"sign", cfg.classical.sign},
        {"t_end", cfg.classical.t_end},
        {"dt", cfg.classical.dt}}},
      {"spectrum", spectrum},
      {"eigenstates", {{"n_max", cfg.eigenstates.n_max}, {"grid", grid_json(cfg.eigenstates.grid)}}},
      {"kernel",
       {{"tuples", tuples},
        {"random_tuples", cfg.kernel.random_tuples},
        {"compare", cfg.kernel.compare},
        {"epsilon", cfg.kernel.epsilon}}},
      {"evolve",
       {{"packet",
         {{"type", cfg.evolve.packet.type},
          {"center", cfg.evolve.packet.center},
          {"width", cfg.evolve.packet.width},
          {"c1", c1},
          {"c2", c2}}},
        {"n_max", cfg.evolve.n_max},
        {"times", cfg.evolve.times},
        {"grid", grid_json(cfg.evolve.grid)}}},
      {"copy-demo",
       {{"k", cfg.copy_demo.k},
        {"center", cfg.copy_demo.center},
        {"width", cfg.copy_demo.width},
        {"n_max", cfg.copy_demo.n_max},
        {"frames", cfg.copy_demo.frames},
        {"grid", grid_json(cfg.copy_demo.grid)}}},
  };
}

}  // namespace isq::app
