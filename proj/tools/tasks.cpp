#include "tasks.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "checks.hpp"
#include "isq/classical.hpp"
#include "isq/dynamics.hpp"
#include "isq/parallel.hpp"
#include "isq/propagator.hpp"
#include "isq/specfun.hpp"
#include "isq/spectrum.hpp"

namespace isq::app {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

struct Context {
  const RunConfig& cfg;
  std::ostream& log;
  Exponents exps;
  json header;
  std::vector<std::string> written;

  bool strict() const { return cfg.profile == Profile::strict; }

  fs::path path(const std::string& name) const { return fs::path(cfg.out) / name; }

  std::ofstream open(const std::string& name) {
    fs::create_directories(cfg.out);
    const fs::path p = path(name);
    std::ofstream f(p);
    if (!f) throw ConfigError("cannot write '" + p.string() + "'");
    written.push_back(p.string());
    return f;
  }

  std::ofstream open_csv(const std::string& name, const std::string& columns) {
    std::ofstream f = open(name);
    f << "# config: " << header.dump() << '\n' << columns << '\n';
    return f;
  }

  void write_json(const std::string& name, json body) {
    json doc{{"config", header}};
    doc.update(body);
    std::ofstream f = open(name);
    f << doc.dump(2) << '\n';
  }

  void check(const std::string& name, double value, double tol) {
    log << "check " << name << ": " << format_number(value) << " (tol " << format_number(tol) << ")\n";
    if (!(value <= tol)) {
      throw NumericalCheckError(name, format_number(value) + " exceeds tolerance " + format_number(tol));
    }
  }
};

// Writes "a,b,c" from already formatted fields.
struct Row {
  std::string text;
  Row& operator<<(double v) { return add(format_number(v)); }
  Row& operator<<(int v) { return add(std::to_string(v)); }
  Row& operator<<(const std::string& s) { return add(s); }
  Row& add(const std::string& s) {
    if (!text.empty()) text += ',';
    text += s;
    return *this;
  }
};

std::vector<double> grid_points(const GridOptions& g) {
  std::vector<double> xs;
  for (int i = 0; i < g.points; ++i) {
    const double x = g.x_min + (g.x_max - g.x_min) * static_cast<double>(i) / (g.points - 1);
    if (x != 0.0) xs.push_back(x);
  }
  return xs;
}

void run_classical(Context& ctx) {
  using namespace isq::classical;
  const auto& o = ctx.cfg.classical;
  const auto& p = ctx.cfg.params;
  const int steps = static_cast<int>(std::floor(o.t_end / o.dt + 1e-9));
  std::ofstream f = ctx.open_csv("classical.csv", "t,x,E");
  for (int j = 0; j <= steps; ++j) {
    const double t = j * o.dt;
    const ClassicalState s = closed_form_state(o.energy, o.t0, o.sign, t, p);
    f << (Row{} << t << s.x << energy(s, p)).text << '\n';
  }
  // Independent check: RK4 from the same initial state over one period.
  const double dt = ctx.strict() ? 1e-4 : 1e-3;
  const int n = static_cast<int>(std::round(kPi / (p.omega * dt)));
  const auto path = integrate_trajectory(closed_form_state(o.energy, o.t0, o.sign, 0.0, p), dt, n, p);
  double err = 0.0;
  for (const auto& s : path) err = std::max(err, std::abs(s.x - closed_form_trajectory(o.energy, o.t0, o.sign, s.t, p)));
  ctx.check("classical.rk4_agreement", err / p.length_scale(), ctx.strict() ? 1e-6 : 1e-4);
}

void run_spectrum(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const int n_max = cfg.spectrum.n_max;
  std::vector<SpectrumResult> results;
  if (cfg.spectrum.L) {
    results.push_back(solve_spectrum(ctx.exps, *cfg.spectrum.L, n_max, cfg.params));
  } else {
    const SpectralFamily fam = spectral_family(decompose_unitary(cfg.U, cfg.L0), ctx.exps, n_max, cfg.params);
    results = {fam.plus, fam.minus};
  }
  struct Level {
    double lambda;
    std::string branch;
    int n;
  };
  std::vector<Level> levels;
  double residual = 0.0;
  for (const SpectrumResult& r : results) {
    for (std::size_t n = 0; n < r.levels.size(); ++n) {
      levels.push_back({r.levels[n], to_string(r.branch), static_cast<int>(n)});
      double err;
      if (std::isinf(r.L)) {
        err = std::abs(r.levels[n] - (2.0 * n + ctx.exps.c2));
      } else if (r.L == 0.0) {
        err = std::abs(r.levels[n] - (2.0 * n + ctx.exps.c1));
      } else {
        err = std::abs(spectral_function(r.levels[n], ctx.exps).value - r.target);
      }
      residual = std::max(residual, err);
    }
  }
  std::stable_sort(levels.begin(), levels.end(), [](const Level& x, const Level& y) { return x.lambda < y.lambda; });
  json arr = json::array();
  for (const Level& l : levels) {
    arr.push_back({{"branch", l.branch},
                   {"n", l.n},
                   {"lambda", l.lambda},
                   {"energy", l.lambda * cfg.params.hbar * cfg.params.omega}});
  }
  ctx.write_json("spectrum.json", {{"levels", arr}});
  for (const Level& l : levels) ctx.log << l.branch << ' ' << l.n << ' ' << format_number(l.lambda) << '\n';
  ctx.check("spectrum.residual", residual, ctx.strict() ? 1e-10 : 1e-8);
}

double eigenstate_norm(const Eigenstate& s) {
  auto f = [&](double x) { return s.value(x); };
  return inner_product(f, f, s.params, std::max(s.lambda, 1.0)).real();
}

void run_eigenstates(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const int n_max = cfg.eigenstates.n_max;
  struct Labelled {
    int n;
    int s;
    Eigenstate state;
  };
  std::vector<Labelled> states;
  const BoundaryData bd = decompose_unitary(cfg.U, cfg.L0);
  if (cfg.is_sigma1()) {
    for (int s : {1, 2}) {
      if (s == 2 && ctx.exps.c2 == 0.0) continue;
      for (int n = 0; n <= n_max; ++n) states.push_back({n, s, sigma1_eigenstate(n, s, ctx.exps, cfg.params)});
    }
  } else {
    const SpectralFamily fam = spectral_family(bd, ctx.exps, n_max, cfg.params);
    for (int s : {1, 2}) {
      const SpectrumResult& r = s == 1 ? fam.plus : fam.minus;
      const int degenerate_index = bd.degenerate() && s == 2 ? 1 : 0;
      for (int n = 0; n <= n_max; ++n) {
        states.push_back({n, s, assemble_eigenstate(r.levels[n], r.branch, bd, ctx.exps, cfg.params, degenerate_index)});
      }
    }
  }
  const std::vector<double> xs = grid_points(cfg.eigenstates.grid);
  std::ofstream f = ctx.open_csv("eigenstates.csv", "n,s,lambda,x,re_psi,im_psi");
  double boundary = 0.0, norm = 0.0;
  for (const Labelled& l : states) {
    std::vector<cplx> v(xs.size());
    parallel_for(xs.size(), [&](std::size_t j) { v[j] = l.state.value(xs[j]); });
    for (std::size_t j = 0; j < xs.size(); ++j) {
      f << (Row{} << l.n << l.s << l.state.lambda << xs[j] << v[j].real() << v[j].imag()).text << '\n';
    }
    boundary = std::max(boundary, boundary_residual(l.state, bd));
    norm = std::max(norm, std::abs(eigenstate_norm(l.state) - 1.0));
  }
  ctx.check("eigenstates.boundary_residual", boundary, ctx.strict() ? 1e-8 : 1e-6);
  ctx.check("eigenstates.norm", norm, ctx.strict() ? 1e-8 : 1e-6);
}

std::vector<std::array<double, 3>> kernel_tuples(const RunConfig& cfg) {
  if (!cfg.kernel.tuples.empty()) return cfg.kernel.tuples;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> mag(0.2, 2.5), phase(0.2, kPi - 0.2);
  std::bernoulli_distribution neg(0.5);
  std::uniform_int_distribution<int> half(0, 2);
  const double ell = cfg.params.length_scale();
  std::vector<std::array<double, 3>> out;
  for (int i = 0; i < cfg.kernel.random_tuples; ++i) {
    std::array<double, 3> t{};
    for (int j = 0; j < 2; ++j) {
      const bool flip = neg(rng);
      t[j] = (flip ? -1.0 : 1.0) * mag(rng) * ell;
    }
    const double base = phase(rng);
    t[2] = (base + kPi * half(rng)) / cfg.params.omega;
    out.push_back(t);
  }
  return out;
}

void run_kernel(Context& ctx) {
  const auto& cfg = ctx.cfg;
  if (!cfg.is_sigma1()) throw ConfigError("the kernel task requires U = sigma1");
  const bool compare = cfg.kernel.compare;
  const auto tuples = kernel_tuples(cfg);
  std::ofstream f = ctx.open_csv("kernel.csv", compare ? "x_f,x_i,T,re_K,im_K,method,rel_error" : "x_f,x_i,T,re_K,im_K,method");
  // Spectral sums dominate the cost; compute them in parallel, write in order.
  std::vector<cplx> spectral(tuples.size());
  std::vector<char> caustic(tuples.size());
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    caustic[i] = std::abs(std::sin(cfg.params.omega * tuples[i][2])) < kCausticThreshold;
  }
  if (compare) {
    parallel_for(tuples.size(), [&](std::size_t i) {
      if (caustic[i]) return;
      const auto& t = tuples[i];
      spectral[i] = kernel_spectral_extrapolated(t[0], t[1], t[2], ctx.exps, cfg.params, cfg.kernel.epsilon);
    });
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const auto& t = tuples[i];
    Row base;
    base << t[0] << t[1] << t[2];
    if (caustic[i]) {
      const int k = static_cast<int>(std::lround(cfg.params.omega * t[2] / kPi));
      const CausticWeights w = caustic_weights(k, ctx.exps.a);
      for (const auto& [value, name] : {std::pair{w.same_side, "caustic_same_side"}, std::pair{w.mirror, "caustic_mirror"}}) {
        Row r = base;
        r << value.real() << value.imag() << std::string(name);
        if (compare) r << std::string();
        f << r.text << '\n';
      }
      continue;
    }
    const cplx closed = kernel_closed({t[0], t[1], t[2]}, ctx.exps, cfg.params);
    Row r = base;
    r << closed.real() << closed.imag() << std::string("closed");
    if (!compare) {
      f << r.text << '\n';
      continue;
    }
    const double err = std::abs(spectral[i] - closed) / std::abs(closed);
    worst = std::max(worst, err);
    r << err;
    Row s = base;
    s << spectral[i].real() << spectral[i].imag() << std::string("spectral") << err;
    f << r.text << '\n' << s.text << '\n';
  }
  ctx.log << "kernel: " << tuples.size() << " tuples\n";
  if (compare) ctx.check("kernel.closed_vs_spectral", worst, ctx.strict() ? 1e-3 : 1e-2);
}

// exp(-((x - c)/w)^2) on the half-line containing c, unit norm.
std::function<cplx(double)> half_line_gaussian(double center, double width) {
  if (center == 0.0) throw ConfigError("packet center must be non-zero");
  const double c = std::abs(center);
  const double norm2 = width * std::sqrt(kPi / 2.0) * 0.5 * std::erfc(-std::sqrt(2.0) * c / width);
  const double scale = 1.0 / std::sqrt(norm2);
  const double side = center > 0.0 ? 1.0 : -1.0;
  return [=](double x) -> cplx {
    const double y = side * x;
    if (y <= 0.0) return 0.0;
    const double u = (y - c) / width;
    return scale * std::exp(-u * u);
  };
}

WavePacket expand_checked(Context& ctx, const std::function<cplx(double)>& psi, int n_max, const std::string& check) {
  const Expansion ex = expand(psi, ctx.exps, ctx.cfg.params, n_max, INFINITY);
  ctx.check(check, ex.residual, ctx.strict() ? 1e-4 : 1e-3);
  return ex.packet;
}

void write_density(std::ofstream& f, const WavePacket& p, const std::vector<double>& xs, const Row& prefix) {
  const std::vector<cplx> v = packet_values(p, xs);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    Row r = prefix;
    r << xs[j] << std::norm(v[j]);
    f << r.text << '\n';
  }
}

void run_evolve(Context& ctx) {
  const auto& o = ctx.cfg.evolve;
  WavePacket packet;
  if (o.packet.type == "gaussian") {
    packet = expand_checked(ctx, half_line_gaussian(o.packet.center, o.packet.width), o.n_max, "evolve.truncation_residual");
  } else {
    if (o.packet.c1.empty() && o.packet.c2.empty()) throw ConfigError("evolve.packet needs c1 or c2 coefficients");
    packet = make_packet(o.packet.c1, o.packet.c2, ctx.exps, ctx.cfg.params);
  }
  const std::vector<double> xs = grid_points(o.grid);
  std::ofstream f = ctx.open_csv("evolve.csv", "t,x,rho");
  for (double t : o.times) {
    Row prefix;
    prefix << t;
    write_density(f, evolve(packet, t), xs, prefix);
  }
  ctx.log << "evolve: " << o.times.size() << " snapshots, coefficient norm "
          << format_number(packet.coefficient_norm()) << '\n';
}

void run_copy_demo(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& o = cfg.copy_demo;
  const double leak = 0.5 * std::erfc(std::sqrt(2.0) * o.center / o.width);
  if (leak > 1e-10) throw ConfigError("copy-demo packet is not confined to x > 0 to 1e-10 (increase center/width)");
  const WavePacket initial =
      expand_checked(ctx, half_line_gaussian(o.center, o.width), o.n_max, "copy-demo.truncation_residual");
  const std::vector<double> xs = grid_points(o.grid);
  std::ofstream f = ctx.open_csv("copy_demo.csv", "k,frame,t,x,rho");
  json results = json::array();
  std::vector<std::pair<std::string, double>> l1;
  for (int k : o.k) {
    for (int j = 0; j <= o.frames; ++j) {
      const double t = j * k * kPi / (cfg.params.omega * o.frames);
      Row prefix;
      prefix << k << j << t;
      write_density(f, evolve(initial, t), xs, prefix);
    }
    const CopyReport rep = copy_experiment(o.width, o.center, ctx.exps.a, k, o.n_max, cfg.params, INFINITY);
    const double c = specfun::cos_pi(ctx.exps.a * k);
    results.push_back({{"k", k},
                       {"T", rep.T},
                       {"mass_right", rep.mass_right},
                       {"mass_left", rep.mass_left},
                       {"expected_mass_right", c * c},
                       {"expected_mass_left", 1.0 - c * c},
                       {"l1_error", rep.l1_error},
                       {"residual", rep.residual}});
    ctx.log << "copy-demo k=" << k << ": mass_right " << format_number(rep.mass_right) << ", mass_left "
            << format_number(rep.mass_left) << ", L1 " << format_number(rep.l1_error) << '\n';
    l1.emplace_back("copy-demo.l1_error[k=" + std::to_string(k) + "]", rep.l1_error);
  }
  ctx.write_json("copy_demo_summary.json", {{"results", results}});
  for (const auto& [name, value] : l1) ctx.check(name, value, ctx.strict() ? 1e-3 : 1e-2);
}

void run_selftest(Context& ctx) {
  json rows = json::array();
  std::vector<std::string> failed;
  const auto results = run_acceptance(ctx.cfg.profile, ctx.cfg.seed, [&](const CheckResult& r) {
    ctx.log << (r.passed ? "PASS" : "FAIL") << "  " << r.id << "  " << r.name << "  (" << r.seconds << " s)  "
            << r.detail << '\n';
  });
  std::ofstream f = ctx.open_csv("selftest.csv", "id,name,passed");
  for (const CheckResult& r : results) {
    f << (Row{} << r.id << r.name << std::string(r.passed ? "true" : "false")).text << '\n';
    if (!r.passed) failed.push_back(r.name);
  }
  if (!failed.empty()) {
    std::string names;
    for (const auto& n : failed) names += (names.empty() ? "" : ", ") + n;
    throw NumericalCheckError("selftest", "failing criteria: " + names);
  }
}

}  // namespace

std::vector<std::string> run_task(const RunConfig& cfg, std::ostream& log) {
  validate_config(cfg);
  Context ctx{cfg, log, exponents_from_coupling(cfg.params, cfg.mode), resolved_config(cfg), {}};
  static const std::map<std::string, void (*)(Context&)> tasks{
      {"classical", run_classical}, {"spectrum", run_spectrum}, {"eigenstates", run_eigenstates},
      {"kernel", run_kernel},       {"evolve", run_evolve},     {"copy-demo", run_copy_demo},
      {"selftest", run_selftest},
  };
  tasks.at(cfg.task)(ctx);
  return ctx.written;
}

}  // namespace isq::app
