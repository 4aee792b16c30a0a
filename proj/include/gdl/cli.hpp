#pragma once

// Command-line front end. Each subcommand runs one pipeline and writes
// report records (one JSON object per line) plus optional SVG plots.
// Exit codes: 0 success, 2 precondition or usage error, 3 numeric failure.

#include <fstream>
#include <iostream>
#include <memory>
#include <random>

#include <CLI11.hpp>

#include "gdl/certifier.hpp"
#include "gdl/deform.hpp"
#include "gdl/experiments.hpp"
#include "gdl/frame.hpp"
#include "gdl/molecule.hpp"
#include "gdl/pointset.hpp"
#include "gdl/report.hpp"
#include "gdl/tf_core.hpp"

namespace gdl::cli {

enum ExitCode : int { kOk = 0, kPrecondition = 2, kNumeric = 3 };

struct Common {
  int L = 144;
  std::string window = "gaussian";
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string plot;
};

struct PointSpec {
  std::vector<double> lattice;  // a b
  std::string points;           // file
};

// Canonical "name=value;" string of every option except outputs and help,
// hashed into the report so replays with different settings are detectable.
inline std::string config_hash(const CLI::App& sub) {
  std::string canon = sub.get_name() + ";";
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_name();
    if (name == "--help" || name == "--out" || name == "--plot" || name == "--config") continue;
    canon += name + "=";
    if (opt->results().empty()) {
      canon += opt->get_default_str();
    } else {
      for (const auto& r : opt->results()) canon += r + ",";
    }
    canon += ";";
  }
  return hex64(fnv1a(canon));
}

inline std::vector<int> parse_n_list(const std::string& spec) {
  std::vector<int> out;
  const auto dots = spec.find("..");
  try {
    if (dots != std::string::npos) {
      const int lo = std::stoi(spec.substr(0, dots)), hi = std::stoi(spec.substr(dots + 2));
      if (lo < 1 || hi < lo) throw PreconditionError("--n range must satisfy 1 <= lo <= hi");
      for (long long n = lo; n <= hi; n *= 2) out.push_back(static_cast<int>(n));
    } else {
      std::stringstream ss(spec);
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    }
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const PreconditionError*>(&e)) throw;
    throw PreconditionError("--n: cannot parse '" + spec + "' (expected lo..hi or a comma list)");
  }
  if (out.empty()) throw PreconditionError("--n: empty list");
  return out;
}

inline PointSet load_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open point-set file '" + path + "'");
  return read_pointset(in);
}

inline std::vector<double> load_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open values file '" + path + "'");
  return read_values(in);
}

// Torus point set from either --lattice a b or --points file.
inline PointSet resolve_points(const PointSpec& ps, const SignalGrid& grid, double& a, double& b) {
  if (!ps.points.empty()) {
    a = b = 0.0;
    return to_torus(load_points(ps.points), grid.P);
  }
  if (ps.lattice.size() != 2) throw PreconditionError("--lattice needs two spacings a b");
  const auto T = torus_lattice(grid, ps.lattice[0], ps.lattice[1]);
  a = T.a;
  b = T.b;
  return T.points;
}

inline int exit_code(const std::exception& e) {
  return dynamic_cast<const PreconditionError*>(&e) ? kPrecondition : kNumeric;
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(int argc, const char* const* argv) {
    CLI::App app{"Gabor frames under deformations: experiments and reports", "gdl"};
    app.set_config("--config", "", "INI file with one [subcommand] section of key = value lines");
    app.require_subcommand(1, 1);
    app.fallthrough(false);

    std::function<void()> action;
    CLI::App* active = nullptr;
    auto sub = [&](const char* name, const char* desc) {
      CLI::App* s = app.add_subcommand(name, desc);
      s->callback([&, s] { active = s; });
      return s;
    };

    // frame-bounds / riesz-bounds
    for (const char* name : {"frame-bounds", "riesz-bounds"}) {
      auto c = std::make_shared<Common>();
      auto ps = std::make_shared<PointSpec>();
      CLI::App* s = sub(name, std::string(name) == "frame-bounds" ? "Frame bounds of a Gabor system"
                                                                  : "Riesz bounds of a Gabor system");
      add_common(s, *c);
      add_points(s, *ps);
      const bool riesz = std::string(name) == "riesz-bounds";
      actions_[s] = [this, c, ps, riesz, s] { return frame_command(*s, *c, *ps, riesz); };
    }
    {
      auto c = std::make_shared<Common>();
      auto ps = std::make_shared<PointSpec>();
      auto family = std::make_shared<std::string>("dilation");
      auto nspec = std::make_shared<std::string>("4..32");
      auto eps = std::make_shared<std::vector<double>>(std::vector<double>{0.001, 0.01, 0.05});
      CLI::App* s = sub("deform-sweep", "Frame bounds along a deformation family");
      add_common(s, *c);
      add_points(s, *ps, {std::sqrt(0.5), std::sqrt(0.5)});
      s->add_option("--family", *family, "dilation or jitter")->check(CLI::IsMember({"dilation", "jitter"}))->capture_default_str();
      s->add_option("--n", *nspec, "dilation indices: lo..hi (doubling) or a comma list")->capture_default_str();
      s->add_option("--eps", *eps, "jitter sizes")->capture_default_str();
      actions_[s] = [this, c, ps, family, nspec, eps, s] { return sweep_command(*s, *c, *ps, *family, *nspec, *eps); };
    }
    {
      auto c = std::make_shared<Common>();
      c->L = 256;
      auto ps = std::make_shared<PointSpec>();
      auto q = std::make_shared<ModulusQuadrature>(ModulusQuadrature{64, 2, 32});
      auto ds = std::make_shared<DeltaSearch>();
      CLI::App* s = sub("certify", "Certify a frame from the M1 modulus of the window and the hole of the set");
      add_common(s, *c);
      add_points(s, *ps, {0.25, 0.25});
      s->add_option("--u-steps", q->u_steps, "angles per ring")->check(CLI::PositiveNumber)->capture_default_str();
      s->add_option("--u-rings", q->u_rings, "rings of the shift grid")->check(CLI::PositiveNumber)->capture_default_str();
      s->add_option("--phase-steps", q->phase_steps, "phases")->check(CLI::PositiveNumber)->capture_default_str();
      s->add_option("--margin", ds->margin, "certify when omega < 1 - margin")->capture_default_str();
      s->add_option("--tolerance", ds->tolerance, "bisection width")->capture_default_str();
      actions_[s] = [this, c, ps, q, ds, s] { return certify_command(*s, *c, *ps, *q, *ds); };
    }
    {
      auto c = std::make_shared<Common>();
      c->L = 256;
      auto cfg = std::make_shared<CounterexampleConfig>();
      auto radius = std::make_shared<double>(40.0);
      auto scatter = std::make_shared<double>(12.0);
      CLI::App* s = sub("counterexample", "Annuli deformation: hole growth and restricted frame bounds");
      add_common(s, *c);
      s->add_option("--n", cfg->n, "annuli index n")->check(CLI::PositiveNumber)->capture_default_str();
      s->add_option("--radius", *radius, "largest truncation radius; radius/4 and radius/2 are also run")
          ->check(CLI::PositiveNumber)->capture_default_str();
      s->add_option("--spacing", cfg->spacing, "lattice spacing")->check(CLI::PositiveNumber)->capture_default_str();
      s->add_option("--scatter-radius", *scatter, "radius of the scatter plot window")->check(CLI::PositiveNumber)->capture_default_str();
      actions_[s] = [this, c, cfg, radius, scatter, s] { return counterexample_command(*s, *c, *cfg, *radius, *scatter); };
    }
    {
      auto c = std::make_shared<Common>();
      c->L = 64;
      auto positions = std::make_shared<std::string>();
      auto amplitudes = std::make_shared<std::string>();
      auto env_nodes = std::make_shared<std::string>();
      auto env_values = std::make_shared<std::string>();
      auto inflate = std::make_shared<double>(1.0);
      auto random_phase = std::make_shared<bool>(false);
      CLI::App* s = sub("molecule-check", "Check |V_g f_lambda(z)| <= Phi(z - lambda) on the full grid");
      add_common(s, *c);
      s->add_option("--positions", *positions, "point-set file of molecule positions")->required()->check(CLI::ExistingFile);
      s->add_option("--amplitudes", *amplitudes, "values file: f_lambda = c_lambda pi(lambda) g")->check(CLI::ExistingFile);
      s->add_option("--envelope-nodes", *env_nodes, "point-set file of envelope nodes")->check(CLI::ExistingFile);
      s->add_option("--envelope-values", *env_values, "values file for the envelope nodes")->check(CLI::ExistingFile);
      s->add_option("--inflate", *inflate, "default envelope: inflate * |V_g g|")->check(CLI::PositiveNumber)->capture_default_str();
      s->add_flag("--random-phase", *random_phase, "multiply each molecule by a seeded unimodular phase");
      actions_[s] = [this, c, positions, amplitudes, env_nodes, env_values, inflate, random_phase, s] {
        return molecule_command(*s, *c, *positions, *amplitudes, *env_nodes, *env_values, *inflate, *random_phase);
      };
    }
    {
      auto c = std::make_shared<Common>();
      auto trials = std::make_shared<int>(50);
      auto budget = std::make_shared<int>(4);
      CLI::App* s = sub("transfer-check", "Seeded l^p lower-bound transfer trials on Gaussian Gabor matrices");
      add_common(s, *c);
      s->add_option("--trials", *trials, "number of trials")->check(CLI::PositiveNumber)->capture_default_str();
      s->add_option("--budget", *budget, "random starts per heuristic search")->check(CLI::NonNegativeNumber)->capture_default_str();
      actions_[s] = [this, c, trials, budget, s] { return transfer_command(*s, *c, *trials, *budget); };
    }

    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return kOk;
    } catch (const CLI::CallForAllHelp&) {
      out_ << app.help("", CLI::AppFormatMode::All);
      return kOk;
    } catch (const CLI::ParseError& e) {
      err_ << "error: " << e.what() << '\n';
      return kPrecondition;
    }
    if (!active) {
      err_ << "error: no subcommand given\n";
      return kPrecondition;
    }
    try {
      return actions_.at(active)();
    } catch (const std::exception& e) {
      const int code = exit_code(e);
      err_ << (code == kPrecondition ? "error: " : "numeric failure: ") << e.what() << '\n';
      return code;
    }
  }

 private:
  static void add_common(CLI::App* s, Common& c) {
    s->add_option("--L", c.L, "samples of the finite model")->check(CLI::Range(4, 1 << 20))->capture_default_str();
    s->add_option("--window", c.window, "gaussian or bump")->check(CLI::IsMember({"gaussian", "bump"}))->capture_default_str();
    s->add_option("--seed", c.seed, "master seed")->capture_default_str();
    s->add_option("--out", c.out, "report file ('-' for stdout)")->capture_default_str();
    s->add_option("--plot", c.plot, "SVG plot path; a .csv sidecar is written next to it");
  }

  static void add_points(CLI::App* s, PointSpec& ps, std::vector<double> lattice = {std::sqrt(0.5), std::sqrt(0.5)}) {
    ps.lattice = std::move(lattice);
    auto* lat = s->add_option("--lattice", ps.lattice, "square-grid spacings a b (snapped to the torus)")
                    ->expected(2)
                    ->capture_default_str();
    s->add_option("--points", ps.points, "point-set file (phase space, m = 2)")->check(CLI::ExistingFile)->excludes(lat);
  }

  // Writes records to --out, stamping each with the elapsed time.
  void emit(const Common& c, std::vector<ReportRecord>& records, const Stopwatch& sw) {
    for (auto& r : records) r.set_wall_ms(sw.ms());
    if (c.out == "-") {
      ReportWriter w(out_);
      for (const auto& r : records) w.write(r);
      return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw PreconditionError("cannot open report file '" + c.out + "'");
    ReportWriter w(f);
    for (const auto& r : records) w.write(r);
  }

  static void put_frame(ReportRecord& r, const FrameReport& f) {
    r.set("A", f.A).set("B", f.B).set("cond", f.cond).set("n_points", f.n_points).set("L", f.L);
  }

  int frame_command(const CLI::App& s, const Common& c, const PointSpec& ps, bool riesz) {
    Stopwatch sw;
    const auto grid = make_grid(c.L);
    const auto g = make_window(c.window, grid);
    double a = 0, b = 0;
    const auto S = resolve_points(ps, grid, a, b);
    const auto f = riesz ? riesz_bounds(g, S) : frame_bounds(g, S);
    ReportRecord r(s.get_name(), config_hash(s), c.seed);
    r.set("window", c.window);
    if (a > 0) r.set("a", a).set("b", b);
    put_frame(r, f);
    std::vector<ReportRecord> recs{r};
    emit(c, recs, sw);
    return kOk;
  }

  int sweep_command(const CLI::App& s, const Common& c, const PointSpec& ps, const std::string& family,
                    const std::string& nspec, const std::vector<double>& eps) {
    Stopwatch sw;
    const auto grid = make_grid(c.L);
    const auto g = make_window(c.window, grid);
    double a = 0, b = 0;
    const auto S = resolve_points(ps, grid, a, b);
    const auto base = frame_bounds(g, S);
    std::vector<FramePoint> series;
    if (family == "dilation") {
      const auto ns = parse_n_list(nspec);
      for (int n : ns)
        if (n < 2) throw PreconditionError("--n: the periodic dilation needs n >= 2");
      series = dilation_sweep(g, S, ns);
    } else {
      if (eps.empty()) throw PreconditionError("--eps: empty list");
      series = jitter_sweep(g, S, eps, c.seed);
    }
    const std::string hash = config_hash(s);
    std::vector<ReportRecord> recs;
    ReportRecord head(s.get_name(), hash, c.seed);
    head.set("family", family).set("baseline", true);
    put_frame(head, base);
    recs.push_back(head);
    Series sa{"A", {}, {}}, sb{"B", {}, {}}, s0{"A (undeformed)", {}, {}};
    for (const auto& p : series) {
      ReportRecord r(s.get_name(), hash, c.seed);
      r.set("family", family).set("param", p.param);
      put_frame(r, p.report);
      r.set("A_deviation", std::abs(p.report.A - base.A));
      recs.push_back(r);
      sa.x.push_back(p.param);
      sa.y.push_back(p.report.A);
      sb.x.push_back(p.param);
      sb.y.push_back(p.report.B);
      s0.x.push_back(p.param);
      s0.y.push_back(base.A);
    }
    if (!c.plot.empty())
      emit_plot({"Frame bounds along the " + family + " family", family == "dilation" ? "n" : "jitter size",
                 "frame bound", {sa, sb, s0}},
                c.plot);
    emit(c, recs, sw);
    return kOk;
  }

  int certify_command(const CLI::App& s, const Common& c, const PointSpec& ps, const ModulusQuadrature& q,
                      const DeltaSearch& ds) {
    Stopwatch sw;
    const auto grid = make_grid(c.L);
    const auto g = make_window(c.window, grid);
    double a = 0, b = 0;
    const auto S = resolve_points(ps, grid, a, b);
    const auto [delta, omega] = critical_delta(g, q, ds);
    const auto cert = certificate_for(delta, omega, torus_hole(S, grid.P), q, ds);
    ReportRecord r(s.get_name(), config_hash(s), c.seed);
    r.set("window", c.window).set("L", c.L);
    if (a > 0) r.set("a", a).set("b", b);
    r.set("delta", cert.delta)
        .set("omega_delta", cert.omega_delta)
        .set("hole", cert.hole_rho)
        .set("margin", cert.margin)
        .set("verdict", to_string(cert.verdict))
        .set("u_steps", q.u_steps)
        .set("u_rings", q.u_rings)
        .set("phase_steps", q.phase_steps)
        .set("bisection_tolerance", cert.bisection_tolerance);
    std::vector<ReportRecord> recs{r};
    emit(c, recs, sw);
    return kOk;
  }

  int counterexample_command(const CLI::App& s, const Common& c, CounterexampleConfig cfg, double radius,
                             double scatter_radius) {
    Stopwatch sw;
    cfg.L = c.L;
    cfg.radii = {radius / 4.0, radius / 2.0, radius};
    const auto res = run_counterexample(cfg);
    const std::string hash = config_hash(s);
    std::vector<ReportRecord> recs;
    Series hb{"hole of the lattice", {}, {}}, hd{"hole of the deformed set", {}, {}};
    for (const auto& row : res.rows) {
      ReportRecord r(s.get_name(), hash, c.seed);
      r.set("n", cfg.n).set("R", row.R).set("hole_base", row.hole_base).set("hole_deformed", row.hole_deformed);
      recs.push_back(r);
      hb.x.push_back(row.R);
      hb.y.push_back(row.hole_base);
      hd.x.push_back(row.R);
      hd.y.push_back(row.hole_deformed);
    }
    ReportRecord r(s.get_name(), hash, c.seed);
    r.set("n", cfg.n)
        .set("probe_annulus", res.annulus)
        .set("probe_radius", res.probe_radius)
        .set("A_restricted_base", res.restricted_base.A)
        .set("A_restricted_deformed", res.restricted_deformed.A)
        .set("n_points_base", res.restricted_base.n_points)
        .set("n_points_deformed", res.restricted_deformed.n_points)
        .set("odd_annuli_points", res.odd_annuli_points)
        .set("L", c.L);
    recs.push_back(r);
    if (!c.plot.empty()) {
      emit_plot({"Hole within radius R, annuli deformation n = " + std::to_string(cfg.n), "R", "hole", {hb, hd}},
                c.plot);
      Series sl{"lattice", {}, {}, true}, sd{"deformed", {}, {}, true};
      auto fill = [&](const PointSet& P, Series& out) {
        for (std::size_t i = 0; i < P.size(); ++i) {
          const auto p = P.point(i);
          if (std::hypot(p[0], p[1]) <= scatter_radius) {
            out.x.push_back(p[0]);
            out.y.push_back(p[1]);
          }
        }
      };
      fill(res.base_points, sl);
      fill(res.deformed_points, sd);
      PlotSpec spec{"Lattice and its annuli deformation", "x", "xi", {sl, sd}};
      spec.equal_aspect = true;
      emit_plot(spec, scatter_path(c.plot));
    }
    emit(c, recs, sw);
    return kOk;
  }

  int molecule_command(const CLI::App& s, const Common& c, const std::string& positions,
                       const std::string& amplitudes, const std::string& env_nodes, const std::string& env_values,
                       double inflate, bool random_phase) {
    Stopwatch sw;
    const auto grid = make_grid(c.L);
    const auto g = make_window(c.window, grid);
    const auto P = load_points(positions);
    const auto pos = phase_points(P);
    std::vector<double> amp(pos.size(), 1.0);
    if (!amplitudes.empty()) {
      amp = load_values(amplitudes);
      if (amp.size() != pos.size()) throw PreconditionError("--amplitudes: one value per position is required");
    }
    Envelope env;
    if (!env_nodes.empty() || !env_values.empty()) {
      if (env_nodes.empty() || env_values.empty())
        throw PreconditionError("--envelope-nodes and --envelope-values must be given together");
      env = sampled_envelope(load_points(env_nodes), load_values(env_values));
    } else {
      TFField F = stft_field(g.signal(), g);
      for (auto& v : F.values) v *= inflate;
      env = field_envelope(F);
    }
    MoleculeSet M{pos, {}, g, env};
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> ph(0.0, kTwoPi);
    for (std::size_t i = 0; i < pos.size(); ++i) {
      const Complex w = amp[i] * (random_phase ? std::polar(1.0, ph(rng)) : Complex(1.0));
      M.members.push_back(w * tf_shift(g.signal(), pos[i]));
    }
    const auto chk = check_molecules(M);
    ReportRecord r(s.get_name(), config_hash(s), c.seed);
    r.set("L", c.L)
        .set("molecules", pos.size())
        .set("max_violation", chk.max_violation)
        .set("worst_index", chk.worst_index)
        .set("worst_z_x", chk.worst_z.x)
        .set("worst_z_xi", chk.worst_z.xi);
    std::vector<ReportRecord> recs{r};
    emit(c, recs, sw);
    return kOk;
  }

  int transfer_command(const CLI::App& s, const Common& c, int trials, int budget) {
    Stopwatch sw;
    const auto res = transfer_suite(trials, c.seed, budget);
    const std::string hash = config_hash(s);
    std::vector<ReportRecord> recs;
    double min1 = kInf, mininf = kInf, svd_dev = 0.0;
    bool all = true;
    Series s1{"l1 estimate", {}, {}}, si{"linf estimate", {}, {}};
    for (std::size_t i = 0; i < res.size(); ++i) {
      const auto& t = res[i];
      ReportRecord r(s.get_name(), hash, c.seed);
      r.set("trial", i)
          .set("trial_seed", std::to_string(t.seed))
          .set("sigma_min_svd", t.sigma_min_svd)
          .set("p2_bound", t.report.known_bound)
          .set("l1_estimate", t.report.entries[0].estimate)
          .set("linf_estimate", t.report.entries[1].estimate)
          .set("domination_constant", t.report.domination.min_constant)
          .set("pass", t.report.pass);
      recs.push_back(r);
      min1 = std::min(min1, t.report.entries[0].estimate);
      mininf = std::min(mininf, t.report.entries[1].estimate);
      svd_dev = std::max(svd_dev, std::abs(t.report.known_bound - t.sigma_min_svd));
      all = all && t.report.pass;
      s1.x.push_back(static_cast<double>(i));
      s1.y.push_back(t.report.entries[0].estimate);
      si.x.push_back(static_cast<double>(i));
      si.y.push_back(t.report.entries[1].estimate);
    }
    ReportRecord sum(s.get_name(), hash, c.seed);
    sum.set("trials", trials)
        .set("min_l1_estimate", min1)
        .set("min_linf_estimate", mininf)
        .set("max_p2_svd_deviation", svd_dev)
        .set("tolerance", 0.01)
        .set("pass", all);
    recs.push_back(sum);
    if (!c.plot.empty()) emit_plot({"Heuristic lower bounds per trial", "trial", "estimate", {s1, si}}, c.plot);
    emit(c, recs, sw);
    return kOk;
  }

  static std::string scatter_path(const std::string& plot) {
    const auto dot = plot.rfind(".svg");
    return dot == std::string::npos ? plot + "-scatter.svg" : plot.substr(0, dot) + "-scatter.svg";
  }

  std::ostream& out_;
  std::ostream& err_;
  std::map<const CLI::App*, std::function<int()>> actions_;
};

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Runner r(out, err);
  return r.run(argc, argv);
}

}  // namespace gdl::cli
