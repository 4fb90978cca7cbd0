#include "paralayer/cli.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <streambuf>
#include <string>
#include <vector>

#include "paralayer/acceptance.hpp"
#include "paralayer/asymptotics.hpp"
#include "paralayer/config.hpp"
#include "paralayer/csv.hpp"
#include "paralayer/report.hpp"
#include "paralayer/schrodinger1d.hpp"
#include "paralayer/strip2d.hpp"

namespace paralayer {

namespace {

namespace fs = std::filesystem;
using Geometry = MeridianGeometry<double>;

std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  std::string out(buf);
  for (char& c : out)
    if (c == ',') c = '.';
  return out;
}

// geometry span generous enough for the tail sups behind xi/zeta and for
// every strip command; the 1D commands extend it on demand
double base_span(const RunConfig& cfg) {
  return std::max({1000.0, 10.0 * cfg.s_max, 2.0 * cfg.p + 10.0});
}

Geometry build_geometry(const RunConfig& cfg, double span) {
  return Geometry::build(make_profile(cfg), span, cfg.n);
}

// half-width admissibility gate shared by the layer commands
void require_injective(const Geometry& geom, double a) {
  const auto rep = injectivity_check(geom, a);
  if (rep.ok) return;
  throw std::domain_error("layer self-intersects: half-width a = " + short_num(a) +
                          " is not admissible (curvature bound rho = " +
                          short_num(rep.rho) + ")");
}

void cmd_geometry(const RunConfig& cfg, const std::string& dir, std::string& note) {
  const auto geom = build_geometry(cfg, base_span(cfg));
  CsvTable t({"s", "phi", "dphi", "ddphi", "gamma", "dgamma", "ddgamma", "kappa1"});
  for (long long j = 0; j < cfg.n; ++j) {
    const double s = cfg.s_max * double(j) / double(cfg.n - 1);
    t.add_row({csv_number(s), csv_number(geom.phi(s)), csv_number(geom.dphi(s)),
               csv_number(geom.ddphi(s)), csv_number(geom.gamma(s)),
               csv_number(geom.dgamma(s)), csv_number(geom.ddgamma(s)),
               csv_number(geom.kappa1(s))});
  }
  write_text_file(dir + "/geometry.csv", t.render());

  const auto rep = tail_limits(geom);
  CsvTable tl({"name", "measured", "limit", "rel_err"});
  for (const auto& r : rep.rows)
    tl.add_row({r.name, csv_number(r.measured), csv_number(r.limit), csv_number(r.rel_err)});
  write_text_file(dir + "/tail_limits.csv", tl.render());

  const auto inj = injectivity_check(geom, cfg.a);
  note = "rho = " + short_num(inj.rho) + ", a = " + short_num(cfg.a) +
         (inj.ok ? " (admissible)" : " (NOT admissible)");
}

void cmd_potential(const RunConfig& cfg, const std::string& dir) {
  const auto geom = build_geometry(cfg, base_span(cfg));
  require_injective(geom, cfg.a);
  const StripPotentials<double> pots(geom, cfg.a, cfg.p);
  CsvTable t({"s", "q_global", "q_cut_lower", "q_cut_upper", "u_m1", "u_m2", "u_m3"});
  // samples start one step in: the centrifugal columns diverge at s = 0
  for (long long j = 1; j <= cfg.n; ++j) {
    const double s = cfg.s_max * double(j) / double(cfg.n);
    t.add_row({csv_number(s), csv_number(pots.q(QVariant::Global, s)),
               csv_number(pots.q(QVariant::CutLower, s)),
               csv_number(pots.q(QVariant::CutUpper, s)), csv_number(pots.U_m(s, 1)),
               csv_number(pots.U_m(s, 2)), csv_number(pots.U_m(s, 3))});
  }
  write_text_file(dir + "/potential.csv", t.render());
}

// extends the geometry when the truncated 1D grid outruns the base span
void extend_for_tail(const RunConfig& cfg, Geometry& geom, StripPotentials<double>& pots,
                     double E_min) {
  const double beta = 2.0 / cfg.alpha;
  const double c_up = std::pow(cfg.k, beta) / (4.0 * pots.cut().zeta);
  const double need = cfg.p + truncation_length(beta, c_up, E_min) + 1.0;
  if (need > geom.s_max()) {
    geom = build_geometry(cfg, need);
    pots = StripPotentials<double>(geom, cfg.a, cfg.p);
  }
}

void cmd_spectrum1d(const RunConfig& cfg, const std::string& dir) {
  auto geom = build_geometry(cfg, base_span(cfg));
  require_injective(geom, cfg.a);
  StripPotentials<double> pots(geom, cfg.a, cfg.p);
  const double E_min = cfg.E_list.back();
  extend_for_tail(cfg, geom, pots, E_min);

  const double beta = 2.0 / cfg.alpha;
  const double xi = pots.cut().xi;
  const double c_up = std::pow(cfg.k, beta) / (4.0 * pots.cut().zeta);
  const double L = truncation_length(beta, c_up, E_min);
  const Grid1D<double> grid{L, static_cast<Eigen::Index>(std::ceil(L / cfg.h))};

  CsvTable t({"variant", "index", "eigenvalue"});
  {
    const auto op = discretize([&pots](double s) { return pots.q(QVariant::CutLower, s); },
                               grid, Boundary1D::DirichletBoth);
    const auto ev = eigenvalues_below(op, -E_min * (1 - xi) * (1 - xi), 12);
    for (std::size_t i = 0; i < ev.size(); ++i)
      t.add_row({"cut_lower", csv_number(static_cast<long long>(i + 1)), csv_number(ev[i])});
  }
  {
    const auto base = discretize([&pots](double s) { return pots.q(QVariant::CutUpper, s); },
                                 grid, Boundary1D::RobinLeft);
    const auto op = robin_rank_one(base, pots.robin_sigma());
    const auto ev = eigenvalues_below(op, -E_min * (1 + xi) * (1 + xi), 12);
    for (std::size_t i = 0; i < ev.size(); ++i)
      t.add_row({"cut_upper", csv_number(static_cast<long long>(i + 1)), csv_number(ev[i])});
  }
  write_text_file(dir + "/spectrum1d.csv", t.render());
}

void cmd_fiber(const RunConfig& cfg, const std::string& dir) {
  const auto geom = build_geometry(cfg, base_span(cfg));
  require_injective(geom, cfg.a);
  const double lam_e = transverse_level(1, cfg.a);
  CsvTable t({"m", "count", "lambda1", "lambda2", "lambda3"});
  for (long long m = 0; m <= cfg.m_max; ++m) {
    const LeftEdge edge = m == 0 ? LeftEdge::Natural : LeftEdge::Dirichlet;
    const StripGrid<double> grid{0.0, cfg.s_max, cfg.n_s, cfg.n_u, cfg.a, edge};
    const auto op = assemble_meridian_weighted(geom, grid, static_cast<int>(m));
    const int count = count_below_threshold(op, lam_e);
    std::vector<double> ev;
    if (count > 0) ev = lowest_eigenvalues(op, std::min(count, 3), lam_e);
    std::vector<std::string> row{csv_number(m), csv_number(static_cast<long long>(count))};
    for (int i = 0; i < 3; ++i)
      row.push_back(i < static_cast<int>(ev.size()) ? csv_number(ev[i]) : std::string());
    t.add_row(std::move(row));
  }
  write_text_file(dir + "/fiber.csv", t.render());
}

void cmd_asymptotics(const RunConfig& cfg, const std::string& dir, bool plot) {
  auto geom = build_geometry(cfg, base_span(cfg));
  require_injective(geom, cfg.a);
  StripPotentials<double> pots(geom, cfg.a, cfg.p);
  extend_for_tail(cfg, geom, pots, cfg.E_list.back());

  const auto rows = ratio_study(pots, cfg.E_list, cfg.h);
  CsvTable t({"E", "n_lower", "n_upper", "asymptote", "ratio_lower", "ratio_upper",
              "conical_reference"});
  for (const auto& r : rows)
    t.add_row({csv_number(r.E), csv_number(static_cast<long long>(r.n_lower)),
               csv_number(static_cast<long long>(r.n_upper)), csv_number(r.asymptote),
               csv_number(r.ratio_lower), csv_number(r.ratio_upper),
               csv_number(conical_reference(cfg.k, r.E))});
  write_text_file(dir + "/asymptotics.csv", t.render());

  if (plot) {
    const double xi = pots.cut().xi, ze = pots.cut().zeta;
    const double lo = std::pow(ze, cfg.alpha / 2) * std::pow(1 - xi, 1 - cfg.alpha) - 0.1;
    const double hi = std::pow(ze, -cfg.alpha / 2) * std::pow(1 + xi, 1 - cfg.alpha) + 0.1;
    write_text_file(dir + "/ratios.svg", render_ratio_svg(rows, lo, hi));
  }
}

// duplicates everything written to it into a second buffer, so the
// verification log reaches the terminal live and the output directory
struct TeeBuf : std::streambuf {
  std::streambuf *first, *second;
  TeeBuf(std::streambuf* a, std::streambuf* b) : first(a), second(b) {}
  int overflow(int c) override {
    if (c != traits_type::eof()) {
      first->sputc(traits_type::to_char_type(c));
      second->sputc(traits_type::to_char_type(c));
    }
    return c;
  }
  int sync() override {
    first->pubsync();
    second->pubsync();
    return 0;
  }
};

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "discrete spectrum and counting-function tools for rotationally symmetric layers"};
  app.require_subcommand(1);

  std::string config_path, out_flag;
  std::vector<std::string> overrides;
  bool plot = false;
  long long threads = 0;
  app.add_option("--config", config_path, "run description file (key = value lines)");
  app.add_option("--set", overrides, "override one config key, e.g. --set a=0.25");
  app.add_option("--out", out_flag, "output directory (overrides output_dir)");
  app.add_flag("--plot", plot, "also render plots where supported");
  app.add_option("--threads", threads, "Eigen thread count")->envname("PARALAYER_THREADS");

  // fallthrough lets the shared options above appear after the subcommand
  app.add_subcommand("geometry", "tabulate the meridian curve and its tail limits")
      ->fallthrough();
  app.add_subcommand("potential", "tabulate the comparison potentials")->fallthrough();
  app.add_subcommand("spectrum1d", "bound levels of the 1D cut proxies")->fallthrough();
  app.add_subcommand("fiber", "per-mode counts and lowest levels of the 2D fibers")
      ->fallthrough();
  app.add_subcommand("asymptotics", "counting-function ratio study over E_list")
      ->fallthrough();
  app.add_subcommand("verify", "run the acceptance gates")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  Manifest man;
  man.subcommand = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  std::string dir;
  const auto finish = [&](const std::string& status, const std::string& msg, int rc) {
    man.status = status;
    man.message = msg;
    man.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    if (!dir.empty()) {
      try {
        write_manifest(dir, man);
      } catch (...) {
      }
    }
    return rc;
  };

  try {
    if (!config_path.empty()) cfg = parse_config_text(read_text_file(config_path));
    for (const auto& kv : overrides) apply_override(cfg, kv);
    validate(cfg);
    man.config_echo = config_echo(cfg);
    dir = out_flag.empty() ? cfg.output_dir : out_flag;
    fs::create_directories(dir);
  } catch (const std::exception& e) {
    dir = out_flag.empty() ? cfg.output_dir : out_flag;
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::cerr << "config error: " << e.what() << "\n";
    return finish("config-error", e.what(), 2);
  }

  if (threads > 0) Eigen::setNbThreads(static_cast<int>(threads));

  try {
    const std::string& sub = man.subcommand;
    if (sub == "geometry") {
      cmd_geometry(cfg, dir, man.message);
    } else if (sub == "potential") {
      cmd_potential(cfg, dir);
    } else if (sub == "spectrum1d") {
      cmd_spectrum1d(cfg, dir);
    } else if (sub == "fiber") {
      cmd_fiber(cfg, dir);
    } else if (sub == "asymptotics") {
      cmd_asymptotics(cfg, dir, plot);
    } else {
      std::ostringstream copy;
      TeeBuf buf(std::cout.rdbuf(), copy.rdbuf());
      std::ostream tee(&buf);
      const int failures = run_acceptance(tee, cfg.seed);
      write_text_file(dir + "/acceptance.txt", copy.str());
      if (failures > 0)
        return finish("acceptance-failed",
                      std::to_string(failures) + " criteria failed", 1);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return finish("numerical-error", e.what(), 3);
  }

  return finish("ok", man.message, 0);
}

}  // namespace paralayer
