#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "paralayer/cli.hpp"
#include "paralayer/csv.hpp"

using namespace paralayer;
namespace fs = std::filesystem;

namespace {

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"paralayer"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

// fresh per-case scratch directory under the system temp root
fs::path scratch(const std::string& tag) {
  const fs::path dir =
      fs::temp_directory_path() / ("paralayer_cli_" + std::to_string(::getpid()) + "_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

// small fast run description shared by the happy-path cases
const char* kSmallConfig =
    "# reference layer, shrunk for test speed\n"
    "alpha = 2\n"
    "k = 1\n"
    "a = 0.3\n"
    "p = 20\n"
    "s_max = 10\n"
    "n = 200\n"
    "n_s = 48\n"
    "n_u = 12\n"
    "m_max = 2\n";

}  // namespace

TEST_CASE("geometry command writes its tables and the manifest") {
  const auto dir = scratch("geom");
  const auto cfg = (dir / "run.cfg").string();
  write_text_file(cfg, kSmallConfig);
  const auto out = (dir / "out").string();

  CHECK(run({"geometry", "--config", cfg, "--out", out}) == 0);
  const auto table = read_text_file(out + "/geometry.csv");
  CHECK(contains(table, "s,phi,dphi,ddphi,gamma,dgamma,ddgamma,kappa1\n"));
  CHECK(read_text_file(out + "/tail_limits.csv").find("name,measured,limit,rel_err") == 0);
  const auto manifest = read_text_file(out + "/manifest.txt");
  CHECK(contains(manifest, "status = ok"));
  CHECK(contains(manifest, "rho = "));
  CHECK(contains(manifest, "s_max = 10"));
  fs::remove_all(dir);
}

TEST_CASE("malformed configurations exit with code 2") {
  const auto dir = scratch("cfg");
  const auto out = (dir / "out").string();

  CHECK(run({"geometry", "--set", "no_such_key=1", "--out", out}) == 2);
  CHECK(contains(read_text_file(out + "/manifest.txt"), "status = config-error"));

  CHECK(run({"geometry", "--config", (dir / "missing.cfg").string(), "--out", out}) == 2);
  CHECK(run({"geometry", "--set", "E_list=1e-4,1e-3", "--out", out}) == 2);
  CHECK(run({"geometry", "--set", "alpha=1", "--out", out}) == 2);
  CHECK(run({"geometry", "--set", "a=zero", "--out", out}) == 2);
  CHECK(run({"nonsense_command"}) == 2);
  fs::remove_all(dir);
}

TEST_CASE("inadmissible half-width exits with code 3") {
  const auto dir = scratch("inj");
  const auto cfg = (dir / "run.cfg").string();
  write_text_file(cfg, kSmallConfig);
  const auto out = (dir / "out").string();

  // rho = 1/2 for the reference layer, so a = 0.6 folds the layer onto itself
  CHECK(run({"fiber", "--config", cfg, "--set", "a=0.6", "--out", out}) == 3);
  const auto manifest = read_text_file(out + "/manifest.txt");
  CHECK(contains(manifest, "status = numerical-error"));
  CHECK(contains(manifest, "self-intersects"));
  fs::remove_all(dir);
}

TEST_CASE("asymptotics output is deterministic and the plot is flag-gated") {
  const auto dir = scratch("asym");
  const auto cfg = (dir / "run.cfg").string();
  write_text_file(cfg, std::string(kSmallConfig) + "E_list = 1e-2, 2e-3\nh = 0.1\n");
  const auto out_a = (dir / "a").string(), out_b = (dir / "b").string();

  CHECK(run({"asymptotics", "--config", cfg, "--out", out_a}) == 0);
  CHECK(run({"asymptotics", "--config", cfg, "--out", out_b, "--plot"}) == 0);
  const auto table_a = read_text_file(out_a + "/asymptotics.csv");
  CHECK(table_a == read_text_file(out_b + "/asymptotics.csv"));
  CHECK(table_a.find("E,n_lower,n_upper,asymptote,ratio_lower,ratio_upper,"
                     "conical_reference\n") == 0);

  CHECK(!fs::exists(out_a + "/ratios.svg"));
  CHECK(read_text_file(out_b + "/ratios.svg").find("<svg") == 0);
  fs::remove_all(dir);
}

TEST_CASE("spectrum1d reports levels for both cut proxies") {
  const auto dir = scratch("sp1d");
  const auto cfg = (dir / "run.cfg").string();
  write_text_file(cfg, std::string(kSmallConfig) + "E_list = 1e-2, 1e-3\n");
  const auto out = (dir / "out").string();

  CHECK(run({"spectrum1d", "--config", cfg, "--out", out}) == 0);
  const auto table = read_text_file(out + "/spectrum1d.csv");
  CHECK(table.find("variant,index,eigenvalue\n") == 0);
  CHECK(contains(table, "cut_lower,1,-"));
  CHECK(contains(table, "cut_upper,1,-"));
  fs::remove_all(dir);
}

TEST_CASE("fiber command writes one row per mode") {
  const auto dir = scratch("fiber");
  const auto cfg = (dir / "run.cfg").string();
  write_text_file(cfg, kSmallConfig);
  const auto out = (dir / "out").string();

  ::setenv("PARALAYER_THREADS", "2", 1);
  CHECK(run({"fiber", "--config", cfg, "--out", out}) == 0);
  ::unsetenv("PARALAYER_THREADS");

  const auto table = read_text_file(out + "/fiber.csv");
  CHECK(table.find("m,count,lambda1,lambda2,lambda3\n") == 0);
  // header plus m = 0,1,2 and the trailing newline
  CHECK(std::count(table.begin(), table.end(), '\n') == 4);
  CHECK(contains(table, "\n0,"));
  CHECK(contains(table, "\n2,"));
  fs::remove_all(dir);
}

TEST_CASE("help returns success") { CHECK(run({"--help"}) == 0); }
