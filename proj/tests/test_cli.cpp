#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "funnelsim/cli.hpp"

using namespace funnelsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("funnelsim-cli-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& y0, const std::string& sim) {
  const auto path = dir / name;
  std::ofstream(path) << "[sim]\n" << sim << "\n[plant]\nf = affine:0,0,1\ngamma = 1\ny0 = " << y0
                      << "\n[operator]\nkind = convolution\natoms = 0:1\n"
                         "[controller]\nr = 1\nphi_0 = expshift:2,2,0.1\n[reference]\nkind = cos\n";
  return path;
}

int cli(const std::vector<std::string>& args, std::string* output = nullptr) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  if (output) *output = out.str();
  return code;
}

}  // namespace

TEST_CASE("run writes a deterministic trace") {
  const auto dir = scratch_dir("run");
  CHECK(cli({"run", "dirac0", "--horizon", "1", "--out", (dir / "a").string(), "--svg"}) == kExitOk);
  CHECK(cli({"run", "dirac0", "--horizon", "1", "--out", (dir / "b").string()}) == kExitOk);
  const auto a = slurp(dir / "a" / "trace.csv");
  CHECK(a == slurp(dir / "b" / "trace.csv"));
  CHECK(a.rfind("t,y_1,yref_1,u_1,w_1,e0norm,k0,rad0\n", 0) == 0);
  CHECK(a.find('\r') == std::string::npos);
  CHECK(fs::exists(dir / "a" / "plot.svg"));
  const auto report = slurp(dir / "a" / "report.txt");
  CHECK(report.find("verdict=pass") != std::string::npos);
}

TEST_CASE("exit codes") {
  const auto dir = scratch_dir("codes");
  const auto out = (dir / "out").string();
  CHECK(cli({"run", "no-such-preset", "--out", out}) == kExitConfig);
  CHECK(cli({"run", write_config(dir, "bad.ini", "0", "horizon = 1\ndt = 0.01\nspeed = 3").string(), "--out", out}) ==
        kExitConfig);
  CHECK(cli({"run", write_config(dir, "edge.ini", "3.1", "horizon = 1\ndt = 0.01").string(), "--out", out}) ==
        kExitInadmissible);
  CHECK(cli({"run", write_config(dir, "coarse.ini", "0", "horizon = 5\ndt = 0.5\nmax_halvings = 0").string(),
             "--out", out}) == kExitStepCollapse);
  CHECK(cli({"run", write_config(dir, "caps.ini", "0", "horizon = 1\ndt = 0.01\nu_cap = 0.001").string(), "--out",
             out}) == kExitVerification);
  CHECK(cli({"run", "dirac0", "--integrator", "midpoint", "--out", out}) == kExitConfig);
  CHECK(cli({"frobnicate"}) == kExitConfig);
}

TEST_CASE("batch runs write one directory per source") {
  const auto dir = scratch_dir("batch");
  const auto edge = write_config(dir, "edge.ini", "3.1", "horizon = 1\ndt = 0.01");
  CHECK(cli({"run", "dirac0", edge.string(), "--horizon", "0.5", "--jobs", "2", "--out", (dir / "out").string()}) ==
        kExitInadmissible);
  CHECK(fs::exists(dir / "out" / "dirac0" / "trace.csv"));
}

TEST_CASE("probes") {
  std::string text;
  CHECK(cli({"probe", "delay", "causality", "--trials", "10", "--horizon", "3"}, &text) == kExitOk);
  CHECK(text.find("passed=10") != std::string::npos);
  CHECK(cli({"probe", "dirac0", "lipschitz", "--trials", "5", "--horizon", "4"}, &text) == kExitOk);
  CHECK(text.find("estimate=1\n") != std::string::npos);
  CHECK(cli({"probe", "dirac0", "entropy"}) == kExitConfig);
}
