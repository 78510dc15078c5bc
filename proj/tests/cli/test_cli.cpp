#include <chrono>
#include <cstdlib>
#include <doctest.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "refsde/config.hpp"
#include "refsde/errors.hpp"
#include "refsde/estimate.hpp"
#include "refsde/format.hpp"
#include "refsde/path_io.hpp"
#include "refsde/simulate.hpp"

namespace fs = std::filesystem;
using namespace refsde;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "refsde_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run(const std::string& args) {
  const fs::path out = work_dir() / "stdout.txt";
  const fs::path err = work_dir() / "stderr.txt";
  const std::string cmd = std::string(REFSDE_BIN_PATH) + " " + args + " >" +
                          out.string() + " 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  result.out = slurp(out);
  result.err = slurp(err);
  return result;
}

std::string write_config(const std::string& name, const std::string& body) {
  const fs::path file = work_dir() / name;
  std::ofstream out(file);
  out << body;
  return file.string();
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text) {
    if (c == '\n') ++n;
  }
  return n;
}

const char* kSimulateCfg = R"raw([simulate]
drift = "sin2pi"
theta = 1.0
sigma = 2.0
lower = 0.0
upper = 3.0
x0 = 1.5
dt = 0.1
n_steps = 200
seed = 42
)raw";

}  // namespace

TEST_CASE("simulate writes the path and its manifest") {
  const std::string cfg = write_config("sim.cfg", kSimulateCfg);
  const fs::path out = work_dir() / "path.csv";
  const RunResult r = run("simulate --config " + cfg + " --out " + out.string());
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(out));
  std::ifstream in(out);
  std::ostringstream buf;
  buf << in.rdbuf();
  CHECK(count_lines(buf.str()) == 2 + 201);  // header comment + columns + n+1 rows
  REQUIRE(fs::exists(out.string() + ".manifest.json"));
  std::ifstream min(out.string() + ".manifest.json");
  std::ostringstream mbuf;
  mbuf << min.rdbuf();
  CHECK(mbuf.str().find("config_digest") != std::string::npos);
}

TEST_CASE("estimate on a saved path reproduces the library call bitwise") {
  const std::string cfg = write_config("sim2.cfg", kSimulateCfg);
  const fs::path out = work_dir() / "path2.csv";
  REQUIRE(run("simulate --config " + cfg + " --out " + out.string()).exit_code == 0);

  const SimConfig config = load_sim_config_file(cfg);
  const ReflectedPath path = simulate(config);
  EstimateOptions options;
  options.sigma = config.sigma;
  const std::string expected = estimate_csv_row(estimate(path, config.drift, options));

  const RunResult r = run("estimate --path " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out == expected + "\n");

  // the method flag only relabels the row
  const RunResult lse = run("estimate --path " + out.string() + " --method LSE");
  CHECK(lse.out == "LSE," + expected.substr(4) + "\n");
}

TEST_CASE("exit code 3 for x0 outside the barrier interval") {
  std::string bad = kSimulateCfg;
  bad.replace(bad.find("x0 = 1.5"), 8, "x0 = 5.0");
  const std::string cfg = write_config("bad_x0.cfg", bad);
  const RunResult r = run("simulate --config " + cfg + " --out " +
                          (work_dir() / "never.csv").string());
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("x0") != std::string::npos);
}

TEST_CASE("exit code 2 for unknown drift names, listing the valid set") {
  std::string bad = kSimulateCfg;
  bad.replace(bad.find("\"sin2pi\""), 8, "\"cubic\"");
  const std::string cfg = write_config("bad_drift.cfg", bad);
  const RunResult r = run("simulate --config " + cfg + " --out " +
                          (work_dir() / "never.csv").string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("sin2pi") != std::string::npos);
  CHECK(r.err.find("sqrt") != std::string::npos);
  CHECK(r.err.find("linear") != std::string::npos);
}

TEST_CASE("exit code 2 for unknown config keys") {
  const std::string cfg = write_config("unknown.cfg",
                                       std::string(kSimulateCfg) + "mystery = 1\n");
  const RunResult r = run("simulate --config " + cfg + " --out " +
                          (work_dir() / "never.csv").string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("mystery") != std::string::npos);
}

TEST_CASE("exit code 3 for tampered path files, naming the first bad row") {
  const std::string cfg = write_config("sim3.cfg", kSimulateCfg);
  const fs::path out = work_dir() / "path3.csv";
  REQUIRE(run("simulate --config " + cfg + " --out " + out.string()).exit_code == 0);

  ReflectedPath path = load_path_csv(out.string());
  std::int64_t victim = -1;
  for (std::int64_t i = 0; i < path.n_steps(); ++i) {
    if (path.states[i + 1] > 0.5 && path.states[i + 1] < 2.5) {
      victim = i;
      break;
    }
  }
  REQUIRE(victim >= 0);
  for (std::size_t j = static_cast<std::size_t>(victim) + 1; j < path.l_cum.size(); ++j) {
    path.l_cum[j] += 0.5;
  }
  save_path_csv(path, out.string());
  const RunResult r = run("estimate --path " + out.string());
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("row " + std::to_string(victim + 4)) != std::string::npos);
}

TEST_CASE("missing sigma falls back to the plug-in with a warning") {
  const std::string cfg = write_config("sim4.cfg", kSimulateCfg);
  const fs::path out = work_dir() / "path4.csv";
  REQUIRE(run("simulate --config " + cfg + " --out " + out.string()).exit_code == 0);
  // strip sigma from the header line
  std::ifstream in(out);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  const auto pos = text.find(" sigma=2");
  REQUIRE(pos != std::string::npos);
  text.erase(pos, 8);
  std::ofstream rewrite(out);
  rewrite << text;
  rewrite.close();
  const RunResult r = run("estimate --path " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("plug-in") != std::string::npos);
}

TEST_CASE("montecarlo smoke run is fast and byte-for-byte deterministic") {
  const std::string cfg = write_config("smoke.cfg", R"raw([experiment]
drift = "sin2pi"
theta0 = 1.0
sigma = 2.0
lower = 0.0
upper = 3.0
x0 = 1.5
n_list = [100, 200]
dt = 0.1
replicates = 10
base_seed = 7
)raw");
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult a = run("montecarlo --config " + cfg + " --out-dir " +
                          (work_dir() / "mc_a").string() + " --keep-replicates");
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(a.exit_code == 0);
  CHECK(elapsed < 10.0);

  const RunResult b = run("montecarlo --config " + cfg + " --out-dir " +
                          (work_dir() / "mc_b").string() + " --keep-replicates");
  CHECK(b.exit_code == 0);

  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  const std::string sa = slurp(work_dir() / "mc_a" / "summary.csv");
  CHECK(sa == slurp(work_dir() / "mc_b" / "summary.csv"));
  CHECK(count_lines(sa) == 1 + 4);  // header + (two kinds x two n)
  CHECK(slurp(work_dir() / "mc_a" / "estimates_sin2pi_two_sided_n100.csv") ==
        slurp(work_dir() / "mc_b" / "estimates_sin2pi_two_sided_n100.csv"));
  CHECK(fs::exists(work_dir() / "mc_a" / "manifest.json"));

  // the worker count never changes the bytes
  const RunResult threaded = run("montecarlo --config " + cfg + " --out-dir " +
                                 (work_dir() / "mc_c").string() + " --threads 3");
  CHECK(threaded.exit_code == 0);
  CHECK(sa == slurp(work_dir() / "mc_c" / "summary.csv"));
}

TEST_CASE("density: flat column at theta 0 and single midpoint row at grid 1") {
  const std::string cfg = write_config("den0.cfg", R"raw([density]
drift = "sqrt"
theta = 0.0
sigma = 2.0
lower = 0.0
upper = 3.0
)raw");
  const RunResult r = run("density --config " + cfg + " --grid 4");
  CHECK(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);  // comment
  std::getline(lines, line);
  CHECK(line == "x,pi");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    const auto comma = line.find(',');
    CHECK(parse_double(line.substr(comma + 1)) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
  CHECK(rows == 4);

  const RunResult single = run("density --config " + cfg + " --grid 1");
  CHECK(single.exit_code == 0);
  CHECK(count_lines(single.out) == 3);
  CHECK(single.out.find("1.5,") != std::string::npos);  // midpoint of [0,3]
}

TEST_CASE("density integrates to one on the emitted grid") {
  const std::string cfg = write_config("den1.cfg", R"raw([density]
drift = "sin2pi"
theta = 1.0
sigma = 2.0
lower = 0.0
upper = 3.0
)raw");
  const RunResult r = run("density --config " + cfg + " --grid 600");
  CHECK(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  std::vector<double> x;
  std::vector<double> pi;
  while (std::getline(lines, line)) {
    const auto comma = line.find(',');
    x.push_back(parse_double(line.substr(0, comma)));
    pi.push_back(parse_double(line.substr(comma + 1)));
  }
  REQUIRE(x.size() == 600);
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    integral += 0.5 * (pi[i] + pi[i + 1]) * (x[i + 1] - x[i]);
  }
  CHECK(std::abs(integral - 1.0) < 1e-4);
}

TEST_CASE("exit code 4 for a non-integrable one-sided density") {
  const std::string cfg = write_config("den2.cfg", R"raw([density]
drift = "sqrt"
theta = 1.0
sigma = 2.0
lower = 0.0
)raw");
  const RunResult r = run("density --config " + cfg + " --grid 10");
  CHECK(r.exit_code == 4);
  CHECK(r.err.find("tail") != std::string::npos);
}

TEST_CASE("density verdict emits both conventions") {
  const std::string cfg = write_config("den3.cfg", R"raw([density]
drift = "linear"
theta = 1.0
sigma = 2.0
lower = 0.0
upper = 3.0
)raw");
  const RunResult r = run("density --config " + cfg + " --grid 8 --both-conventions --seed 5");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("# selected=-1") != std::string::npos);
  CHECK(r.out.find("x,pi_minus,pi_plus") != std::string::npos);
}

TEST_CASE("seed flag overrides the config seed") {
  const std::string cfg = write_config("sim5.cfg", kSimulateCfg);
  const fs::path a = work_dir() / "seed_a.csv";
  const fs::path b = work_dir() / "seed_b.csv";
  REQUIRE(run("simulate --config " + cfg + " --out " + a.string() + " --seed 100")
              .exit_code == 0);
  REQUIRE(run("simulate --config " + cfg + " --out " + b.string()).exit_code == 0);
  const ReflectedPath pa = load_path_csv(a.string());
  const ReflectedPath pb = load_path_csv(b.string());
  CHECK(pa.config.rng_seed == 100);
  CHECK(pb.config.rng_seed == 42);
  CHECK(pa.states != pb.states);
}

TEST_CASE("missing subcommand or config file exits with the config code") {
  CHECK(run("").exit_code == 2);
  CHECK(run("simulate --config /nonexistent.cfg --out " +
            (work_dir() / "x.csv").string())
            .exit_code == 2);
}
