#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "gsamp/series.hpp"
#include "gsamp/text_io.hpp"

namespace fs = std::filesystem;

namespace {

struct cli_env {
  fs::path dir;

  cli_env() {
    static int counter = 0;
    dir = fs::temp_directory_path() /
          ("gsamp_cli_test_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter++));
    fs::create_directories(dir);
  }
  ~cli_env() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }

  int run(const std::string& args) const {
    const std::string cmd = std::string(GSAMP_CLI_PATH) + " " + args + " > " +
                            (dir / "stdout.txt").string() + " 2> " +
                            (dir / "stderr.txt").string();
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    REQUIRE(WIFEXITED(rc));
    return WEXITSTATUS(rc);
  }

  void write(const std::string& name, const std::string& content) const {
    std::ofstream f(dir / name);
    f << content;
  }

  std::string slurp(const std::string& name) const {
    std::ifstream f(dir / name);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("explain exits cleanly without running anything") {
  cli_env env;
  CHECK(env.run("frame-trend --explain") == 0);
  CHECK(!env.slurp("stdout.txt").empty());
  CHECK(env.run("gabor-sweep --explain") == 0);
}

TEST_CASE("density outputs are byte-identical across reruns") {
  cli_env env;
  env.write("cfg.txt",
            "[set]\n"
            "descriptor=prog 0.9 0\n"
            "[density]\n"
            "R=50,100\n");
  fs::create_directories(env.dir / "r1");
  fs::create_directories(env.dir / "r2");
  const std::string base = "density --config " + (env.dir / "cfg.txt").string();
  CHECK(env.run(base + " --out " + (env.dir / "r1").string()) == 0);
  CHECK(env.run(base + " --out " + (env.dir / "r2").string()) == 0);
  const std::string a = env.slurp("r1/density.csv");
  const std::string b = env.slurp("r2/density.csv");
  CHECK(!a.empty());
  CHECK(a == b);
  CHECK(a.find("# command=density seed=0 threads=1") != std::string::npos);
  CHECK(a.find(gsamp::format_double(1.0 / 0.9)) != std::string::npos);
}

TEST_CASE("config mistakes exit with code 2") {
  cli_env env;
  env.write("unknown.txt",
            "[set]\n"
            "descriptor=prog 1 0\n"
            "typo_key=5\n"
            "[density]\n"
            "R=50\n");
  CHECK(env.run("density --config " + (env.dir / "unknown.txt").string() +
                " --out " + env.dir.string()) == 2);
  CHECK(env.slurp("stderr.txt").find("unknown key") != std::string::npos);

  env.write("missing.txt", "[density]\nR=50\n");
  CHECK(env.run("density --config " + (env.dir / "missing.txt").string() +
                " --out " + env.dir.string()) == 2);

  env.write("badnum.txt", "[set]\ndescriptor=prog abc\n[density]\nR=50\n");
  CHECK(env.run("density --config " + (env.dir / "badnum.txt").string() +
                " --out " + env.dir.string()) == 2);

  // No config at all.
  CHECK(env.run("density") == 2);
  // Unknown flag is a usage error.
  CHECK(env.run("density --nonsense") == 2);
  // Help is not an error.
  CHECK(env.run("--help") == 0);
}

TEST_CASE("module failures exit with code 1") {
  cli_env env;
  env.write("cfg.txt",
            "[annihilator]\n"
            "descriptor=prog 1 0\n"  // density 1: no room for the product
            "a=1\n");
  CHECK(env.run("annihilator --config " + (env.dir / "cfg.txt").string() +
                " --out " + env.dir.string()) == 1);
  CHECK(!env.slurp("stderr.txt").empty());
}

TEST_CASE("theta run writes a loadable series") {
  cli_env env;
  env.write("cfg.txt", "[theta]\na=3.141592653589793\n");
  CHECK(env.run("theta --config " + (env.dir / "cfg.txt").string() +
                " --out " + env.dir.string()) == 0);
  std::ifstream s(env.dir / "theta_series.txt");
  std::string header;
  std::getline(s, header);  // reproducibility comment
  const gsamp::gauss_series th = gsamp::read_series(s);
  CHECK(std::abs(gsamp::eval(th, 0.5)) < 1e-10);
  CHECK(std::abs(gsamp::eval(th, 0.0)) > 0.5);
  const std::string rep = env.slurp("theta_report.txt");
  CHECK(rep.find("half_integer_residual=") != std::string::npos);
}

TEST_CASE("frame trend emits one row per window") {
  cli_env env;
  env.write("cfg.txt",
            "[space]\na=3.141592653589793\n"
            "[trend]\nmode=set1d\nwindows=4,6,8\nmargin=1\n"
            "[set]\ndescriptor=prog 1 0\n");
  CHECK(env.run("frame-trend --config " + (env.dir / "cfg.txt").string() +
                " --out " + env.dir.string()) == 0);
  const std::string csv = env.slurp("trend.csv");
  CHECK(csv.find("N,A_est,B_est,lower_floor,ratio_prev\n") != std::string::npos);
  int rows = 0;
  std::istringstream ss(csv);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line[0] != '#' && line[0] != 'N') ++rows;
  }
  CHECK(rows == 3);
}

TEST_CASE("gabor sweep runs a single window") {
  cli_env env;
  env.write("cfg.txt",
            "[gabor]\nmode=abcd\np=1\nq=1\nc=0.9\nd=0.9\n"
            "N=6\ngrid_step=0.25\nmargin=2\n");
  CHECK(env.run("gabor-sweep --config " + (env.dir / "cfg.txt").string() +
                " --out " + env.dir.string()) == 0);
  const std::string csv = env.slurp("gabor_sweep.csv");
  CHECK(csv.find("u,v,A_est\n") != std::string::npos);
  CHECK(csv.find("\nmin,") != std::string::npos);
}

TEST_CASE("descriptor grammar covers nesting and files") {
  cli_env env;
  env.write("pts.txt", "0.4 -1.25\n2.5\n");
  env.write("cfg.txt",
            "[set]\n"
            "descriptor=puncture { union { prog 1 0 ; prog 1 0.5 } } 0 0.5\n"
            "[density]\nR=40\n");
  CHECK(env.run("density --config " + (env.dir / "cfg.txt").string() +
                " --out " + env.dir.string()) == 0);

  env.write("cfg2.txt",
            "[set]\ndescriptor=explicit file=pts.txt\n[density]\nR=40\n");
  CHECK(env.run("density --config " + (env.dir / "cfg2.txt").string() +
                " --out " + env.dir.string()) == 0);

  env.write("cfg3.txt",
            "[set]\ndescriptor=explicit file=no_such_file.txt\n"
            "[density]\nR=40\n");
  CHECK(env.run("density --config " + (env.dir / "cfg3.txt").string() +
                " --out " + env.dir.string()) == 2);
}

TEST_CASE("reconstruct recovers planted coefficients") {
  cli_env env;
  // Plant a real-coefficient function, sample it on integers, reconstruct.
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  gsamp::coeff_grid g(-3, 3);
  for (int n = -3; n <= 3; ++n) g.at(n) = u(rng);
  const gsamp::gauss_series f =
      gsamp::make_series(M_PI, 1.0, g);
  std::ostringstream samples, values;
  for (int x = -8; x <= 8; ++x) {
    samples << x << "\n";
    values << gsamp::format_double(gsamp::eval(f, double(x)).real()) << "\n";
  }
  env.write("samples.txt", samples.str());
  env.write("values.txt", values.str());
  env.write("cfg.txt",
            "[space]\na=3.141592653589793\n"
            "[reconstruct]\ndim=1\ncoeff_lo=-3\ncoeff_hi=3\n"
            "samples=samples.txt\nvalues=values.txt\n");
  CHECK(env.run("reconstruct --config " + (env.dir / "cfg.txt").string() +
                " --out " + env.dir.string()) == 0);
  const std::string csv = env.slurp("coefficients.csv");
  std::istringstream ss(csv);
  std::string line;
  int matched = 0;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'n') continue;
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    const int n = std::stoi(line.substr(0, comma));
    const double c = gsamp::parse_double(line.substr(comma + 1));
    CHECK(std::abs(c - g.at(n).real()) < 1e-6);
    ++matched;
  }
  CHECK(matched == 7);
}

TEST_CASE("experiments manifest lists ten entries") {
  cli_env env;
  CHECK(env.run("experiments --out " + env.dir.string()) == 0);
  const std::string m = env.slurp("experiments.txt");
  for (int i = 1; i <= 10; ++i) {
    const std::string tag = std::to_string(i) + " ";
    const bool found = m.find("\n" + tag) != std::string::npos ||
                       m.rfind(tag, 0) == 0;
    CHECK(found);
  }
}

}  // TEST_SUITE
