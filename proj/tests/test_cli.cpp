#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

// Runs the CLI through the shell with stdout and stderr merged.
Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" RZSPEC_CLI_PATH "' " + args + " 2>&1";
  Run r{-1, {}};
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / ("rzspec_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

}  // namespace

TEST_CASE("help and usage errors") {
  const auto top = run("--help");
  CHECK(top.code == 0);
  CHECK(top.out.find("verify-residual") != std::string::npos);
  for (const char* cmd : {"zeros", "potential", "wave", "nodal", "verify-identities", "verify-residual", "asymptotics"}) {
    CAPTURE(cmd);
    const auto r = run(std::string(cmd) + " --help");
    CHECK(r.code == 0);
    CHECK(r.out.find("--") != std::string::npos);
  }
  CHECK(run("").code == 2);
  CHECK(run("zeros --bogus").code == 2);
  CHECK(run("zeros --count 0").code == 2);
  CHECK(run("zeros --count 101").code == 2);
  CHECK(run("wave").code == 2);  // --out is required
  CHECK(run("wave --window 1,0,0,1 --out " + (scratch() / "w.csv").string()).code == 2);
  CHECK(run("wave --window a,b --out " + (scratch() / "w.csv").string()).code == 2);
  CHECK(run("verify-identities").code == 2);
  CHECK(run("verify-identities --s 2 -n 1").code == 2);
}

TEST_CASE("zeros") {
  const auto r = run("zeros --count 3");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("14.134725141734", 0) == 0);
  CHECK(r.out.find("21.022039638771") != std::string::npos);

  const fs::path out = scratch() / "zeros.txt";
  CHECK(run("zeros --count 2 --out " + out.string()).code == 0);
  const std::string text = slurp(out);
  CHECK(text.find("25.01") == std::string::npos);

  // The written file feeds back into the grid commands.
  const fs::path csv = scratch() / "from_file.csv";
  CHECK(run("wave -n 2 --zeros-file " + out.string() + " --nx 5 --ny 5 --out " + csv.string()).code == 0);
  CHECK(run("wave -n 3 --zeros-file " + out.string() + " --nx 5 --ny 5 --out " + csv.string()).code == 2);

  const fs::path bad = scratch() / "bad.txt";
  std::ofstream(bad) << "14.1\nnope\n";
  CHECK(run("wave --zeros-file " + bad.string() + " --nx 5 --ny 5 --out " + csv.string()).code == 2);
  CHECK(run("wave --zeros-file " + (scratch() / "absent.txt").string() + " --out " + csv.string()).code == 2);
}

TEST_CASE("verify-identities exit codes") {
  CHECK(run("verify-identities --s 2").code == 0);
  CHECK(run("verify-identities --s 1.5+0.7i").code == 0);
  CHECK(run("verify-identities -n 1").code == 0);
  CHECK(run("verify-identities --s 2 --tol 1e-30").code == 1);
  CHECK(run("verify-identities --s 0.5").code == 3);
  CHECK(run("verify-identities --s 1").code == 3);
}

TEST_CASE("grid outputs") {
  const fs::path a = scratch() / "a.csv";
  const fs::path b = scratch() / "b.csv";
  const fs::path img = scratch() / "a.ppm";
  const std::string args = "wave -n 1 --window -0.5,1.5,-1,1 --nx 21 --ny 17 --ppm " + img.string();
  CHECK(run(args + " --out " + a.string(), "RZSPEC_THREADS=1").code == 0);
  CHECK(run(args + " --out " + b.string(), "RZSPEC_THREADS=3").code == 0);
  const std::string csv = slurp(a);
  CHECK(csv == slurp(b));
  CHECK(csv.rfind("# zero_index=1 rho=0.5+14.134725141734", 0) == 0);
  std::size_t rows = 0;
  for (char c : csv) rows += c == '\n';
  CHECK(rows == 2 + 21 * 17);
  CHECK(slurp(img).rfind("P6\n21 17\n255\n", 0) == 0);

  CHECK(run(args + " --out " + a.string(), "RZSPEC_THREADS=abc").code == 2);
  CHECK(run(args + " --out " + a.string(), "RZSPEC_THREADS=0").code == 2);

  const fs::path v = scratch() / "v.csv";
  CHECK(run("potential --nx 11 --ny 9 --out " + v.string()).code == 0);
  CHECK(slurp(v).find("x,y,re,im,abs2") != std::string::npos);
  CHECK(run("wave --nx 5 --ny 5 --out " + (scratch() / "missing" / "x.csv").string()).code == 3);
}

TEST_CASE("nodal, residual and asymptotics commands") {
  const fs::path json = scratch() / "nodal.json";
  const auto r = run("nodal -n 1 --window -1,2,-1.5,1.5 --nx 121 --ny 121 --out " + json.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("scenario 1") != std::string::npos);
  CHECK(slurp(json).find("\"scenario\": \"scenario 1\"") != std::string::npos);

  CHECK(run("verify-residual -n 1 --window 0.3,0.5,0.6,0.8").code == 0);
  CHECK(run("verify-residual -n 1 --window 0.3,0.5,0.6,0.8 --tol 1e-9").code == 1);
  CHECK(run("asymptotics -n 1").code == 0);
  CHECK(run("asymptotics -n 1 --r-min 1").code == 3);
}
