#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(LSUSS_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  while (fgets(buf.data(), buf.size(), p)) r.output += buf.data();
  const int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int c = 0;
    path = fs::temp_directory_path() / ("lsuss_cli_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(c++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("synth is deterministic and writes labels") {
  TempDir td;
  const std::string flags =
      " --regimes 3 --len-lo 80 --len-hi 120 --out ";
  auto a = run_cli("--seed 7 synth" + flags + td.file("a.csv"));
  REQUIRE(a.exit_code == 0);
  CHECK(a.output.find("config:") != std::string::npos);
  auto b = run_cli("--seed 7 synth" + flags + td.file("b.csv"));
  REQUIRE(b.exit_code == 0);
  CHECK(read_file(td.file("a.csv")) == read_file(td.file("b.csv")));
  CHECK(read_file(td.file("a.cps")) == read_file(td.file("b.cps")));
  CHECK(!read_file(td.file("a.cps")).empty());
}

TEST_CASE("train writes reproducible model files") {
  TempDir td;
  REQUIRE(run_cli("--seed 3 synth --regimes 2 --len-lo 150 --len-hi 150 --out " +
                  td.file("d.csv"))
              .exit_code == 0);
  const std::string flags = " train --data " + td.file("d.csv") +
                            " --arch fc --nw 16 --epochs 3 --out ";
  const auto a = run_cli("--seed 7" + flags + td.file("m1.lsae"));
  REQUIRE(a.exit_code == 0);
  CHECK(a.output.find("val_loss:") != std::string::npos);
  const auto b = run_cli("--seed 7" + flags + td.file("m2.lsae"));
  REQUIRE(b.exit_code == 0);
  CHECK(read_file(td.file("m1.lsae")) == read_file(td.file("m2.lsae")));
}

TEST_CASE("conv training rejects a window length that is not a multiple of 4") {
  TempDir td;
  REQUIRE(run_cli("--seed 3 synth --regimes 2 --len-lo 150 --len-hi 150 --out " +
                  td.file("d.csv"))
              .exit_code == 0);
  const auto r = run_cli("train --data " + td.file("d.csv") +
                         " --arch conv --nw 50 --out " + td.file("m.lsae"));
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("multiple of 4") != std::string::npos);
}

TEST_CASE("floss without tc is a config error") {
  TempDir td;
  REQUIRE(run_cli("--seed 3 synth --regimes 2 --len-lo 150 --len-hi 150 --out " +
                  td.file("d.csv"))
              .exit_code == 0);
  const auto r = run_cli("segment --data " + td.file("d.csv") +
                         " --algorithm floss --nw 16 --k 1");
  CHECK(r.exit_code == 2);
}

TEST_CASE("missing data files exit with the data error code") {
  const auto r = run_cli("segment --data /nonexistent/x.csv --algorithm fluss --nw 16 --k 1");
  CHECK(r.exit_code == 3);
}

TEST_CASE("unknown flags are rejected") {
  const auto r = run_cli("synth --frobnicate 3 --out /tmp/x.csv");
  CHECK(r.exit_code == 2);
}

TEST_CASE("segment runs are reproducible and write both outputs") {
  TempDir td;
  REQUIRE(run_cli("--seed 5 synth --regimes 2 --len-lo 250 --len-hi 250 --out " +
                  td.file("d.csv"))
              .exit_code == 0);
  const std::string flags = " segment --data " + td.file("d.csv") +
                            " --algorithm fluss --nw 20 --k 1 --out-cps ";
  const auto a =
      run_cli("--seed 5" + flags + td.file("p1.txt") + " --out-curve " + td.file("c1.csv"));
  REQUIRE(a.exit_code == 0);
  const auto b =
      run_cli("--seed 5" + flags + td.file("p2.txt") + " --out-curve " + td.file("c2.csv"));
  REQUIRE(b.exit_code == 0);
  CHECK(read_file(td.file("p1.txt")) == read_file(td.file("p2.txt")));
  CHECK(read_file(td.file("c1.csv")) == read_file(td.file("c2.csv")));
  CHECK(!read_file(td.file("p1.txt")).empty());
}

TEST_CASE("eval scores a perfect prediction as zero") {
  TempDir td;
  std::ofstream(td.file("gt.txt")) << "100\n200\n";
  std::ofstream(td.file("pred.txt")) << "100\n200\n";
  const auto r = run_cli("eval --pred " + td.file("pred.txt") + " --gt " + td.file("gt.txt") +
                         " --n 1000");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("\"value\":0.0") != std::string::npos);
}

TEST_CASE("gridsearch writes a ranked results file") {
  TempDir td;
  REQUIRE(run_cli("--seed 5 synth --regimes 2 --len-lo 200 --len-hi 200 --out " +
                  td.file("d.csv"))
              .exit_code == 0);
  const auto r = run_cli("--seed 5 gridsearch --data " + td.file("d.csv") +
                         " --algorithm fluss --nw-list 16,20 --scaler-list none,standard"
                         " --out " + td.file("res.json"));
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("evaluated: 4") != std::string::npos);
  const auto body = read_file(td.file("res.json"));
  CHECK(!body.empty());
  CHECK(body.find("score_regimes") != std::string::npos);
}
