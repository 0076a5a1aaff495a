#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SFORGE_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe)) r.out += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("sforge_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string arg() const { return " --out-dir " + path.string(); }
  std::string read(const char* name) const {
    std::ifstream in(path / name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

std::string config(const char* name) { return (fs::path(SFORGE_SOURCE_DIR) / "configs" / name).string(); }

} // namespace

TEST_SUITE("cli") {
  TEST_CASE("construct writes poly.json and poly.txt") {
    TempDir dir("construct");
    const Run r = run("construct --s 4 --ell 3 --square --k 1" + dir.arg());
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(dir.read("poly.json"));
    CHECK(j.at("metadata").at("k") == 1);
    CHECK(j.at("metadata").at("s") == 4);
    CHECK(dir.read("poly.txt").rfind("(1 + 0i) u^4", 0) == 0);
  }

  TEST_CASE("certify lemniscate(5,3,1) at b = 1/4") {
    TempDir dir("certify");
    const Run r = run("certify --s 5 --ell 3 --a 1 --b 0.25 --check arg-crit" + dir.arg());
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(dir.read("certificates.json"));
    REQUIRE(j.size() == 1);
    CHECK(j[0].at("pass") == true);
  }

  TEST_CASE("validation failures exit 2") {
    TempDir dir("invalid");
    CHECK(run("certify --s 5 --ell 3 --b 0 --check arg-crit" + dir.arg()).code == 2);
    const Run tiny = run("construct --s 2 --ell 1 --square --a 1e-30" + dir.arg());
    CHECK(tiny.code == 2);
    CHECK(tiny.out.find("a,b must exceed 1e-12") != std::string::npos);
    CHECK(run("construct" + dir.arg()).code == 2);
    CHECK(run("frobnicate").code == 2);
  }

  TEST_CASE("mixed residues exit 2 naming both classes") {
    TempDir dir("mixed");
    const Run r = run("construct --config " + config("mixed_parity.json") + dir.arg());
    CHECK(r.code == 2);
    CHECK(r.out.find("frequency 1") != std::string::npos);
    CHECK(r.out.find("frequency 2") != std::string::npos);
  }

  TEST_CASE("negative control exits 3 with a fail record") {
    TempDir dir("broken");
    const Run r = run("certify --config " + config("hopf_broken.json") + dir.arg());
    CHECK(r.code == 3);
  }

  TEST_CASE("Hopf job certifies") {
    TempDir dir("hopf");
    const Run r = run("certify --config " + config("hopf.json") + dir.arg());
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(dir.read("certificates.json"));
    for (const auto& c : j) CHECK(c.at("pass") == true);
  }

  TEST_CASE("unwritable output directory exits 1") {
    const Run r = run("construct --s 2 --ell 1 --square --out-dir /proc/sforge_no_such_dir");
    CHECK(r.code == 1);
  }

  TEST_CASE("scan-b") {
    TempDir dir("scan");
    const Run r = run("scan-b --s 5 --ell 3 --b-lo 0.015625 --b-hi 1 --b-steps 13" + dir.arg());
    CHECK(r.code == 0);
    CHECK(r.out.find("largest passing b: 0.25") != std::string::npos);
    CHECK(dir.read("scan.csv").find("\n0.25,") != std::string::npos);
    CHECK(dir.read("scan.csv").find("0.25,0.28") != std::string::npos);

    TempDir one("scan1");
    CHECK(run("scan-b --s 1 --ell 1 --b-steps 3" + one.arg()).code == 0);
    const std::string csv = one.read("scan.csv");
    CHECK(csv.find("false") == std::string::npos);
    CHECK(csv.find("inf") != std::string::npos);
  }

  TEST_CASE("sample-curve") {
    TempDir dir("curve");
    const Run r = run("sample-curve --s 1 --ell 1 --radii 1" + dir.arg());
    CHECK(r.code == 0);
    const std::string csv = dir.read("curves.csv");
    CHECK(csv.rfind("rho,strand,t,re_u,im_u,r\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1025);
  }

  TEST_CASE("word predicates") {
    const Run hom = run("word --strands 3 --word \"s1 s2^-1\"");
    CHECK(hom.code == 0);
    CHECK(hom.out.find("strictly_homogeneous: true") != std::string::npos);
    CHECK(run("word --strands 2 --word \"s1 s1\"").out.find("symmetry: square") != std::string::npos);
    const Run lem = run("word --s 2 --ell 1 --r 3");
    CHECK(lem.code == 0);
    CHECK((lem.out.find("word: s1 s1 s1") != std::string::npos ||
           lem.out.find("word: s1^-1 s1^-1 s1^-1") != std::string::npos));
  }

  TEST_CASE("SF_THREADS does not change results") {
    TempDir a("thr1"), b("thr4");
    CHECK(run("certify --s 5 --ell 3 --b 0.25 --check arg-crit" + a.arg()).code == 0);
    const std::string cmd = "env SF_THREADS=1 " + std::string(SFORGE_CLI_PATH) +
                            " certify --s 5 --ell 3 --b 0.25 --check arg-crit" + b.arg() + " > /dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(a.read("certificates.json") == b.read("certificates.json"));
  }
}
