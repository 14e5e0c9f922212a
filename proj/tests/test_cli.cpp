#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <unistd.h>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const char* kBin = PADICSHIFT_BIN;

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("padicshift-test-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }
};

int run(const std::string& args, const fs::path& capture = {}) {
  std::string cmd = std::string(kBin) + " " + args;
  if (!capture.empty()) cmd += " > " + capture.string() + " 2>&1";
  else cmd += " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path write_catalan_spec(const Sandbox& sb) {
  fs::path p = sb.dir / "catalan.json";
  std::ofstream(p) << R"({"kind":"algebraic","annihilator":"x*y^2 - y + 1","oracle":"catalan"})";
  return p;
}

}  // namespace

TEST_CASE("build writes the automaton and reports its size") {
  Sandbox sb;
  fs::path spec = write_catalan_spec(sb);
  fs::path log = sb.dir / "log";
  int rc = run("build --spec " + spec.string() + " --p 2 --alpha 2 --dot --out " +
                   (sb.dir / "out").string(),
               log);
  CHECK(rc == 0);
  CHECK(slurp(log) == "states 6\n");
  CHECK(fs::exists(sb.dir / "out" / "automaton.json"));
  CHECK(slurp(sb.dir / "out" / "automaton.dot").find("digraph") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  Sandbox sb;
  CHECK(run("bogus-subcommand") == 2);
  CHECK(run("build --p 2 --alpha 2") == 2);  // missing --spec
  fs::path bad = sb.dir / "bad.json";
  std::ofstream(bad) << R"({"kind":"algebraic","annihilator":"x +"})";
  CHECK(run("build --spec " + bad.string() + " --p 2 --alpha 1 --out " +
            (sb.dir / "out").string()) == 2);
  // Depth guard on algebraic specs.
  fs::path spec = write_catalan_spec(sb);
  CHECK(run("tower --spec " + spec.string() + " --p 2 --top 9 --out " +
            (sb.dir / "out").string()) == 2);
}

TEST_CASE("tower, verify, tree round trip through files") {
  Sandbox sb;
  fs::path spec = write_catalan_spec(sb);
  fs::path out = sb.dir / "out";
  fs::path log = sb.dir / "log";
  CHECK(run("tower --spec " + spec.string() + " --p 2 --top 4 --out " + out.string(), log) == 0);
  CHECK(slurp(log) == "levels 3 6 13 28\n");
  CHECK(run("verify --tower " + (out / "tower.json").string() + " --n 2048", log) == 0);
  std::string verdict = slurp(log);
  CHECK(verdict.find("FAIL") == std::string::npos);
  CHECK(verdict.find("pass") != std::string::npos);
  CHECK(run("tree --spec " + spec.string() + " --p 2 --depth 4 --out " + out.string(), log) == 0);
  CHECK(slurp(log) == "level sizes 1 2 3 6 11\n");
  CHECK(fs::exists(out / "tree.dot"));
}

TEST_CASE("tower cache returns byte-identical artifacts") {
  Sandbox sb;
  fs::path spec = write_catalan_spec(sb);
  fs::path out = sb.dir / "out";
  CHECK(run("tower --spec " + spec.string() + " --p 2 --top 3 --out " + out.string()) == 0);
  std::string first = slurp(out / "tower.json");
  CHECK(fs::exists(out / "cache"));
  bool entry_seen = false;
  for (const auto& e : fs::directory_iterator(out / "cache"))
    if (e.path().extension() == ".json") entry_seen = true;
  CHECK(entry_seen);
  CHECK(run("tower --spec " + spec.string() + " --p 2 --top 3 --out " + out.string()) == 0);
  CHECK(slurp(out / "tower.json") == first);
  // --no-cache rebuilds and still agrees.
  CHECK(run("tower --spec " + spec.string() + " --p 2 --top 3 --no-cache --out " +
            out.string()) == 0);
  CHECK(slurp(out / "tower.json") == first);
}

TEST_CASE("limit prints the p-adic value") {
  Sandbox sb;
  fs::path spec = write_catalan_spec(sb);
  fs::path log = sb.dir / "log";
  CHECK(run("limit --spec " + spec.string() + " --p 2 --precision 6 --k 1 --r 0 --out " +
                (sb.dir / "out").string(),
            log) == 0);
  std::string text = slurp(log);
  CHECK(text.find("Limit") == 0);
  CHECK(text.find("precision 6") != std::string::npos);
}

TEST_CASE("cocycle prints values and verifies") {
  Sandbox sb;
  fs::path log = sb.dir / "log";
  CHECK(run("cocycle --theta \"01;10\" --p 2 --n 8 --alpha 6", log) == 0);
  std::string text = slurp(log);
  CHECK(text.find("0 1 3 2 7 6 4 5") == 0);
  CHECK(text.find("verify pass") != std::string::npos);
  CHECK(run("cocycle --theta \"10;01\" --p 2 --n 8") == 2);
}

TEST_CASE("render emits a PBM grid") {
  Sandbox sb;
  fs::path spec = write_catalan_spec(sb);
  fs::path out = sb.dir / "out";
  CHECK(run("render --spec " + spec.string() + " --p 2 --width 6 --rows 12 --k 1 --r 0 --out " +
            out.string()) == 0);
  std::string pbm = slurp(out / "grid.pbm");
  CHECK(pbm.rfind("P1\n6 12\n", 0) == 0);
  CHECK(fs::exists(out / "grid.json"));
}

TEST_CASE("oracle dumps reference values") {
  Sandbox sb;
  fs::path spec = write_catalan_spec(sb);
  fs::path log = sb.dir / "log";
  CHECK(run("oracle --spec " + spec.string() + " --p 2 --alpha 2 --n 8", log) == 0);
  CHECK(slurp(log) == "1 1 2 1 2 2 0 1\n");
}
