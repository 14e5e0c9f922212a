#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "padic/dynamics.hpp"
#include "padic/oracles.hpp"

namespace fs = std::filesystem;
using namespace padic;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_parameter("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw invalid_parameter("cannot write " + path.string());
  out << text;
}

uint64_t fnv64(const std::string& s) {
  uint64_t x = 1469598103934665603ull;
  for (unsigned char c : s) {
    x ^= c;
    x *= 1099511628211ull;
  }
  return x;
}

// Scoped lock file guarding one cache entry; waits for a concurrent writer.
struct CacheLock {
  fs::path path;
  bool held = false;

  explicit CacheLock(fs::path p) : path(std::move(p)) {
    for (int tries = 0; tries < 600; ++tries) {
      // x-mode exclusive create; whoever wins builds, everyone else waits.
      FILE* f = std::fopen(path.c_str(), "wx");
      if (f) {
        std::fclose(f);
        held = true;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    throw budget_exceeded("cache lock busy: " + path.string());
  }
  ~CacheLock() {
    if (held) {
      std::error_code ec;
      fs::remove(path, ec);
    }
  }
};

fs::path out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("PADIC_SHIFT_OUT")) return env;
  return "out";
}

SequenceSpec load_spec(const std::string& path) { return SequenceSpec::from_json(read_file(path)); }

Tower tower_cached(const SequenceSpec& spec, uint32_t p, uint32_t top, const fs::path& out,
                   bool no_cache) {
  if (no_cache) return build_tower(spec, p, top);
  std::string key = spec.to_json() + "|p=" + std::to_string(p) + "|A=" + std::to_string(top);
  fs::path cache = out / "cache";
  fs::create_directories(cache);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv64(key)));
  fs::path entry = cache / ("tower-" + std::string(hex) + ".json");
  CacheLock lock(cache / ("tower-" + std::string(hex) + ".lock"));
  if (fs::exists(entry)) return Tower::from_json(read_file(entry));
  Tower t = build_tower(spec, p, top);
  write_file(entry, t.to_json());
  return t;
}

void guard_depth(const SequenceSpec& spec, uint32_t top, bool allow_deep) {
  bool algebraic = spec.kind == SequenceSpec::Kind::Algebraic ||
                   spec.kind == SequenceSpec::Kind::Diagonal;
  if (algebraic && top > 8 && !allow_deep)
    throw invalid_parameter("precision above 8 for algebraic specs needs --allow-deep "
                            "(state counts grow with p^alpha)");
}

std::string limit_to_text(const LimitResult& res) {
  std::ostringstream os;
  if (res.is_limit) {
    os << "Limit " << res.value.value() << " (precision " << res.value.precision() << ")";
  } else {
    os << "Cycle period " << res.period << " values";
    for (const auto& v : res.values) os << ' ' << v.value();
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-adic automatic sequence toolkit"};
  app.require_subcommand(1);

  std::string spec_path, tower_path, out_flag, theta_words;
  uint32_t p = 2, alpha = 2, top = 2, depth = 4, width = 8;
  uint64_t k = 1, r = 0, n = 64, rows = 16;
  bool no_cache = false, allow_deep = false, emit_dot = false;

  auto add_out = [&](CLI::App* c) { c->add_option("--out", out_flag, "output directory"); };

  CLI::App* build = app.add_subcommand("build", "build one automaton and write it as JSON");
  build->add_option("--spec", spec_path, "sequence spec file")->required();
  build->add_option("--p", p, "prime")->required();
  build->add_option("--alpha", alpha, "precision")->required();
  build->add_flag("--dot", emit_dot, "also write DOT");
  build->add_flag("--allow-deep", allow_deep, "lift the precision cap for algebraic specs");
  add_out(build);

  CLI::App* tower_cmd = app.add_subcommand("tower", "build a tower and write the bundle");
  tower_cmd->add_option("--spec", spec_path)->required();
  tower_cmd->add_option("--p", p)->required();
  tower_cmd->add_option("--top", top, "top precision")->required();
  tower_cmd->add_flag("--no-cache", no_cache);
  tower_cmd->add_flag("--allow-deep", allow_deep);
  add_out(tower_cmd);

  CLI::App* verify = app.add_subcommand("verify", "check the commuting-diagram identities");
  verify->add_option("--tower", tower_path, "tower bundle file")->required();
  verify->add_option("--n", n, "prefix length");

  CLI::App* tree = app.add_subcommand("tree", "residue tree of a tower");
  tree->add_option("--spec", spec_path)->required();
  tree->add_option("--p", p)->required();
  tree->add_option("--depth", depth)->required();
  tree->add_flag("--no-cache", no_cache);
  tree->add_flag("--allow-deep", allow_deep);
  add_out(tree);

  CLI::App* limit = app.add_subcommand("limit", "p-adic limit of a(k p^m + r)");
  limit->add_option("--spec", spec_path)->required();
  limit->add_option("--p", p)->required();
  limit->add_option("--precision", top)->required();
  limit->add_option("--k", k)->required();
  limit->add_option("--r", r)->required();
  limit->add_flag("--no-cache", no_cache);
  limit->add_flag("--allow-deep", allow_deep);
  add_out(limit);

  CLI::App* cocycle_cmd = app.add_subcommand("cocycle", "Bratteli-Vershik cocycle sequence");
  cocycle_cmd->add_option("--theta", theta_words, "permutation words, e.g. \"01;10\"")->required();
  cocycle_cmd->add_option("--p", p)->required();
  cocycle_cmd->add_option("--n", n, "how many values");
  cocycle_cmd->add_option("--alpha", alpha, "also verify the substitution at this precision");

  CLI::App* render = app.add_subcommand("render", "digit grid of a(k p^m + r) as PBM + JSON");
  render->add_option("--spec", spec_path)->required();
  render->add_option("--p", p)->required();
  render->add_option("--width", width, "digits per row")->required();
  render->add_option("--rows", rows);
  render->add_option("--k", k);
  render->add_option("--r", r);
  render->add_flag("--no-cache", no_cache);
  render->add_flag("--allow-deep", allow_deep);
  add_out(render);

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "dump brute-force reference values");
  oracle_cmd->add_option("--spec", spec_path)->required();
  oracle_cmd->add_option("--p", p)->required();
  oracle_cmd->add_option("--alpha", alpha)->required();
  oracle_cmd->add_option("--n", n);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    fs::path out = out_dir(out_flag);
    if (build->parsed()) {
      SequenceSpec spec = load_spec(spec_path);
      guard_depth(spec, alpha, allow_deep);
      Tower t = build_tower(spec, p, alpha);
      const Dfao& m = t.level(alpha).machine;
      write_file(out / "automaton.json", m.to_json());
      if (emit_dot) write_file(out / "automaton.dot", to_dot(m));
      std::cout << "states " << m.num_states() << "\n";
    } else if (tower_cmd->parsed()) {
      SequenceSpec spec = load_spec(spec_path);
      guard_depth(spec, top, allow_deep);
      Tower t = tower_cached(spec, p, top, out, no_cache);
      write_file(out / "tower.json", t.to_json());
      std::cout << "levels";
      for (const auto& lv : t.levels) std::cout << ' ' << lv.machine.num_states();
      std::cout << "\n";
    } else if (verify->parsed()) {
      Tower t = Tower::from_json(read_file(tower_path));
      VerifyReport rep = verify_tower(t, n);
      for (const auto& item : rep.items)
        std::cout << (item.pass ? "pass " : "FAIL ") << item.name
                  << (item.pass ? "" : " (" + item.witness + ")") << "\n";
      if (!rep.all_pass()) return 1;
    } else if (tree->parsed()) {
      SequenceSpec spec = load_spec(spec_path);
      guard_depth(spec, depth, allow_deep);
      Tower t = tower_cached(spec, p, depth, out, no_cache);
      ResidueTree rt = residue_tree(t);
      write_file(out / "tree.json", residue_tree_to_json(rt));
      write_file(out / "tree.dot", residue_tree_to_dot(rt));
      std::cout << "level sizes";
      for (const auto& lv : rt.levels) std::cout << ' ' << lv.size();
      std::cout << "\n";
    } else if (limit->parsed()) {
      SequenceSpec spec = load_spec(spec_path);
      guard_depth(spec, top, allow_deep);
      Tower t = tower_cached(spec, p, top, out, no_cache);
      std::cout << limit_to_text(padic_limit(t, k, r)) << "\n";
    } else if (cocycle_cmd->parsed()) {
      OrderedDiagram d = OrderedDiagram::parse(p, theta_words);
      std::vector<uint64_t> s = cocycle_sequence(d, n);
      for (size_t i = 0; i < s.size(); ++i) std::cout << s[i] << (i + 1 < s.size() ? ' ' : '\n');
      if (cocycle_cmd->count("--alpha") > 0) {
        CocycleReport rep = verify_cocycle(d, alpha, n);
        std::cout << (rep.pass ? "verify pass\n" : "verify FAIL at " + std::to_string(rep.index) +
                                                       ": " + rep.detail + "\n");
        if (!rep.pass) return 1;
      }
    } else if (render->parsed()) {
      SequenceSpec spec = load_spec(spec_path);
      guard_depth(spec, width, allow_deep);
      Tower t = tower_cached(spec, p, width, out, no_cache);
      DigitGrid g = digit_grid(t, k, r, rows, width);
      write_file(out / "grid.pbm", g.to_pbm());
      write_file(out / "grid.json", g.to_json());
      std::cout << "rows " << g.rows.size() << " width " << g.width << "\n";
    } else if (oracle_cmd->parsed()) {
      SequenceSpec spec = load_spec(spec_path);
      std::vector<uint64_t> s = oracle_sequence(spec, p, alpha, n);
      for (size_t i = 0; i < s.size(); ++i) std::cout << s[i] << (i + 1 < s.size() ? ' ' : '\n');
    }
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const invalid_parameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
