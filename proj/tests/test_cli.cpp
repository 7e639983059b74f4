#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cutofflab/cli.hpp"
#include "cutofflab/io.hpp"

using namespace cutofflab;

namespace {

namespace fs = std::filesystem;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("cutofflab_cli_" + std::to_string(counter_++))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& content) const {
    std::ofstream(path_ / name) << content;
    return (path_ / name).string();
  }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

const std::string kLazyPair = "n=2\n0 0 0.5\n0 1 0.5\n1 0 0.5\n1 1 0.5\n";
const std::string kFlip = "n=2\n0 1 1\n1 0 1\n";

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("validate reports chain metrics") {
  TempDir dir;
  const auto r = run({"validate", dir.file("l2.txt", kLazyPair), "--csv"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "valid,n,nonzeros,delta,diameter,symmetric_support,irreducible\ntrue,2,4,0.5,1,true,true\n");
}

TEST_CASE("input errors exit 1 and name the problem") {
  TempDir dir;
  const auto asym = run({"validate", dir.file("a.txt", "n=2\n0 1 1\n1 1 1\n")});
  CHECK(asym.code == kExitInput);
  CHECK(asym.err.find("K(0,1)") != std::string::npos);
  CHECK(asym.err.find("K(1,0)") != std::string::npos);

  const auto bad = run({"verify", dir.file("b.txt", "n=2\n0 0 0.5\n0 1 x\n"), "--csv"});
  CHECK(bad.code == kExitInput);
  CHECK(bad.err.find("line 3") != std::string::npos);
  CHECK(bad.out.empty());

  const auto rows = run({"validate", dir.file("c.txt", "n=2\n0 0 0.4\n0 1 0.5\n1 0 1\n")});
  CHECK(rows.code == kExitInput);
  CHECK(rows.err.find("RowSumError") != std::string::npos);

  CHECK(run({"validate", dir / "missing.txt"}).code == kExitInput);
  CHECK(run({"mixing-time", dir.file("l.txt", kLazyPair), "--eps", "1.5"}).code == kExitInput);
}

TEST_CASE("JSON mode also reports errors on stdout") {
  TempDir dir;
  const auto r = run({"validate", dir.file("b.txt", "n=2\n0 0 q\n"), "--json"});
  CHECK(r.code == kExitInput);
  CHECK(r.out.find("\"error\":\"ParseError\"") != std::string::npos);
}

TEST_CASE("mixing-time on the lazy two-state chain") {
  TempDir dir;
  const auto r = run({"mixing-time", dir.file("l2.txt", kLazyPair), "--eps", "0.25,0.75", "--csv"});
  CHECK(r.code == kExitOk);
  const Table t = parse_table(r.out, OutputFormat::Csv);
  REQUIRE(t.rows().size() == 2);
  CHECK(std::get<double>(t.rows()[0][1]) == doctest::Approx(std::log(2.0)).epsilon(1e-8));
  CHECK(std::get<double>(t.rows()[1][1]) == 0.0);
}

TEST_CASE("profile on the lazy two-state chain") {
  TempDir dir;
  const auto r = run({"profile", dir.file("l2.txt", kLazyPair), "--times", "0,0.693147180559945", "--json"});
  CHECK(r.code == kExitOk);
  const Table t = parse_table(r.out, OutputFormat::JsonLines);
  REQUIRE(t.rows().size() == 2);
  CHECK(t.columns()[1] == "dtv");
  CHECK(std::get<double>(t.rows()[0][1]) == 0.5);
  CHECK(std::get<double>(t.rows()[1][1]) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(std::get<double>(t.rows()[1][2]) == doctest::Approx(0.1308120359).epsilon(1e-8));
}

TEST_CASE("profile auto grid and plot data") {
  TempDir dir;
  const auto r = run({"profile", "--family", "cycle", "--size", "12", "--csv", "--plot-data", dir / "plots"});
  CHECK(r.code == kExitOk);
  CHECK(parse_table(r.out, OutputFormat::Csv).rows().size() == 64);
  for (const char* name : {"dtv.csv", "dkl.csv", "vkl.csv"}) {
    const auto text = slurp(dir / (std::string("plots/") + name));
    CHECK(parse_table(text, OutputFormat::Csv).rows().size() == 64);
  }
}

TEST_CASE("verify exit codes") {
  TempDir dir;
  const auto lazy = run({"verify", dir.file("l2.txt", kLazyPair), "--csv"});
  CHECK(lazy.code == kExitOk);
  CHECK(lazy.err.find("failed=0") != std::string::npos);
  const Table t = parse_table(lazy.out, OutputFormat::Csv);
  CHECK(t.columns().front() == "bound_id");
  CHECK(std::get<std::string>(t.rows().front()[0]) == "window_width");

  const auto flip = run({"verify", dir.file("f.txt", kFlip), "--csv"});
  CHECK(flip.code == kExitOk);
  CHECK(flip.out.find("p_control") != std::string::npos);
  CHECK(flip.out.find("delta_above_half") != std::string::npos);
  CHECK(run({"verify", dir / "f.txt", "--strict"}).code == kExitCheck);
}

TEST_CASE("verify on closed-form families has no failures") {
  for (const char* family : {"complete", "cycle", "hypercube"}) {
    const auto r = run({"verify", "--family", family, "--size", "4", "--csv"});
    INFO(family, r.err);
    CHECK(r.code == kExitOk);
    CHECK(r.err.find("failed=0") != std::string::npos);
  }
}

TEST_CASE("sweep prints members and a verdict") {
  const auto r = run({"sweep", "--family", "cycle", "--sizes", "8,16,32,64", "--json"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("\"verdict\":\"no-cutoff-consistent\"") != std::string::npos);
  const auto two = run({"sweep", "--family", "cycle", "--sizes", "8,16", "--csv"});
  CHECK(two.code == kExitOk);
  CHECK(two.err.find("no verdict") != std::string::npos);
}

TEST_CASE("sweep output is identical across thread counts") {
  const std::vector<std::string> base{"sweep", "--family", "random-regular", "--seed", "3", "--sizes", "16,32,64", "--json"};
  auto one = base, many = base;
  one.insert(one.end(), {"--threads", "1"});
  many.insert(many.end(), {"--threads", "8"});
  const auto a = run(one), b = run(many);
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
}

TEST_CASE("sweep plot data") {
  TempDir dir;
  const auto r = run({"sweep", "--family", "complete", "--sizes", "4,8,16", "--csv", "--plot-data", dir / "p"});
  CHECK(r.code == kExitOk);
  CHECK(parse_table(slurp(dir / "p/window_ratio.csv"), OutputFormat::Csv).rows().size() == 3);
  CHECK(parse_table(slurp(dir / "p/vc_statistic.csv"), OutputFormat::Csv).rows().size() == 3);
}

TEST_CASE("generate writes a chain that reads back") {
  TempDir dir;
  const auto g = run({"generate", "--family", "random-regular", "--size", "20", "--seed", "4", "-o", dir / "rr.txt"});
  CHECK(g.code == kExitOk);
  const auto v = run({"validate", dir / "rr.txt", "--csv"});
  CHECK(v.code == kExitOk);
  CHECK(v.out.find("true,20,60,") != std::string::npos);
}

TEST_CASE("a saved config reruns to the same output") {
  TempDir dir;
  const auto first = run({"mixing-time", "--family", "cycle", "--size", "10", "--eps", "0.3", "--csv", "--save-config",
                          dir / "cfg.json"});
  CHECK(first.code == kExitOk);
  const auto again = run({"--config", dir / "cfg.json"});
  CHECK(again.code == kExitOk);
  CHECK(again.out == first.out);

  RunConfig c;
  c.command = "sweep";
  c.family = "cycle";
  c.sizes = {8, 16, 32};
  const RunConfig back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == kExitInput);
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"bogus"}).code == kExitInput);
  CHECK(run({"sweep", "--family", "cycle"}).code == kExitInput);
}
