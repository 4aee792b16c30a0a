#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gdl/cli.hpp"

using namespace gdl;
namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string out, err;
  std::vector<Json> records() const {
    std::vector<Json> r;
    std::istringstream is(out);
    std::string line;
    while (std::getline(is, line))
      if (!line.empty()) r.push_back(Json::parse(line));
    return r;
  }
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "gdl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("gdl_cli_" + name + "_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json without_time(Json j) {
  j.erase("wall_ms");
  return j;
}

}  // namespace

TEST_CASE("exit codes", "[cli]") {
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({"frame-bounds", "--help"}).code == 0);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"no-such-command"}).code == 2);
  CHECK(invoke({"frame-bounds", "--L", "2"}).code == 2);
  CHECK(invoke({"frame-bounds", "--window", "boxcar"}).code == 2);
  CHECK(invoke({"frame-bounds", "--points", "/nonexistent/points.txt"}).code == 2);
  CHECK(invoke({"frame-bounds", "--lattice", "1"}).code == 2);
  CHECK(invoke({"deform-sweep", "--L", "64", "--n", "abc"}).code == 2);
  CHECK(invoke({"deform-sweep", "--L", "64", "--n", "1,2"}).code == 2);
  const auto bad = invoke({"frame-bounds", "--L", "64", "--lattice", "-1", "1"});
  CHECK(bad.code == 2);
  CHECK_FALSE(bad.err.empty());
  CHECK(bad.out.empty());

  CHECK(cli::exit_code(PreconditionError("x")) == 2);
  CHECK(cli::exit_code(NumericError("x")) == 3);
  CHECK(cli::exit_code(std::runtime_error("x")) == 3);
}

TEST_CASE("dilation list syntax", "[cli]") {
  CHECK(cli::parse_n_list("2..32") == std::vector<int>{2, 4, 8, 16, 32});
  CHECK(cli::parse_n_list("3..20") == std::vector<int>{3, 6, 12});
  CHECK(cli::parse_n_list("5,7,9") == std::vector<int>{5, 7, 9});
  CHECK_THROWS_AS(cli::parse_n_list("8..4"), PreconditionError);
  CHECK_THROWS_AS(cli::parse_n_list(""), PreconditionError);
}

TEST_CASE("frame-bounds report for the default lattice", "[cli]") {
  const auto r = invoke({"frame-bounds"});
  REQUIRE(r.code == 0);
  const auto recs = r.records();
  REQUIRE(recs.size() == 1);
  const auto& j = recs[0];
  CHECK(j["schema"] == kReportSchema);
  CHECK(j["command"] == "frame-bounds");
  CHECK(j["config_hash"].get<std::string>().size() == 16);
  CHECK(j["A"].get<double>() > 0.0);
  CHECK(j["cond"].get<double>() < 10.0);
  CHECK(j["B"].get<double>() >= j["A"].get<double>());
  CHECK(j.contains("wall_ms"));
}

TEST_CASE("runs are reproducible apart from timing", "[cli]") {
  const std::vector<std::string> args{"deform-sweep", "--L", "64", "--family", "jitter", "--seed", "11"};
  const auto r1 = invoke(args), r2 = invoke(args);
  REQUIRE(r1.code == 0);
  REQUIRE(r2.code == 0);
  const auto a = r1.records(), b = r2.records();
  REQUIRE(a.size() == 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(without_time(a[i]) == without_time(b[i]));

  auto args3 = args;
  args3.back() = "12";
  const auto c = invoke(args3).records();
  CHECK(c[0]["config_hash"] != a[0]["config_hash"]);
  CHECK(c[1]["A"] != a[1]["A"]);
  CHECK(c[0]["A"] == a[0]["A"]);  // the undeformed baseline does not depend on the seed
}

TEST_CASE("config hash ignores output paths and matches config files", "[cli]") {
  const auto dir = scratch_dir("hash");
  const auto out = dir / "report.jsonl";
  const auto r1 = invoke({"frame-bounds", "--L", "64", "--lattice", "1", "1"});
  const auto r2 = invoke({"frame-bounds", "--lattice", "1", "1", "--L", "64", "--out", out.string()});
  REQUIRE(r1.code == 0);
  REQUIRE(r2.code == 0);
  CHECK(r2.out.empty());
  const auto from_file = Json::parse(slurp(out));
  const auto direct = r1.records().at(0);
  CHECK(from_file["config_hash"] == direct["config_hash"]);
  CHECK(without_time(from_file) == without_time(direct));

  const auto ini = dir / "run.ini";
  std::ofstream(ini) << "[frame-bounds]\nL = 64\nlattice = 1 1\n";
  const auto r3 = invoke({"--config", ini.string(), "frame-bounds"});
  REQUIRE(r3.code == 0);
  CHECK(without_time(r3.records().at(0)) == without_time(direct));

  const auto r4 = invoke({"frame-bounds", "--L", "64", "--lattice", "1", "0.5"});
  CHECK(r4.records().at(0)["config_hash"] != direct["config_hash"]);
  fs::remove_all(dir);
}

TEST_CASE("point-set files", "[cli]") {
  const auto dir = scratch_dir("points");
  const auto grid = make_grid(64);
  const auto T = torus_lattice(grid, 1.0, 1.0);
  {
    std::ofstream f(dir / "lattice.txt");
    write_pointset(f, T.points);
  }
  const auto from_file = invoke({"frame-bounds", "--L", "64", "--points", (dir / "lattice.txt").string()});
  const auto from_lattice = invoke({"frame-bounds", "--L", "64", "--lattice", "1", "1"});
  REQUIRE(from_file.code == 0);
  const auto a = from_file.records().at(0), b = from_lattice.records().at(0);
  CHECK(a["A"].get<double>() == Catch::Approx(b["A"].get<double>()).epsilon(1e-12));
  CHECK(a["B"].get<double>() == Catch::Approx(b["B"].get<double>()).epsilon(1e-12));
  CHECK_FALSE(a.contains("a"));
  CHECK(invoke({"frame-bounds", "--points", "x", "--lattice", "1", "1"}).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("plots are deterministic", "[cli]") {
  const auto dir = scratch_dir("plots");
  const auto p1 = dir / "a.svg", p2 = dir / "b.svg";
  REQUIRE(invoke({"deform-sweep", "--L", "64", "--n", "2..8", "--plot", p1.string()}).code == 0);
  REQUIRE(invoke({"deform-sweep", "--L", "64", "--n", "2..8", "--plot", p2.string()}).code == 0);
  const auto svg = slurp(p1);
  CHECK(svg == slurp(p2));
  CHECK(svg.rfind("<svg", 0) == 0);
  const auto csv = slurp(p1.string() + ".csv");
  CHECK(csv == slurp(p2.string() + ".csv"));
  CHECK(csv.rfind("series,x,y\n", 0) == 0);
  // three series of three points plus the header
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);

  const auto cx = dir / "holes.svg";
  REQUIRE(invoke({"counterexample", "--L", "64", "--radius", "8", "--plot", cx.string()}).code == 0);
  CHECK(fs::exists(cx));
  CHECK(fs::exists(dir / "holes-scatter.svg"));
  CHECK(fs::exists(dir / "holes-scatter.svg.csv"));
  fs::remove_all(dir);
}

TEST_CASE("plot edge cases", "[cli]") {
  const auto dir = scratch_dir("edge");
  CHECK_THROWS_AS(emit_plot({"t", "x", "y", {}}, (dir / "none.svg").string()), PreconditionError);
  CHECK_THROWS_AS(emit_plot({"t", "x", "y", {Series{"empty", {}, {}}}}, (dir / "empty.svg").string()),
                  PreconditionError);
  const auto one = dir / "one.svg";
  REQUIRE_NOTHROW(emit_plot({"t", "x", "y", {Series{"single", {1.0}, {2.0}}}}, one.string()));
  const auto svg = slurp(one);
  CHECK(svg.find("nan") == std::string::npos);
  CHECK(svg.find("inf") == std::string::npos);
  CHECK(slurp(one.string() + ".csv") == "series,x,y\nsingle,1,2\n");
  fs::remove_all(dir);
}

TEST_CASE("counterexample report", "[cli]") {
  const auto r = invoke({"counterexample", "--L", "144", "--radius", "20"});
  REQUIRE(r.code == 0);
  const auto recs = r.records();
  REQUIRE(recs.size() == 4);
  for (int i = 0; i < 3; ++i) CHECK(recs[i]["hole_base"].get<double>() == Catch::Approx(0.6515123873).epsilon(1e-9));
  CHECK(recs[0]["hole_deformed"].get<double>() < recs[2]["hole_deformed"].get<double>());
  CHECK(recs[3]["A_restricted_deformed"].get<double>() <= 0.5 * recs[3]["A_restricted_base"].get<double>());
}

TEST_CASE("molecule-check", "[cli]") {
  const auto dir = scratch_dir("molecules");
  std::ofstream(dir / "pos.txt") << "# dim=2\n0 0\n1.5 0.5\n-2 1\n";
  std::ofstream(dir / "amp.txt") << "1\n0.5\n# comment\n0.75\n";
  std::ofstream(dir / "big.txt") << "1\n1\n2\n";
  std::ofstream(dir / "short.txt") << "1\n";
  const auto pos = (dir / "pos.txt").string();

  auto violation = [&](std::vector<std::string> extra) {
    std::vector<std::string> args{"molecule-check", "--positions", pos};
    args.insert(args.end(), extra.begin(), extra.end());
    const auto r = invoke(args);
    REQUIRE(r.code == 0);
    return r.records().at(0)["max_violation"].get<double>();
  };
  CHECK(violation({}) <= 1e-12);
  CHECK(violation({"--amplitudes", (dir / "amp.txt").string(), "--random-phase", "--seed", "3"}) <= 1e-12);
  // amplitude 2 against the unit envelope exceeds it by the peak of |V_g g|
  CHECK(violation({"--amplitudes", (dir / "big.txt").string()}) == Catch::Approx(1.0).epsilon(1e-9));
  CHECK(violation({"--amplitudes", (dir / "big.txt").string(), "--inflate", "2"}) <= 1e-12);

  CHECK(invoke({"molecule-check", "--positions", pos, "--amplitudes", (dir / "short.txt").string()}).code == 2);
  CHECK(invoke({"molecule-check", "--positions", pos, "--envelope-nodes", pos}).code == 2);
  CHECK(invoke({"molecule-check"}).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("certify and transfer-check reports", "[cli]") {
  const auto c = invoke({"certify", "--L", "64", "--u-steps", "16", "--phase-steps", "16"});
  REQUIRE(c.code == 0);
  const auto cr = c.records().at(0);
  CHECK(cr["verdict"] == "certified-frame");
  CHECK(cr["hole"].get<double>() < cr["delta"].get<double>());
  CHECK(invoke({"certify", "--L", "64", "--margin", "1.5"}).code == 2);

  const auto t = invoke({"transfer-check", "--trials", "1", "--seed", "7", "--budget", "1"});
  REQUIRE(t.code == 0);
  const auto recs = t.records();
  REQUIRE(recs.size() == 2);
  CHECK(recs[1]["pass"] == true);
  CHECK(recs[1]["max_p2_svd_deviation"].get<double>() < 1e-10);
}
