#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "json.hpp"
#include "qmlab/cli.hpp"
#include "qmlab/sampled_field.hpp"
#include "qmlab/sphere_harmonics.hpp"

using namespace qmlab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("qmlab_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json load_json(const std::string& path) { return json::parse(slurp(path)); }

void write_config(const std::string& path, const json& cfg) {
  std::ofstream out(path);
  out << cfg.dump(2) << "\n";
}

int run(std::vector<std::string> args) { return cli::run(args); }

}  // namespace

TEST_CASE("exit codes") {
  TempDir tmp;
  CHECK(run({}) == 2);
  CHECK(run({"--help"}) == 0);
  CHECK(run({"exponents", "--help"}) == 0);
  CHECK(run({"exponents", "--bogus", "1"}) == 2);
  CHECK(run({"nonsense"}) == 2);

  const std::string out = tmp.file("never.csv");
  CHECK(run({"exponents", "--n", "1", "--out", out}) == 2);
  CHECK_FALSE(fs::exists(out));

  CHECK(run({"sphere", "--alpha", "0.6", "--out", tmp.file("sp")}) == 2);
  CHECK(run({"quasimode", "--out", tmp.file("q"), "--grid-step", "0.9"}) == 3);
  CHECK_FALSE(fs::exists(tmp.file("q.field.bin")));
  CHECK_FALSE(fs::exists(tmp.file("q.report.json")));

  // quasimode writes files, so --out is mandatory.
  CHECK(run({"quasimode"}) == 2);

  const std::string cfg = tmp.file("bad.json");
  write_config(cfg, json{{"bogus", 1}});
  CHECK(run({"exponents", "--config", cfg, "--out", out}) == 2);
  CHECK(run({"exponents", "--config", tmp.file("missing.json"), "--out", out}) == 2);
  std::ofstream(tmp.file("mangled.json")) << "{not json";
  CHECK(run({"exponents", "--config", tmp.file("mangled.json"), "--out", out}) == 2);
}

TEST_CASE("exponents command") {
  TempDir tmp;
  SUBCASE("default csv table") {
    const std::string out = tmp.file("exp.csv");
    REQUIRE(run({"exponents", "--out", out}) == 0);
    const std::string text = slurp(out);
    CHECK(text.rfind("# {", 0) == 0);
    CHECK(text.find("n,k,p,beta,delta,delta_exact,") != std::string::npos);
    // n=3, k=2, p=2, beta=3/4: delta = 1/4, sigma = -1/8, no log loss.
    CHECK(text.find(",1/4,") != std::string::npos);
    CHECK(text.find(",-1/8,") != std::string::npos);
    CHECK(text.find("low_p") != std::string::npos);
    CHECK(text.find(",0,") != std::string::npos);
    CHECK(text.find(",4,3\n") != std::string::npos);  // p_stz, p_hyp
  }
  SUBCASE("infinite p prints as inf") {
    const std::string out = tmp.file("inf.csv");
    REQUIRE(run({"exponents", "--p", "inf", "--out", out}) == 0);
    CHECK(slurp(out).find("3,2,inf,") != std::string::npos);
  }
  SUBCASE("p_list emits one json row per index") {
    const std::string cfg = tmp.file("cfg.json");
    write_config(cfg, json{{"p_list", {"2", "4", "inf"}}, {"format", "json"}});
    const std::string out = tmp.file("rows.json");
    REQUIRE(run({"exponents", "--config", cfg, "--out", out}) == 0);
    const json doc = load_json(out);
    CHECK(doc["format_version"] == "1.0");
    REQUIRE(doc["rows"].size() == 3);
    CHECK(doc["rows"][0]["p"] == "2");
    CHECK(doc["rows"][0]["sigma"]["exact"] == "-1/8");
    CHECK(doc["rows"][0]["delta"]["exact"] == "1/4");
    CHECK(doc["rows"][0]["delta"]["log_loss"] == false);
    CHECK(doc["rows"][2]["p"] == "inf");
    CHECK(doc["rows"][2]["sigma"]["regime"] == "high_p");
    // The embedded config can be replayed (no out/threads in it).
    CHECK_FALSE(doc["config"].contains("out"));
    CHECK_FALSE(doc["config"].contains("threads"));
  }
  SUBCASE("whole-manifold rows have no sigma") {
    const std::string out = tmp.file("whole.json");
    REQUIRE(run({"exponents", "--n", "3", "--k", "3", "--format", "json", "--out", out}) == 0);
    const json doc = load_json(out);
    CHECK(doc["rows"][0]["sigma"].is_null());
  }
  SUBCASE("flags override config values") {
    const std::string cfg = tmp.file("p4.json");
    write_config(cfg, json{{"p", "4"}, {"format", "json"}});
    const std::string out = tmp.file("override.json");
    REQUIRE(run({"exponents", "--config", cfg, "--p", "2", "--out", out}) == 0);
    const json doc = load_json(out);
    CHECK(doc["rows"][0]["p"] == "2");
    CHECK(doc["config"]["p"] == "2");
  }
}

TEST_CASE("predict command") {
  TempDir tmp;
  SUBCASE("point maximizer") {
    const std::string out = tmp.file("pred.json");
    REQUIRE(run({"predict", "--out", out}) == 0);
    const json doc = load_json(out);
    const json& p = doc["prediction"];
    CHECK(p["alpha_star"] == json::array({json::array({"1/2", "1/2"})}));
    CHECK(p["case"] == "Thalf_tube");
    CHECK(p["exponent_exact"] == "-1/8");
    CHECK(p["representative_alpha_value"] == 0.5);
    CHECK(p["critical_time_scale"] == 0.0);

    // The sampled curve never exceeds the closed-form maximum and attains
    // it on the grid.
    const std::string curve = slurp(out + ".curve.csv");
    std::istringstream lines(curve);
    std::string line;
    std::getline(lines, line);  // prelude
    CHECK(line.rfind("# {", 0) == 0);
    std::getline(lines, line);
    CHECK(line == "alpha,E");
    double max_e = -1e300;
    int rows = 0;
    while (std::getline(lines, line)) {
      const auto comma = line.find(',');
      REQUIRE(comma != std::string::npos);
      max_e = std::max(max_e, std::stod(line.substr(comma + 1)));
      ++rows;
    }
    CHECK(rows == 513);  // alpha = 0, 1/1024, ..., 1/2
    CHECK(max_e == p["exponent_at_max"].get<double>());
  }
  SUBCASE("flat maximum") {
    const std::string out = tmp.file("flat.json");
    REQUIRE(run({"predict", "--p", "4", "--out", out}) == 0);
    const json p = load_json(out)["prediction"];
    CHECK(p["alpha_star"] == json::array({json::array({"1/4", "1/2"})}));
    CHECK(p["case"] == "all_scales_critical");
    CHECK(p["representative_alpha"] == "1/4");
    CHECK(p["critical_time_scale"] == 0.5);
  }
  SUBCASE("invalid beta leaves no output") {
    const std::string out = tmp.file("nope.json");
    CHECK(run({"predict", "--beta", "-1", "--out", out}) == 2);
    CHECK_FALSE(fs::exists(out));
    CHECK_FALSE(fs::exists(out + ".curve.csv"));
  }
}

TEST_CASE("quasimode command") {
  TempDir tmp;
  const std::string out = tmp.file("field");
  REQUIRE(run({"quasimode", "--out", out}) == 0);
  REQUIRE(fs::exists(out + ".field.bin"));
  REQUIRE(fs::exists(out + ".report.json"));

  const json doc = load_json(out + ".report.json");
  const json& rep = doc["report"];
  const double h = 0.015625;
  CHECK(rep["defect_bound"].get<double>() == 2.0 * h + h * h);
  CHECK(rep["l2_norm_sq"].get<double>() == 4.0);
  CHECK(rep["origin_rel_error"].get<double>() < 1e-6);
  CHECK(rep["tube_constant"].get<double>() > 0.3);
  CHECK(rep["checks"]["origin_matches_closed_form"] == true);
  CHECK(rep["pass"] == true);
  CHECK(doc["config"]["grid_step"].is_number());
  CHECK(doc["config"]["omega0"].is_array());
  CHECK(doc["config"].contains("grid_half_widths"));

  nlohmann::json header;
  SampledField f = read_field(out + ".field.bin", &header);
  CHECK(f.values.size() == f.grid.total());
  CHECK(f.cap.h == h);
  CHECK(header["config"]["n"] == 2);

  SUBCASE("outputs are re-run and thread-count invariant") {
    const std::string out2 = tmp.file("field2");
    REQUIRE(run({"quasimode", "--out", out2}) == 0);
    CHECK(slurp(out2 + ".field.bin") == slurp(out + ".field.bin"));
    CHECK(slurp(out2 + ".report.json") == slurp(out + ".report.json"));

    const std::string out3 = tmp.file("field3");
    REQUIRE(run({"quasimode", "--out", out3, "--threads", "2"}) == 0);
    CHECK(slurp(out3 + ".field.bin") == slurp(out + ".field.bin"));
  }
  SUBCASE("node budget aborts before any file is written") {
    const std::string cfg = tmp.file("budget.json");
    write_config(cfg, json{{"node_budget", 16}});
    const std::string out4 = tmp.file("tight");
    CHECK(run({"quasimode", "--config", cfg, "--out", out4}) == 3);
    CHECK_FALSE(fs::exists(out4 + ".field.bin"));
    CHECK_FALSE(fs::exists(out4 + ".report.json"));
  }
  SUBCASE("json field format") {
    const std::string out5 = tmp.file("jsonfield");
    REQUIRE(run({"quasimode", "--out", out5, "--format", "json", "--samples", "5"}) == 0);
    REQUIRE(fs::exists(out5 + ".field.json"));
    SampledField g = read_field(out5 + ".field.json");
    CHECK(g.values.size() == g.grid.total());
  }
}

TEST_CASE("scaling command") {
  TempDir tmp;
  SUBCASE("saturation matches the exponent table") {
    const std::string out = tmp.file("scan");
    REQUIRE(run({"scaling", "--p", "inf", "--beta", "1", "--h-start", "0.0625", "--h-count",
                 "3", "--extent", "0.25", "--out", out}) == 0);
    const json doc = load_json(out + ".summary.json");
    const json& s = doc["summary"];
    CHECK(s["sigma_exact"] == "1/2");
    CHECK(s["alpha"] == 0.0);
    CHECK(s["pass"] == true);
    CHECK(std::abs(s["deviation"].get<double>()) <= 0.15);
    CHECK(s["records"].size() == 3);
    CHECK(s["records"][0]["p"] == "inf");
    // h_start/h_count are materialized into an explicit h_list.
    CHECK(doc["config"]["h_list"].size() == 3);
    CHECK_FALSE(doc["config"].contains("h_start"));
    CHECK_FALSE(doc["config"].contains("h_count"));

    const std::string csv = slurp(out + ".csv");
    CHECK(csv.rfind("# {", 0) == 0);
    CHECK(csv.find("n,k,p,beta,alpha,h,norm,nodes,ms") != std::string::npos);
    int lines = 0;
    for (char ch : csv)
      if (ch == '\n') ++lines;
    CHECK(lines == 5);  // prelude + header + 3 records
  }
  SUBCASE("forcing the wrong scale fails the deviation gate") {
    const std::string out = tmp.file("wrong");
    CHECK(run({"scaling", "--p", "inf", "--beta", "1", "--alpha", "0.5", "--h-start",
               "0.0625", "--h-count", "3", "--extent", "0.25", "--out", out}) == 4);
    const json doc = load_json(out + ".summary.json");
    CHECK(doc["summary"]["pass"] == false);
    CHECK(std::abs(doc["summary"]["deviation"].get<double>()) > 0.15);
  }
  SUBCASE("h_list needs three points") {
    const std::string cfg = tmp.file("short.json");
    write_config(cfg, json{{"h_list", {0.0625, 0.03125}}});
    CHECK(run({"scaling", "--config", cfg, "--out", tmp.file("x")}) == 2);
  }
}

TEST_CASE("sphere command") {
  TempDir tmp;
  const std::string out = tmp.file("sp");
  REQUIRE(run({"sphere", "--j", "60", "--out", out}) == 0);
  const json doc = load_json(out + ".report.json");
  const json& rep = doc["report"];
  CHECK(rep["harmonicity_max_residual"].get<double>() <= 1e-12);
  CHECK(rep["u1_wallis_rel_error"].get<double>() <= 1e-4);
  CHECK(rep["pass"] == true);
  CHECK(rep["term_count"].get<int>() >= 1);
  CHECK(rep["stage_count"].get<long long>() >= 1);
  CHECK(rep["concentration"].get<double>() > 0.0);
  REQUIRE(rep["pairs"].size() == 1);
  CHECK(rep["pairs"][0]["offset"] == 1);
  CHECK(rep["pairs"][0]["value"].get<double>() > 0.0);

  const json hdoc = load_json(out + ".harmonics.json");
  HarmonicSum un = harmonic_from_json(hdoc["harmonic_sum"]);
  CHECK(un.j == 60);
  CHECK(un.k == un.n);

  SUBCASE("pair offsets flag") {
    const std::string out2 = tmp.file("sp2");
    REQUIRE(run({"sphere", "--j", "60", "--pair-offsets", "1,2", "--out", out2}) == 0);
    const json rep2 = load_json(out2 + ".report.json")["report"];
    REQUIRE(rep2["pairs"].size() == 2);
    CHECK(rep2["pairs"][1]["offset"] == 2);
    CHECK(rep2["pairs"][1]["value"].get<double>() <
          rep2["pairs"][0]["value"].get<double>());
  }
  SUBCASE("three dimensional run") {
    const std::string out3 = tmp.file("sp3");
    REQUIRE(run({"sphere", "--n", "3", "--j", "6", "--out", out3}) == 0);
    const json rep3 = load_json(out3 + ".report.json")["report"];
    CHECK(rep3["pass"] == true);
    HarmonicSum u3 = harmonic_from_json(load_json(out3 + ".harmonics.json")["harmonic_sum"]);
    CHECK(u3.n == 3);
    CHECK(u3.k == 3);
  }
}
