#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "support.hpp"

using namespace topodyn;
using namespace topodyn::testing;
namespace fs = std::filesystem;

namespace {

errc parse_code(const std::string& text) {
  try {
    parse_config(text);
  } catch (const error& e) {
    return e.code();
  }
  return errc::invalid_argument;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("topodyn_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs the CLI named by TOPODYN_CLI; -1 when the variable is unset.
int run_cli(const std::string& args, const fs::path& out) {
  const char* cli = std::getenv("TOPODYN_CLI");
  if (!cli) return -1;
  std::string cmd = "TOPODYN_OUT_DIR='" + out.string() + "' '" + cli + "' " + args + " >/dev/null 2>&1";
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

const char* example3_text = R"(# bipartite
system = example3_sft
seed = 3
epsilon = 0.125
horizon = 20
tasks = [facts-regression, barycenter, glue]

[barycenter]
p = (12)^inf
q = (34)^inf
n1 = 20
n2 = 20

[glue]
segments = (12)^inf : 6 | (34)^inf : 6 | (23)^inf : 4
)";

}  // namespace

// ---------- config ----------

TEST(Config, MinimalUsesDefaults) {
  auto c = parse_config("system = cat_map\n");
  EXPECT_EQ(c.system.kind, system_kind::cat_map);
  EXPECT_EQ(c.params, run_params{});
  EXPECT_EQ(c.seed, 1u);
  EXPECT_TRUE(c.tasks.empty());
}

TEST(Config, RejectsBadInput) {
  EXPECT_EQ(parse_code("system = rotation(3/2)\n"), errc::param_out_of_range);
  EXPECT_EQ(parse_code("system = horseshoe\n"), errc::unknown_kind);
  EXPECT_EQ(parse_code("seed = 4\n"), errc::parse_error);
  EXPECT_EQ(parse_code("system = cat_map\ntasks = [analyze, dance]\n"), errc::unknown_kind);
  EXPECT_EQ(parse_code("system = cat_map\nmesh = -1\n"), errc::param_out_of_range);
}

TEST(Config, SerializeRoundTrip) {
  auto c = parse_config(example3_text);
  EXPECT_EQ(c.system.kind, system_kind::example3_sft);
  EXPECT_EQ(c.params.epsilon, 0.125);
  ASSERT_EQ(c.tasks.size(), 3u);
  EXPECT_EQ(c.tasks[1].params.at("p"), "(12)^inf");
  EXPECT_EQ(parse_config(serialize_config(c)), c);
  for (const auto& f : fs::directory_iterator(TOPODYN_SOURCE_DIR "/configs")) {
    auto cfg = parse_config(slurp(f.path()));
    EXPECT_EQ(parse_config(serialize_config(cfg)), cfg) << f.path();
  }
}

// ---------- run_analysis / JSON ----------

TEST(Report, Example3Run) {
  auto cfg = parse_config(example3_text);
  auto res = run_analysis(cfg);
  const auto& r = res.report;
  EXPECT_TRUE(r.errors.empty());
  EXPECT_TRUE(r.regression_matched());
  EXPECT_EQ(exit_code(r), 0);
  ASSERT_FALSE(r.regression.empty());
  bool saw_bary = false, saw_glue = false;
  auto sys = make_system(cfg.system);
  for (const auto& v : r.verdicts) {
    if (v.task == "barycenter" || v.task == "glue") {
      (v.task == "glue" ? saw_glue : saw_bary) = true;
      EXPECT_EQ(v.result, verdict::holds);
    }
    auto ok = revalidate(sys, v);
    EXPECT_TRUE(!ok || *ok) << v.task << " " << v.property;
  }
  EXPECT_TRUE(saw_bary && saw_glue);
}

TEST(Report, JsonRoundTripAndDeterminism) {
  auto cfg = parse_config(example3_text);
  auto a = run_analysis(cfg).report, b = run_analysis(cfg).report;
  auto j = to_json(a);
  EXPECT_EQ(j.at("schema_version"), 1);
  EXPECT_EQ(report_from_json(j), a);
  EXPECT_EQ(report_from_json(json::parse(j.dump())), a);
  b.timestamp = a.timestamp;
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(Report, TamperedWitnessFailsRevalidation) {
  auto cfg = parse_config(example3_text);
  auto r = run_analysis(cfg).report;
  auto sys = make_system(cfg.system);
  for (auto v : r.verdicts) {
    if (v.task != "barycenter") continue;
    v.witness["epsilon"] = 1e-9;
    auto ok = revalidate(sys, v);
    ASSERT_TRUE(ok);
    EXPECT_FALSE(*ok);
  }
}

TEST(Report, EmptyTaskList) {
  auto cfg = parse_config("system = golden_mean_sft\n");
  auto res = run_analysis(cfg);
  EXPECT_EQ(exit_code(res.report), 0);
  auto j = json::parse(to_json(res.report).dump());
  EXPECT_TRUE(j.at("verdicts").empty());
  EXPECT_EQ(report_from_json(j), res.report);
}

TEST(Report, ExitCodes) {
  property_report r;
  EXPECT_EQ(exit_code(r), 0);
  r.regression.push_back({"mixing", true, "fails", false, "classical", ""});
  EXPECT_EQ(exit_code(r), 2);
  r.errors.push_back({"glue", errc_name(errc::not_shadowing_capable), "x"});
  EXPECT_EQ(exit_code(r), 3);
  r.errors.push_back({"out", errc_name(errc::io_error), "x"});
  EXPECT_EQ(exit_code(r), 4);
}

// Rejected at parse time already; run_analysis records it when handed the raw task.
TEST(Report, TaskErrorsAreRecorded) {
  EXPECT_EQ(parse_code("system = ladder\ntasks = [glue]\n[glue]\nsegments = 0 : 3\n"), errc::not_shadowing_capable);
  run_config cfg;
  cfg.system.kind = system_kind::ladder;
  cfg.tasks = {task_spec{"glue", "", {{"segments", "0 : 3"}}}};
  auto r = run_analysis(cfg).report;
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].code, errc_name(errc::not_shadowing_capable));
  EXPECT_EQ(exit_code(r), 3);
}

// The chain dump re-read from disk is a delta-chain of the cat map.
TEST(Report, ChainDumpIsAChain) {
  auto dir = scratch("chain");
  auto cfg = parse_config("system = cat_map\nmesh = 0.05\ntasks = [chain]\n[chain]\nfrom = 0.1 0.2\nto = 0.7 0.4\ndelta = 0.1\n");
  cfg.output_dir = dir.string();
  auto res = run_analysis(cfg);
  ASSERT_EQ(res.report.verdicts.size(), 1u);
  EXPECT_EQ(res.report.verdicts[0].result, verdict::holds_at_resolution);
  ::unsetenv("TOPODYN_OUT_DIR");
  auto report = emit_outputs(res, cfg, true);
  EXPECT_TRUE(fs::exists(report));
  std::ifstream in(dir / "chain_chain.csv");
  ASSERT_TRUE(in);
  auto pts = read_points_csv(in);
  ASSERT_GE(pts.size(), 2u);
  auto sys = cat_map();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    auto img = cat_double(pts[i]);
    double dx = std::abs(img[0] - pts[i + 1][0]), dy = std::abs(img[1] - pts[i + 1][1]);
    dx = std::min(dx, 1 - dx), dy = std::min(dy, 1 - dy);
    EXPECT_LT(std::hypot(dx, dy), 0.1) << i;
  }
  EXPECT_TRUE(fs::exists(dir / "chain_graph.txt"));
}

// ---------- CLI ----------

TEST(Cli, EndToEnd) {
  if (!std::getenv("TOPODYN_CLI")) GTEST_SKIP() << "TOPODYN_CLI not set";
  auto dir = scratch("cli");
  auto good = dir / "e3.ini";
  std::ofstream(good) << example3_text;
  EXPECT_EQ(run_cli("analyze " + good.string(), dir / "a"), 0);
  auto rep = json::parse(slurp(dir / "a" / "report.json"));
  EXPECT_EQ(rep.at("system").at("kind"), "example3_sft");
  EXPECT_EQ(run_cli("regress " + good.string(), dir / "r"), 0);
  EXPECT_EQ(run_cli("dump " + good.string(), dir / "d"), 0);
  auto bad = dir / "bad.ini";
  std::ofstream(bad) << "system = rotation(3/2)\n";
  EXPECT_EQ(run_cli("analyze " + bad.string(), dir / "b"), 3);
  EXPECT_EQ(run_cli("analyze " + (dir / "missing.ini").string(), dir / "m"), 4);
  auto err = dir / "err.ini";
  std::ofstream(err) << "system = ladder\ntasks = [glue]\n[glue]\nsegments = 0 : 3\n";
  EXPECT_EQ(run_cli("analyze " + err.string(), dir / "e"), 3);
  EXPECT_NE(run_cli("", dir / "n"), 0);
}
