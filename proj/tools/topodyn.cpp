#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "topodyn/topodyn.hpp"

namespace {

enum class mode { analyze, regress, dump };

int run(const std::string& path, mode m, const std::string& out_override) {
  using namespace topodyn;
  std::ifstream in(path);
  if (!in) {
    std::cerr << "IoError: cannot read " << path << "\n";
    return 4;
  }
  std::stringstream text;
  text << in.rdbuf();
  run_config cfg;
  try {
    cfg = parse_config(text.str());
  } catch (const error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == errc::io_error ? 4 : 3;
  }
  if (!out_override.empty()) cfg.output_dir = out_override;
  if (m == mode::regress) cfg.tasks = {task_spec{"facts-regression", "", {}}};

  auto res = run_analysis(cfg);
  try {
    auto where = emit_outputs(res, cfg, m == mode::dump);
    std::cerr << "report: " << where.string() << "\n";
  } catch (const error& e) {
    std::cerr << e.what() << "\n";
    return 4;
  }
  const auto& rep = res.report;
  for (const auto& v : rep.verdicts) std::cout << v.task << "  " << v.property << "  " << verdict_name(v.result) << "\n";
  for (const auto& g : rep.regression)
    if (!g.matched) std::cout << "MISMATCH " << g.property << ": expected " << (g.expected ? "true" : "false") << ", observed " << g.observed << "\n";
  for (const auto& e : rep.errors) std::cerr << "[" << e.task << "] " << e.message << "\n";
  return exit_code(rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"topodyn: shadowing, chain and barycenter analysis of catalog dynamical systems"};
  app.require_subcommand(1);
  std::string config, out;
  mode m = mode::analyze;
  auto add = [&](const char* name, const char* help, mode which) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("config", config, "config file")->required();
    sub->add_option("-o,--out", out, "output directory (overrides the config; TOPODYN_OUT_DIR overrides both)");
    sub->callback([&m, which] { m = which; });
  };
  add("analyze", "run the config's tasks and write the JSON report", mode::analyze);
  add("regress", "compare computed properties with the catalog fact sheet", mode::regress);
  add("dump", "run the tasks and also write CSV dumps of chains and orbits", mode::dump);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }
  if (const char* env = std::getenv("TOPODYN_OUT_DIR"); env && *env) out.clear();
  return run(config, m, out);
}
