#include "degen/scenarios.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

int run(const std::string& scenario, const std::string& config_path, const std::string& out_dir)
{
  degen::RunConfig cfg;
  try {
    cfg = degen::load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << config_path << ": " << e.what() << '\n';
    return 2;
  }
  if (cfg.scenario != scenario) {
    std::cerr << config_path << ": config is for scenario '" << cfg.scenario << "', not '" << scenario << "'\n";
    return 2;
  }
  cfg.out = out_dir;
  try {
    auto res = degen::run_scenario(cfg);
    const int code = degen::emit_report(res, out_dir);
    std::printf("%s: %s (%.2f s) -> %s\n", scenario.c_str(), code == 0 ? "pass" : "FAIL", res.duration_s,
                res.report_path.string().c_str());
    return code;
  } catch (const std::exception& e) {
    std::cerr << scenario << ": " << e.what() << '\n';
    return 2;
  }
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Degenerate fourth-order parabolic lab: scenarios and reports"};
  app.require_subcommand(1);
  std::string config, out;
  for (const auto& name : degen::known_scenarios()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " scenario");
    sub->add_option("--config", config, "key = value configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory")->required();
  }
  CLI11_PARSE(app, argc, argv);
  return run(app.get_subcommands().front()->get_name(), config, out);
}
