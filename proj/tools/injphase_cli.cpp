// injphase: command-line front end for the master/slave phase-modulation model.

#include <CLI11.hpp>
#include <iostream>
#include <sstream>
#include <thread>

#include "injphase/scenarios.hpp"
#include "injphase/version.hpp"

namespace {

struct Common {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "INI configuration file");
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&c](std::uint64_t s) { c.seed = s, c.seed_given = true; }, "RNG seed (overrides sim.seed)");
  cmd->add_option("--out", c.out, "Output path prefix (default: the subcommand name)");
  cmd->add_option("--workers", c.workers, "Worker threads for ensembles")->check(CLI::PositiveNumber);
  cmd->add_option("--set", c.sets, "Override a setting, section.key=value (repeatable)")
      ->allow_extra_args(false);
}

injphase::Settings effective_settings(const Common& c) {
  injphase::Settings s;
  if (!c.config_path.empty()) s = injphase::load_settings_file(c.config_path);
  for (const auto& a : c.sets) injphase::apply_override(s, a);
  if (c.seed_given) s["sim.seed"] = std::to_string(c.seed);
  return s;
}

std::vector<std::string> manifest(int argc, char** argv, const Common& c,
                                  const injphase::Settings& s, const injphase::Config& cfg) {
  std::string cmd;
  for (int i = 0; i < argc; ++i) cmd += (i ? " " : "") + std::string(argv[i]);
  std::vector<std::string> m{"injphase " + std::string(injphase::kVersion), "command: " + cmd,
                             "config: " + (c.config_path.empty() ? std::string("(defaults)") : c.config_path),
                             "seed: " + std::to_string(cfg.sim.seed)};
  for (const auto& [k, v] : s) m.push_back("setting: " + k + "=" + v);
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Direct phase modulation of a gain-switched laser by optical injection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(injphase::kVersion));

  Common common;
  struct Sub {
    const char* name;
    const char* scenario;
    const char* help;
  };
  const Sub subs[] = {
      {"steady", "steady", "CW operating points of the master"},
      {"dipi", "dipi", "Current excursion for a pi phase shift by all three methods"},
      {"fig2", "fig2", "delta I_pi against gain compression for several Henry factors"},
      {"fig3", "fig3", "Noise-free alternating coding: traces, interference, fringe"},
      {"fig4", "fig4", "Master switch-on with heating: pair phase drift"},
      {"fig5", "fig5", "Coding error rate against R over the kappa_ex list"},
      {"simulate", "custom", "One pulse train with the configured drive"},
      {"thermal", "thermal", "Slab heating solution, fit and step response"},
  };
  std::vector<std::pair<CLI::App*, std::string>> commands;
  for (const auto& s : subs) {
    auto* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, common);
    commands.emplace_back(cmd, s.scenario);
  }

  std::string axis, values_text, sweep_scenario = "rate";
  auto* sweep = app.add_subcommand("sweep", "Evaluate a scenario over values of one setting");
  add_common(sweep, common);
  sweep->add_option("--axis", axis, "Setting to vary, section.key")->required();
  sweep->add_option("--values", values_text, "Comma-separated values")->required();
  sweep->add_option("--scenario", sweep_scenario, "Scenario evaluated per value")
      ->check(CLI::IsMember(injphase::scenario_names()));

  CLI11_PARSE(app, argc, argv);

  std::string name;
  for (const auto& [cmd, scenario] : commands)
    if (cmd->parsed()) name = scenario;
  const std::string subcommand = app.get_subcommands().front()->get_name();
  const std::string prefix = common.out.empty() ? subcommand : common.out;

  try {
    const auto settings = effective_settings(common);
    const auto cfg = injphase::build_config(settings);
    injphase::RunOptions opts;
    opts.workers = common.workers;

    injphase::ScenarioResult result;
    if (sweep->parsed()) {
      std::vector<std::string> values;
      std::stringstream ss(values_text);
      for (std::string v; std::getline(ss, v, ',');)
        if (v.find_first_not_of(" \t") != std::string::npos) values.push_back(v);
      result = injphase::run_sweep(sweep_scenario, axis, values, settings, opts);
    } else {
      result = injphase::run_scenario(name, cfg, opts);
    }

    const auto files =
        injphase::write_tables(prefix, result.tables, manifest(argc, argv, common, settings, cfg));
    for (const auto& n : result.notes) std::cout << n << '\n';
    for (const auto& f : files) std::cout << "wrote " << f << '\n';
    return 0;
  } catch (const injphase::ParamError& e) {
    std::cerr << "injphase: invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "injphase: " << e.what() << '\n';
    return 1;
  }
}
