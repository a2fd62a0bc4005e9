#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "popper/cli.hpp"

int main(int argc, char** argv) {
  using namespace popper;

  CLI::App app{"Monte Carlo simulator and analysis toolkit for the two-slit entangled-photon experiment"};
  app.set_version_flag("--version", std::string(cli::kToolVersion));
  app.require_subcommand(1);

  auto* reproduce = app.add_subcommand("reproduce-paper", "Recompute the reference kinematics and diffraction numbers");
  bool h_modern = false;
  reproduce->add_flag("--h-modern", h_modern, "Use CODATA 2018 h and c instead of the reference values");

  auto* simulate = app.add_subcommand("simulate", "Scan D2 and write a coincidence/singles CSV plus manifest");
  cli::SimulateOptions sim;
  std::string config_path;
  std::string slit_b;
  std::string lens;
  std::string slit_model = "redirect";
  std::string out_path = sim.out.string();
  simulate->add_option("--config", config_path, "Apparatus config file (key = value)")->check(CLI::ExistingFile);
  simulate->add_option("--slit-b", slit_b, "Override slit B")->check(CLI::IsMember({"present", "absent"}));
  simulate->add_option("--lens", lens, "Override the arm-A lens")->check(CLI::IsMember({"on", "off"}));
  simulate->add_option("--slit-model", slit_model, "Slit interaction model")
      ->check(CLI::IsMember({"redirect", "add-kick"}))
      ->capture_default_str();
  simulate->add_option("--trials", sim.trials, "Trials per scan position")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simulate->add_option("--scan-min", sim.scan_min_mm, "First D2 position, mm")->capture_default_str();
  simulate->add_option("--scan-max", sim.scan_max_mm, "Last D2 position, mm")->capture_default_str();
  simulate->add_option("--scan-step", sim.scan_step_mm, "D2 step, mm")->capture_default_str();
  simulate->add_option("--workers", sim.workers, "Worker threads (0 = all cores)")->capture_default_str();
  simulate->add_option("--out", out_path, "Output CSV path")->capture_default_str();

  auto* analyze = app.add_subcommand("analyze", "Extract features from a scan CSV");
  cli::AnalyzeOptions ana;
  std::string csv_path;
  std::string analyze_config;
  analyze->add_option("csv", csv_path, "Scan CSV")->required();
  analyze->add_option("--config", analyze_config, "Apparatus config used for the reference geometry");

  auto* replay = app.add_subcommand("replay", "Regenerate a scan from its manifest");
  std::string manifest_path;
  std::string replay_out;
  replay->add_option("manifest", manifest_path, "Manifest JSON")->required()->check(CLI::ExistingFile);
  replay->add_option("--out", replay_out, "Write the CSV here instead of the recorded path");

  CLI11_PARSE(app, argc, argv);

  if (*reproduce) {
    const auto k = h_modern ? PhysicalConstants::codata2018() : PhysicalConstants::reference();
    return cli::cmd_reproduce_paper(k, std::cout);
  }
  if (*simulate) {
    if (!config_path.empty()) sim.config_path = config_path;
    if (!slit_b.empty()) sim.slit_b_present = slit_b == "present";
    if (!lens.empty()) sim.lens_enabled = lens == "on";
    sim.slit_interaction = parse_slit_interaction(slit_model);
    sim.out = out_path;
    return cli::cmd_simulate(sim, std::cout, std::cerr);
  }
  if (*analyze) {
    ana.csv = csv_path;
    if (!analyze_config.empty()) ana.config_path = analyze_config;
    return cli::cmd_analyze(ana, std::cout, std::cerr);
  }
  if (*replay) {
    std::optional<std::filesystem::path> out;
    if (!replay_out.empty()) out = replay_out;
    return cli::cmd_replay(manifest_path, out, std::cout, std::cerr);
  }
  return 0;
}
