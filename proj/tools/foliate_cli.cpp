#include <chrono>
#include <ctime>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "foliate/scenario.hpp"

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  foliate::ScenarioConfig cfg;
  CLI::App app{"foliate: smoothing, blowup and measure pipelines for product foliations"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub, bool scene) {
    if (scene) sub->add_option("--scene", cfg.scene_path, "scene JSON file")->required();
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--seed", cfg.seed, "seed for generated data");
  };

  auto* validate = app.add_subcommand("validate", "check the decomposition conditions of a scene");
  common(validate, true);

  auto* smooth = app.add_subcommand("smooth", "globally smooth a scene for each epsilon");
  common(smooth, true);
  smooth->add_option("--epsilon", cfg.epsilons, "C0 budgets in radians")->delimiter(',');

  auto* blowup = app.add_subcommand("blowup", "blow up one leaf for each total weight");
  common(blowup, true);
  blowup->add_option("--epsilon", cfg.epsilons, "C0 budget in radians")->delimiter(',');
  blowup->add_option("--weights", cfg.weights, "total inserted lengths")->delimiter(',');
  blowup->add_option("--leaf", cfg.leaf, "global height of the blown leaf");
  blowup->add_option("--packet", cfg.packet, "packet foliation: horizontal | wave");
  blowup->add_option("--amplitude", cfg.packet_amplitude, "packet amplitude");

  auto* tischler = app.add_subcommand("tischler", "approximate a linear form by a fibration");
  common(tischler, false);
  tischler->add_option("--form", cfg.form, "coefficients a,b or a,b,c")->delimiter(',')->required();
  tischler->add_option("--epsilon", cfg.epsilons, "angle bound in radians")->delimiter(',');

  auto* circle = app.add_subcommand("denjoy-circle", "Denjoy blowup of a rotation orbit");
  common(circle, false);
  circle->add_option("--alpha", cfg.alpha, "rotation number (default: golden mean)");
  circle->add_option("--orbit", cfg.orbit_length, "orbit half-length N");
  circle->add_option("--iterations", cfg.iterations, "iterations for the rotation number");
  circle->add_option("--audit", cfg.audit_steps, "iterates in the wandering audit");

  auto* measure = app.add_subcommand("measure", "smooth the transverse measure of a scene");
  common(measure, true);
  measure->add_option("--subsamples", cfg.subsamples, "spline subsamples along the transversal");

  auto* generate = app.add_subcommand("generate", "write a template scene");
  common(generate, false);
  generate->add_option("--template", cfg.template_name, "horizontal-t3 | sheared-t3 | split-t3 | annulus-box")
      ->required();
  generate->add_option("--shear", cfg.shear, "shear of sheared-t3");
  generate->add_option("--grid", cfg.grid, "nodes per box axis");
  generate->add_option("--leaves", cfg.leaves, "sampled leaves per box");
  generate->add_flag("--with-measure", cfg.with_measure, "attach a seeded transverse measure");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }
  cfg.kind = app.get_subcommands().front()->get_name();

  const auto result = foliate::run_scenario(cfg);
  try {
    foliate::write_artifacts(result, cfg.out_dir, utc_now());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (result.manifest.contains("error")) {
    const auto& err = result.manifest["error"];
    std::cerr << "error [" << err["stage"].get<std::string>() << "]: " << err["message"].get<std::string>() << "\n";
  }
  for (const auto& c : result.manifest["checks"])
    std::cout << (c["pass"].get<bool>() ? "ok   " : "FAIL ") << c["name"].get<std::string>() << "\n";
  std::cout << "manifest: " << cfg.out_dir << "/manifest.json (exit " << result.exit_code << ")\n";
  return result.exit_code;
}
