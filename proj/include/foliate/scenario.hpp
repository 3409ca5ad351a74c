#ifndef FOLIATE_SCENARIO_HPP
#define FOLIATE_SCENARIO_HPP

// Scenario runs behind the command line: one pipeline per kind, each
// producing a manifest and CSV series.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "foliate/io.hpp"

namespace foliate {

struct ScenarioConfig {
  std::string kind;  // validate | smooth | blowup | tischler | denjoy-circle | measure | generate
  std::string scene_path;
  std::string out_dir = "out";
  std::uint64_t seed = 1;

  std::vector<double> epsilons{0.1};
  std::vector<double> weights{0.1};  // blowup: sum of inserted lengths per run
  double leaf = 0.5;                 // blowup: global height of the blown leaf
  std::string packet = "wave";
  double packet_amplitude = 0.1;

  std::vector<double> form;          // tischler coefficients
  double alpha = 0.0;                // denjoy-circle; 0 picks the golden mean
  std::size_t orbit_length = 1000;
  std::size_t iterations = 100000;
  std::size_t audit_steps = 10000;
  int subsamples = 33;               // measure

  std::string template_name;         // generate
  double shear = 0.1;
  int grid = 17;
  int leaves = 33;
  bool with_measure = false;         // attach a seeded piecewise-linear measure
};

struct Check {
  std::string name;
  bool pass = true;
  double value = 0.0;
  double limit = 0.0;
};

struct RunResult {
  int exit_code = 0;
  json manifest;                               // without timestamp
  std::map<std::string, std::string> files;    // relative path -> contents
};

/// Runs a scenario without touching the file system except to read the
/// scene.  Exit codes: 0 ok, 1 pipeline failure, 2 validation failure,
/// 3 malformed input.
RunResult run_scenario(const ScenarioConfig& config);

/// Writes every artifact of a run into `out_dir`, plus manifest.json with a
/// separate `timestamp` field.
void write_artifacts(const RunResult& result, const std::string& out_dir, const std::string& timestamp);

// ---------------------------------------------------------------------------
// Scene templates

DecompositionComplex horizontal_t3(int grid = 17, int leaves = 33);
DecompositionComplex sheared_t3(double shear, int grid = 17, int leaves = 33);
/// 2 x 2 torus with cell c00 cut at height 1/2, listed
/// c01, c11, c00.0, c00.1, c10 so that c10 comes after the cut pieces.
DecompositionComplex split_t3(int grid = 17, int leaves = 33);
/// One box over the whole torus base with a single annular face.
DecompositionComplex annulus_box(int grid = 17, int leaves = 33);

/// Scene document for a template name; the seed is recorded but no
/// template draws random numbers.
json generate_scene(const std::string& name, const ScenarioConfig& config);

}  // namespace foliate

#endif  // FOLIATE_SCENARIO_HPP
