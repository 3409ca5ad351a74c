#include "foliate/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "foliate/blowup.hpp"
#include "foliate/circle.hpp"
#include "foliate/families.hpp"
#include "foliate/smoothing.hpp"

namespace foliate {

namespace {

struct Run {
  json inputs = json::object();
  json results = json::object();
  std::vector<Check> checks;
  std::map<std::string, std::string> files;
  int exit_code = 0;

  void check(const std::string& name, bool pass, double value, double limit) {
    checks.push_back({name, pass, value, limit});
  }
};

json checks_json(const std::vector<Check>& checks) {
  json out = json::array();
  for (const auto& c : checks)
    out.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"limit", c.limit}});
  return out;
}

DecompositionComplex load_scene(const ScenarioConfig& cfg, json* doc = nullptr) {
  if (cfg.scene_path.empty()) throw InputError("--scene is required for " + cfg.kind);
  json j = read_json(cfg.scene_path);
  auto scene = scene_from_json(j);
  if (doc) *doc = std::move(j);
  return scene;
}

void run_validate(const ScenarioConfig& cfg, Run& run) {
  const auto scene = load_scene(cfg);
  run.inputs["scene"] = cfg.scene_path;
  const auto report = validate(scene);
  json conds = json::array();
  for (const auto& c : report.conditions) {
    conds.push_back({{"condition", c.condition}, {"pass", c.pass}, {"witness", c.witness}});
    run.check("condition (" + std::to_string(c.condition) + ")", c.pass, c.pass ? 0.0 : 1.0, 0.0);
  }
  const auto tr = check_transitive(scene);
  run.results = {{"boxes", scene.boxes.size()},
                 {"conditions", conds},
                 {"annular_faces", report.annular_faces},
                 {"transitive", tr.transitive},
                 {"transitive_witness", tr.witness}};
  if (!report.valid()) run.exit_code = 2;
}

void run_smooth(const ScenarioConfig& cfg, Run& run) {
  const auto scene = load_scene(cfg);
  run.inputs = {{"scene", cfg.scene_path}, {"epsilons", cfg.epsilons}};
  CsvTable csv{{"epsilon", "achieved_c0", "face_defect", "retries"}, {}};
  json runs = json::array();
  for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
    const double eps = cfg.epsilons[i];
    const auto g = globally_smooth(scene, eps);
    json stages = json::array();
    for (const auto& s : g.stages)
      stages.push_back({{"stage", s.stage},
                        {"region", s.region},
                        {"achieved_c0", s.achieved_c0},
                        {"holonomy_defect", s.holonomy_defect},
                        {"retries", s.retries}});
    runs.push_back({{"epsilon", eps},
                    {"max_c0", g.max_c0},
                    {"box_c0", g.box_c0},
                    {"face_defect", g.face_defect},
                    {"inner_epsilon", g.inner_epsilon},
                    {"retries", g.retries},
                    {"stages", stages}});
    csv.rows.push_back({eps, g.max_c0, g.face_defect, double(g.retries)});
    run.check("c0 within epsilon " + std::to_string(eps), g.max_c0 <= eps, g.max_c0, eps);
    run.check("face holonomy defect at epsilon " + std::to_string(eps), g.face_defect < 1e-6, g.face_defect, 1e-6);
    if (i + 1 == cfg.epsilons.size()) run.files["smoothed.json"] = scene_to_json(g.scene, "smoothed").dump(2) + "\n";
  }
  run.results["runs"] = runs;
  run.files["epsilon_vs_c0.csv"] = csv.str();
}

void run_blowup(const ScenarioConfig& cfg, Run& run) {
  const auto scene = load_scene(cfg);
  const double eps = cfg.epsilons.front();
  PacketSpec packet{cfg.packet, cfg.packet_amplitude, 9};
  run.inputs = {{"scene", cfg.scene_path},
                {"leaf", cfg.leaf},
                {"weights", cfg.weights},
                {"epsilon", eps},
                {"packet", {{"kind", packet.kind}, {"amplitude", packet.amplitude}}}};
  CsvTable csv{{"total_weight", "max_c0", "face_defect"}, {}};
  json runs = json::array();
  std::vector<double> distances;
  for (double w : cfg.weights) {
    BlowupLocus locus{{{cfg.leaf, w}}};
    const auto b = blowup_scene(scene, locus, packet, eps);
    const auto report = verify_blowup(scene, b);
    json props = json::array();
    for (const auto& p : report.summary()) {
      props.push_back({{"property", p.property}, {"pass", p.pass}, {"defect", p.defect}, {"witness", p.witness}});
      run.check("property (" + std::to_string(p.property) + ") at weight " + std::to_string(w), p.pass, p.defect,
                p.property == 7 ? 1e-6 : 1e-9);
    }
    json stages = json::array();
    for (const auto& s : b.stages)
      stages.push_back({{"stage", s.stage}, {"region", s.region}, {"c0", s.c0}, {"holonomy_defect", s.holonomy_defect}});
    runs.push_back({{"total_weight", w},
                    {"max_c0", b.max_c0},
                    {"box_c0", b.box_c0},
                    {"face_defect", b.face_defect},
                    {"stages", stages},
                    {"verification", props}});
    csv.rows.push_back({w, b.max_c0, b.face_defect});
    distances.push_back(b.max_c0);
  }
  for (std::size_t i = 1; i < distances.size(); ++i)
    if (cfg.weights[i] < cfg.weights[i - 1])
      run.check("c0 decreases from weight " + std::to_string(cfg.weights[i - 1]) + " to " +
                    std::to_string(cfg.weights[i]),
                distances[i] < distances[i - 1], distances[i], distances[i - 1]);
  run.results["runs"] = runs;
  run.files["weight_vs_c0.csv"] = csv.str();
}

void run_tischler(const ScenarioConfig& cfg, Run& run) {
  if (cfg.form.size() != 2 && cfg.form.size() != 3) throw InputError("--form needs two or three coefficients");
  const double eps = cfg.epsilons.front();
  run.inputs = {{"form", cfg.form}, {"epsilon", eps}};
  const auto r = tischler_fibration({cfg.form}, eps);
  const auto cert = verify_closed_leaves(r, 16);
  json tried = json::array();
  CsvTable csv{{"q", "p", "angle_defect"}, {}};
  for (const auto& c : r.tried) {
    std::vector<double> v(cfg.form.size());
    const std::size_t other = 1 - r.lead;
    v[r.lead] = 1.0;
    v[other] = double(c.p) / double(c.q);
    std::vector<double> in(cfg.form.size());
    for (std::size_t i = 0; i < in.size(); ++i) in[i] = cfg.form[i] / cfg.form[r.lead];
    const double d = kernel_angle(in, v);
    tried.push_back({{"p", c.p}, {"q", c.q}, {"angle_defect", d}});
    csv.rows.push_back({double(c.q), double(c.p), d});
  }
  run.results = {{"integer_form", r.integer_form},
                 {"denominator", r.denominator},
                 {"angle_defect", r.angle_defect},
                 {"period", r.period},
                 {"convergents", tried},
                 {"certificate", {{"closes", cert.closes}, {"period", cert.period}, {"points", cert.points_checked}}}};
  run.check("angle defect within epsilon", r.angle_defect <= eps, r.angle_defect, eps);
  run.check("leaves close after the period", cert.closes, double(cert.period), double(r.period));
  if (!r.tried.empty()) run.files["convergents.csv"] = csv.str();
}

void run_circle(const ScenarioConfig& cfg, Run& run) {
  const double alpha = cfg.alpha == 0.0 ? 0.5 * (std::sqrt(5.0) - 1.0) : cfg.alpha;
  run.inputs = {{"alpha", alpha},
                {"orbit_length", cfg.orbit_length},
                {"iterations", cfg.iterations},
                {"audit_steps", cfg.audit_steps}};
  const auto map = blowup_circle_map(alpha, cfg.orbit_length);
  const auto rot = rotation_number(map.lift, cfg.iterations);
  const std::size_t stride = std::max<std::size_t>(1, cfg.iterations / 1000);
  CsvTable csv{{"iterate", "orbit", "rotation_estimate"}, {}};
  for (const auto& s : rotation_series(map.lift, cfg.iterations, stride)) csv.rows.push_back({double(s.n), s.orbit, s.estimate});
  const auto audit = audit_wandering(map, cfg.audit_steps);
  run.results = {{"rotation_number", rot.value},
                 {"last_increment", rot.last_increment},
                 {"gaps", map.gaps.size()},
                 {"repair_radius", map.repair_radius},
                 {"commutation_defect", map.lift.commutation_defect()},
                 {"wandering", audit.wandering},
                 {"revisit_gap", audit.first_gap},
                 {"revisit_step", audit.step}};
  run.check("rotation number within 1e-3 of alpha", std::abs(rot.value - alpha) <= 1e-3, std::abs(rot.value - alpha),
            1e-3);
  run.check("no gap revisits itself", audit.wandering, double(audit.step), double(cfg.audit_steps));
  run.check("lift commutes with translation", map.lift.commutation_defect() <= 1e-12, map.lift.commutation_defect(),
            1e-12);
  run.files["rotation.csv"] = csv.str();
}

void run_measure(const ScenarioConfig& cfg, Run& run) {
  json doc;
  const auto scene = load_scene(cfg, &doc);
  const auto mu = measure_from_json(doc);
  if (!mu) throw InputError("scene file has no measure");
  run.inputs = {{"scene", cfg.scene_path}, {"subsamples", cfg.subsamples}};
  const auto r = smooth_measured_scene({scene, *mu}, cfg.subsamples);
  json stages = json::array();
  for (const auto& s : r.stages) stages.push_back({{"stage", s.stage}, {"residual", s.residual}});
  run.results = {{"invariance_before", r.invariance_before},
                 {"invariance_after", r.invariance_after},
                 {"spline_residual", r.transversal.spline_residual},
                 {"pushforward_residual", r.transversal.pushforward_residual},
                 {"leaf_change", r.leaf_change},
                 {"stages", stages}};
  run.check("measure invariant after smoothing", r.invariance_after <= 1e-9, r.invariance_after, 1e-9);
  run.check("cumulative equals its spline at nodes", r.transversal.pushforward_residual <= 1e-12,
            r.transversal.pushforward_residual, 1e-12);
  run.check("leaves unchanged", r.leaf_change == 0.0, r.leaf_change, 0.0);
  CsvTable csv{{"node", "h", "g", "f"}, {}};
  for (std::size_t i = 0; i < r.transversal.nodes.size(); ++i) {
    const double x = r.transversal.nodes[i];
    csv.rows.push_back({x, r.transversal.h(x), r.transversal.g(x), r.transversal.f[i]});
  }
  run.files["cumulative.csv"] = csv.str();
  run.files["measured.json"] = scene_to_json(r.scene.scene, "measured", &r.scene.measure).dump(2) + "\n";
}

void run_generate(const ScenarioConfig& cfg, Run& run) {
  run.inputs = {{"template", cfg.template_name},
                {"seed", cfg.seed},
                {"grid", cfg.grid},
                {"leaves", cfg.leaves},
                {"shear", cfg.shear},
                {"with_measure", cfg.with_measure}};
  const json doc = generate_scene(cfg.template_name, cfg);
  const auto scene = scene_from_json(doc);
  const auto report = validate(scene);
  double c0 = 0.0;
  const auto flat = horizontal_family(scene.boxes.front().family->base(), cfg.leaves);
  for (const auto& b : scene.boxes)
    if (b.family && b.family->leaf_count() == flat.leaf_count()) c0 = std::max(c0, c0_distance(*b.family, flat));
  run.results = {{"boxes", scene.boxes.size()}, {"valid", report.valid()}, {"c0_to_horizontal", c0}};
  run.files["scene.json"] = doc.dump(2) + "\n";
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
  Run run;
  json error = nullptr;
  try {
    if (cfg.kind == "validate")
      run_validate(cfg, run);
    else if (cfg.kind == "smooth")
      run_smooth(cfg, run);
    else if (cfg.kind == "blowup")
      run_blowup(cfg, run);
    else if (cfg.kind == "tischler")
      run_tischler(cfg, run);
    else if (cfg.kind == "denjoy-circle")
      run_circle(cfg, run);
    else if (cfg.kind == "measure")
      run_measure(cfg, run);
    else if (cfg.kind == "generate")
      run_generate(cfg, run);
    else
      throw InputError("unknown scenario '" + cfg.kind + "'");
  } catch (const InputError& e) {
    run.exit_code = 3;
    error = {{"stage", e.stage()}, {"message", e.what()}};
  } catch (const Error& e) {
    run.exit_code = 1;
    error = {{"stage", e.stage().empty() ? cfg.kind : e.stage()}, {"message", e.what()}};
  } catch (const std::exception& e) {
    run.exit_code = 1;
    error = {{"stage", cfg.kind}, {"message", e.what()}};
  }
  const bool failed = std::any_of(run.checks.begin(), run.checks.end(), [](const Check& c) { return !c.pass; });
  if (failed && run.exit_code == 0) run.exit_code = cfg.kind == "validate" ? 2 : 1;

  RunResult out;
  out.exit_code = run.exit_code;
  out.manifest = {{"schema_version", kSchemaVersion},
                  {"scenario", cfg.kind},
                  {"seed", cfg.seed},
                  {"inputs", run.inputs},
                  {"results", run.results},
                  {"checks", checks_json(run.checks)},
                  {"exit_code", run.exit_code}};
  if (!error.is_null()) out.manifest["error"] = error;
  out.files = std::move(run.files);
  return out;
}

void write_artifacts(const RunResult& result, const std::string& out_dir, const std::string& timestamp) {
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  for (const auto& [name, text] : result.files) write_text(dir / name, text);
  json manifest = result.manifest;
  manifest["timestamp"] = timestamp;
  write_json(dir / "manifest.json", manifest);
}

// ---------------------------------------------------------------------------

DecompositionComplex horizontal_t3(int grid, int leaves) {
  TorusSceneOptions o;
  o.grid = grid;
  o.leaves = leaves;
  return build_torus_scene(o);
}

DecompositionComplex sheared_t3(double shear, int grid, int leaves) {
  TorusSceneOptions o;
  o.grid = grid;
  o.leaves = leaves;
  o.foliation = {"sheared", shear};
  return build_torus_scene(o);
}

DecompositionComplex split_t3(int grid, int leaves) {
  TorusSceneOptions o;
  o.grid = grid;
  o.leaves = leaves;
  o.height_splits = {{0.5}, {}, {}, {}};
  auto built = build_torus_scene(o);
  DecompositionComplex out = built;
  out.boxes.clear();
  for (const char* id : {"c01", "c11", "c00.0", "c00.1", "c10"}) out.boxes.push_back(built.boxes[*built.index_of(id)]);
  return out;
}

DecompositionComplex annulus_box(int grid, int leaves) {
  TorusSceneOptions o;
  o.m = 1;
  o.n = 1;
  o.grid = grid;
  o.leaves = leaves;
  return build_torus_scene(o);
}

json generate_scene(const std::string& name, const ScenarioConfig& cfg) {
  DecompositionComplex scene;
  if (name == "horizontal-t3")
    scene = horizontal_t3(cfg.grid, cfg.leaves);
  else if (name == "sheared-t3")
    scene = sheared_t3(cfg.shear, cfg.grid, cfg.leaves);
  else if (name == "split-t3")
    scene = split_t3(cfg.grid, cfg.leaves);
  else if (name == "annulus-box")
    scene = annulus_box(cfg.grid, cfg.leaves);
  else
    throw InputError("unknown template '" + name + "'");
  if (!cfg.with_measure) return scene_to_json(scene, name);

  // Piecewise-linear cumulative with seeded slopes; kinks make it
  // non-smooth, and it is invariant whenever the leaves are horizontal.
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> slope(0.5, 1.5);
  std::vector<double> xs, ys{0.0};
  for (int i = 0; i <= 8; ++i) xs.push_back(i / 8.0);
  double total = 0.0;
  for (int i = 0; i < 8; ++i) ys.push_back(total += slope(rng));
  for (auto& y : ys) y /= total;
  ys.back() = 1.0;
  TransverseMeasure mu{MeasureKind::FiberCoordinate, Cumulative::piecewise_linear(xs, ys)};
  return scene_to_json(scene, name, &mu);
}

}  // namespace foliate
