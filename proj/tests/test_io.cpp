#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "foliate/families.hpp"
#include "foliate/io.hpp"
#include "foliate/scenario.hpp"

using namespace foliate;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "foliate_test_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("leaf families round trip bit for bit") {
  const auto f = random_family(BaseDomain::annulus(9, 8), 17, 3);
  const auto path = scratch("family.json");
  write_json(path, family_to_json(f));
  const auto g = family_from_json(read_json(path));
  CHECK(g.values() == f.values());
  CHECK(g.t_samples() == f.t_samples());
  CHECK(g.base().shape == BaseShape::Annulus);
  CHECK(g.anchor().i == f.anchor().i);
  CHECK(g.anchor().j == f.anchor().j);
}

TEST_CASE("scenes round trip") {
  const auto scene = enforce_condition5(split_t3(9, 9));
  const TransverseMeasure mu{MeasureKind::FiberCoordinate,
                             Cumulative::spline({0.0, 0.3, 0.6, 1.0}, {0.0, 0.2, 0.5, 1.0}, 0.5, 1.5)};
  const auto j = scene_to_json(scene, "split-t3", &mu);
  const auto back = scene_from_json(json::parse(j.dump()));
  REQUIRE(back.boxes.size() == scene.boxes.size());
  for (std::size_t i = 0; i < scene.boxes.size(); ++i) {
    CHECK(back.boxes[i].id == scene.boxes[i].id);
    CHECK(back.boxes[i].t_lo == scene.boxes[i].t_lo);
    CHECK(back.boxes[i].t_hi == scene.boxes[i].t_hi);
    CHECK(back.boxes[i].faces.size() == scene.boxes[i].faces.size());
    CHECK(back.boxes[i].family->values() == scene.boxes[i].family->values());
  }
  CHECK(validate(back).valid());
  const auto m = measure_from_json(j);
  REQUIRE(m.has_value());
  CHECK(m->kind == MeasureKind::FiberCoordinate);
  for (int q = 0; q <= 20; ++q) CHECK(m->cumulative(q / 20.0) == mu.cumulative(q / 20.0));
  CHECK_FALSE(measure_from_json(scene_to_json(scene, "split-t3")).has_value());
  // Serializing twice gives the same bytes.
  CHECK(scene_to_json(back, "split-t3", &*m).dump() == j.dump());
}

TEST_CASE("malformed input is an input error") {
  const auto good = scene_to_json(horizontal_t3(9, 5), "horizontal-t3");
  auto check_bad = [](const json& j) {
    try {
      scene_from_json(j);
      FAIL("accepted malformed scene");
    } catch (const InputError& e) {
      CHECK(e.stage() == "input");
    }
  };
  auto j = good;
  j["schema_version"] = 99;
  check_bad(j);
  j = good;
  j.erase("boxes");
  check_bad(j);
  j = good;
  j["boxes"][0]["rect"] = {0.0, 1.0};
  check_bad(j);
  j = good;
  j["boxes"][0]["family"] = "nowhere";
  check_bad(j);
  j = good;
  j["boxes"][0]["faces"][0]["side"] = "up";
  check_bad(j);
  j = good;
  j["families"]["c00"]["values"] = {1.0, 2.0};
  check_bad(j);
  check_bad(json::array());

  CHECK_THROWS_AS(cumulative_from_json({{"kind", "cubic"}, {"xs", {0.0, 1.0}}, {"ys", {0.0, 1.0}}}), InputError);
  CHECK_THROWS_AS(cumulative_from_json({{"kind", "linear"}, {"xs", {0.0, 1.0}}, {"ys", {1.0, 0.0}}}), InputError);

  CHECK_THROWS_AS(read_json(scratch("does-not-exist.json")), InputError);
  const auto broken = scratch("broken.json");
  std::ofstream(broken) << "{\"schema_version\": ";
  CHECK_THROWS_AS(read_json(broken), InputError);
}

TEST_CASE("csv tables") {
  CsvTable t{{"a", "b"}, {{1.0, 0.5}, {2.0, 1e-13}}};
  CHECK(t.str() == "a,b\n1,0.5\n2,1e-13\n");
  CHECK(CsvTable{{"x"}, {}}.str() == "x\n");
}
