#include "foliate/io.hpp"

#include <fstream>
#include <locale>
#include <sstream>

namespace foliate {

namespace {

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError&) {
    throw;
  } catch (const json::exception& e) {
    throw InputError(std::string(what) + ": " + e.what());
  } catch (const Error& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

BaseDomain base_from_json(const json& j) {
  const auto shape = base_shape_from_string(field(j, "shape").get<std::string>());
  const int nx = field(j, "nx").get<int>();
  const int ny = field(j, "ny").get<int>();
  BaseDomain b;
  switch (shape) {
    case BaseShape::Rectangle: b = BaseDomain::rectangle(nx, ny); break;
    case BaseShape::Annulus: b = BaseDomain::annulus(nx, ny); break;
    case BaseShape::Disk:
      if (nx != ny) throw InputError("disk grids are square");
      b = BaseDomain::disk(nx);
      break;
  }
  return b;
}

}  // namespace

json family_to_json(const LeafFamily& f) {
  const auto& b = f.base();
  return {{"base", {{"shape", to_string(b.shape)}, {"nx", b.nx}, {"ny", b.ny}}},
          {"anchor", {f.anchor().i, f.anchor().j}},
          {"t", f.t_samples()},
          {"values", f.values()}};
}

LeafFamily family_from_json(const json& j) {
  return guarded("bad leaf family", [&] {
    const BaseDomain base = base_from_json(field(j, "base"));
    const auto& a = field(j, "anchor");
    if (!a.is_array() || a.size() != 2) throw InputError("anchor must be [i, j]");
    NodeIndex anchor{a[0].get<int>(), a[1].get<int>()};
    return LeafFamily(base, field(j, "t").get<std::vector<double>>(), field(j, "values").get<std::vector<double>>(),
                      anchor);
  });
}

json cumulative_to_json(const Cumulative& c) {
  return {{"kind", c.kind() == Cumulative::Kind::Spline ? "spline" : "linear"},
          {"xs", c.xs()},
          {"ys", c.ys()},
          {"d0", c.left_derivative()},
          {"d1", c.right_derivative()}};
}

Cumulative cumulative_from_json(const json& j) {
  return guarded("bad cumulative function", [&] {
    const auto kind = field(j, "kind").get<std::string>();
    auto xs = field(j, "xs").get<std::vector<double>>();
    auto ys = field(j, "ys").get<std::vector<double>>();
    if (kind == "linear") return Cumulative::piecewise_linear(std::move(xs), std::move(ys));
    if (kind == "spline")
      return Cumulative::spline(std::move(xs), std::move(ys), field(j, "d0").get<double>(), field(j, "d1").get<double>());
    throw InputError("unknown cumulative kind '" + kind + "'");
  });
}

json scene_to_json(const DecompositionComplex& scene, const std::string& name, const TransverseMeasure* measure) {
  json boxes = json::array();
  json families = json::object();
  for (const auto& b : scene.boxes) {
    json faces = json::array();
    for (const auto& f : b.faces) faces.push_back({{"side", to_string(f.side)}, {"height", {f.lo, f.hi}}});
    json box = {{"id", b.id},
                {"rect", {b.rect.x0, b.rect.x1, b.rect.y0, b.rect.y1}},
                {"height", {b.t_lo, b.t_hi}},
                {"faces", faces},
                {"family", nullptr}};
    if (b.family) {
      box["family"] = b.id;
      families[b.id] = family_to_json(*b.family);
    }
    boxes.push_back(std::move(box));
  }
  json out = {{"schema_version", kSchemaVersion},
              {"scene", name},
              {"foliation", {{"kind", scene.foliation.kind}, {"shear", scene.foliation.shear}}},
              {"relative", scene.relative},
              {"boxes", boxes},
              {"families", families}};
  if (measure)
    out["measure"] = {{"kind", to_string(measure->kind)}, {"cumulative", cumulative_to_json(measure->cumulative)}};
  return out;
}

DecompositionComplex scene_from_json(const json& j) {
  return guarded("bad scene file", [&] {
    const int version = field(j, "schema_version").get<int>();
    if (version != kSchemaVersion) throw InputError("unsupported schema_version " + std::to_string(version));
    DecompositionComplex c;
    if (j.contains("foliation")) {
      const auto& f = j.at("foliation");
      c.foliation.kind = field(f, "kind").get<std::string>();
      c.foliation.shear = f.value("shear", 0.0);
    }
    if (j.contains("relative")) c.relative = j.at("relative").get<std::vector<std::string>>();
    const json families = j.value("families", json::object());
    for (const auto& jb : field(j, "boxes")) {
      FlowBoxSpec b;
      b.id = field(jb, "id").get<std::string>();
      const auto r = field(jb, "rect").get<std::vector<double>>();
      if (r.size() != 4) throw InputError("box " + b.id + ": rect must be [x0, x1, y0, y1]");
      b.rect = {r[0], r[1], r[2], r[3]};
      const auto h = field(jb, "height").get<std::vector<double>>();
      if (h.size() != 2) throw InputError("box " + b.id + ": height must be [lo, hi]");
      b.t_lo = h[0];
      b.t_hi = h[1];
      for (const auto& jf : field(jb, "faces")) {
        const auto fh = field(jf, "height").get<std::vector<double>>();
        if (fh.size() != 2) throw InputError("box " + b.id + ": face height must be [lo, hi]");
        b.faces.push_back({side_from_string(field(jf, "side").get<std::string>()), fh[0], fh[1]});
      }
      if (jb.contains("family") && !jb.at("family").is_null()) {
        const auto ref = jb.at("family").get<std::string>();
        if (!families.contains(ref)) throw InputError("box " + b.id + " refers to unknown family '" + ref + "'");
        b.family = family_from_json(families.at(ref));
      }
      c.boxes.push_back(std::move(b));
    }
    return c;
  });
}

std::optional<TransverseMeasure> measure_from_json(const json& j) {
  if (!j.contains("measure")) return std::nullopt;
  return guarded("bad measure", [&] {
    const auto& m = j.at("measure");
    TransverseMeasure mu;
    mu.kind = measure_kind_from_string(field(m, "kind").get<std::string>());
    mu.cumulative = cumulative_from_json(field(m, "cumulative"));
    return std::optional<TransverseMeasure>(mu);
  });
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string(), "output");
  out << text;
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string CsvTable::str() const {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(12);
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  return os.str();
}

}  // namespace foliate
