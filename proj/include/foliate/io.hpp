#ifndef FOLIATE_IO_HPP
#define FOLIATE_IO_HPP

// JSON scene files, family round trips and CSV output.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "foliate/decomposition.hpp"
#include "foliate/measure.hpp"

namespace foliate {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Malformed or unreadable input.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(what, "input") {}
};

json family_to_json(const LeafFamily& family);
LeafFamily family_from_json(const json& j);

json cumulative_to_json(const Cumulative& c);
Cumulative cumulative_from_json(const json& j);

/// Scene document: schema_version, scene, foliation, relative, boxes and a
/// families table the boxes refer to by name.  `measure` is written when
/// given.
json scene_to_json(const DecompositionComplex& scene, const std::string& name,
                   const TransverseMeasure* measure = nullptr);
DecompositionComplex scene_from_json(const json& j);
/// The scene's measure, or nullopt when the document has none.
std::optional<TransverseMeasure> measure_from_json(const json& j);

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string str() const;
};

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace foliate

#endif  // FOLIATE_IO_HPP
