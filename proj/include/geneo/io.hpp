#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "geneo/function_space.hpp"
#include "geneo/matching.hpp"
#include "geneo/opdsl.hpp"
#include "geneo/persistence.hpp"

namespace geneo {

using Json = nlohmann::ordered_json;

/// Rounds to 12 significant digits; infinities and NaN pass through.
double round12(double v);
/// "%.12g", with "inf" / "-inf" for infinities.
std::string format12(double v);
/// Number rounded to 12 significant digits, or the string "inf".
Json json_number(double v);

// Function CSV: header `index,value`, rows 0..n-1; n is the row count.
SampledFunction read_function_csv(std::istream& in);
SampledFunction read_function_csv(const std::filesystem::path& path);
void write_function_csv(std::ostream& out, const SampledFunction& f);

// Diagram JSON: {"finite": [[b, d], ...], "essential": [b, ...]}.
Json diagram_to_json(const PersistenceDiagram& d);
PersistenceDiagram diagram_from_json(const Json& j);
// Diagram CSV: header `birth,death`; essential rows carry death "inf".
void write_diagram_csv(std::ostream& out, const PersistenceDiagram& d);
PersistenceDiagram read_diagram_csv(std::istream& in);
/// Picks CSV for a .csv extension, JSON otherwise.
PersistenceDiagram read_diagram(const std::filesystem::path& path);

Json matching_to_json(const BottleneckResult& r, const PersistenceDiagram& a,
                      const PersistenceDiagram& b);

// Canonical operator tree: {"kind": ..., parameters..., "children": [...]}.
Json expr_to_json(const OpExpr& e);
OpExpr expr_from_json(const Json& j);

}  // namespace geneo
