#pragma once

// Text serialization of measures: flat CSV tables (one row per atom) and
// JSON objects. Reals are written with 17 significant digits so decimal
// round trips are bit-exact.

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "pa/measures.hpp"

namespace pa {

std::string format_real(double x);

// CSV layouts (the degree column holds "tail" for the tail coordinate):
//   DegreeMeasure  k,p
//   PairMeasure    k,a1,a2,p
//   PathMeasure    i,t,a1,a2,k,p   with k = "weight" for the pair weight
void write_csv(const DegreeMeasure& m, std::ostream& os);
void write_csv(const PairMeasure& m, std::ostream& os);
void write_csv(const PathMeasure& m, std::ostream& os);
DegreeMeasure read_degree_csv(std::istream& is);
PairMeasure read_pair_csv(std::istream& is);
PathMeasure read_path_csv(std::istream& is);

nlohmann::json to_json(const DegreeMeasure& m);
nlohmann::json to_json(const PairMeasure& m);
nlohmann::json to_json(const PathMeasure& m);
DegreeMeasure degree_from_json(const nlohmann::json& j);
PairMeasure pair_from_json(const nlohmann::json& j);
PathMeasure path_from_json(const nlohmann::json& j);

}  // namespace pa
