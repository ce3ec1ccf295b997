#pragma once

#include <string>

#include "json.hpp"
#include "mocktrace/geodesic.hpp"
#include "mocktrace/poincare.hpp"
#include "mocktrace/qform.hpp"
#include "mocktrace/series.hpp"

namespace mocktrace {

using json = nlohmann::json;

void to_json(json& j, const QuadForm& q);
void from_json(const json& j, QuadForm& q);
void to_json(json& j, const TraceResult& r);
void from_json(const json& j, TraceResult& r);
void to_json(json& j, const SeriesValue& v);
void from_json(const json& j, SeriesValue& v);
// flat: the SeriesValue fields plus deltas, F, F_err, extrapolation_err
void to_json(json& j, const CoeffValue& v);
void from_json(const json& j, CoeffValue& v);
void to_json(json& j, const Prop1Side& p);
void from_json(const json& j, Prop1Side& p);

bool operator==(const SeriesValue& a, const SeriesValue& b);
bool operator==(const CoeffValue& a, const CoeffValue& b);
bool operator==(const Prop1Side& a, const Prop1Side& b);

// compact single-line JSON with shortest round-trip doubles, non-finite values as null
template <class T>
std::string to_json_string(const T& x) {
  return json(x).dump();
}

}  // namespace mocktrace
