#include "mocktrace/serialize.hpp"

#include <cmath>
#include <limits>

namespace mocktrace {

namespace {
// null stands for a non-finite double
double get_double(const json& j, const char* key) {
  const json& v = j.at(key);
  return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}
}  // namespace

void to_json(json& j, const QuadForm& q) { j = json{{"a", q.a}, {"b", q.b}, {"c", q.c}}; }

void from_json(const json& j, QuadForm& q) {
  j.at("a").get_to(q.a);
  j.at("b").get_to(q.b);
  j.at("c").get_to(q.c);
}

void to_json(json& j, const TraceResult& r) {
  j = json{{"value", r.value},
           {"d", r.d},
           {"D", r.D},
           {"m", r.m},
           {"method", to_string(r.method)},
           {"params", r.params},
           {"err_estimate", r.err_estimate},
           {"imag_residue", r.imag_residue},
           {"warnings", r.warnings}};
}

void from_json(const json& j, TraceResult& r) {
  r.value = get_double(j, "value");
  j.at("d").get_to(r.d);
  j.at("D").get_to(r.D);
  j.at("m").get_to(r.m);
  r.method = trace_method_from_string(j.at("method").get<std::string>());
  j.at("params").get_to(r.params);
  r.err_estimate = get_double(j, "err_estimate");
  r.imag_residue = get_double(j, "imag_residue");
  j.at("warnings").get_to(r.warnings);
}

void to_json(json& j, const SeriesValue& v) {
  j = json{{"value", v.value}, {"c_max", v.c_max}, {"s", v.s}, {"tail_estimate", v.tail_estimate}};
}

void from_json(const json& j, SeriesValue& v) {
  v.value = get_double(j, "value");
  j.at("c_max").get_to(v.c_max);
  v.s = get_double(j, "s");
  v.tail_estimate = get_double(j, "tail_estimate");
}

void to_json(json& j, const CoeffValue& v) {
  to_json(j, v.series);
  j["deltas"] = v.deltas;
  j["F"] = v.F;
  j["F_err"] = v.F_err;
  j["extrapolation_err"] = v.extrapolation_err;
}

void from_json(const json& j, CoeffValue& v) {
  from_json(j, v.series);
  j.at("deltas").get_to(v.deltas);
  j.at("F").get_to(v.F);
  j.at("F_err").get_to(v.F_err);
  v.extrapolation_err = get_double(j, "extrapolation_err");
}

void to_json(json& j, const Prop1Side& p) {
  j = json{{"value", p.value},           {"err_estimate", p.err_estimate},     {"bound", p.bound},
           {"box_values", p.box_values}, {"extrapolations", p.extrapolations}, {"quad_err", p.quad_err},
           {"quad_evals", p.quad_evals}};
}

void from_json(const json& j, Prop1Side& p) {
  p.value = get_double(j, "value");
  p.err_estimate = get_double(j, "err_estimate");
  j.at("bound").get_to(p.bound);
  j.at("box_values").get_to(p.box_values);
  j.at("extrapolations").get_to(p.extrapolations);
  p.quad_err = get_double(j, "quad_err");
  j.at("quad_evals").get_to(p.quad_evals);
}

bool operator==(const SeriesValue& a, const SeriesValue& b) {
  return a.value == b.value && a.c_max == b.c_max && a.s == b.s && a.tail_estimate == b.tail_estimate;
}

bool operator==(const CoeffValue& a, const CoeffValue& b) {
  return a.series == b.series && a.deltas == b.deltas && a.F == b.F && a.F_err == b.F_err &&
         a.extrapolation_err == b.extrapolation_err;
}

bool operator==(const Prop1Side& a, const Prop1Side& b) {
  return a.value == b.value && a.err_estimate == b.err_estimate && a.bound == b.bound &&
         a.box_values == b.box_values && a.extrapolations == b.extrapolations && a.quad_err == b.quad_err &&
         a.quad_evals == b.quad_evals;
}

}  // namespace mocktrace
