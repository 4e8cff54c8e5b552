#include "auditopt/io/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace auditopt::io {

namespace {

double number(const json& j, const char* key, const char* where) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw std::invalid_argument(std::string(where) + ": missing numeric field '" + key + "'");
  return j.at(key).get<double>();
}

}  // namespace

json to_json(const core::TestFunction& t) {
  const auto& v = t.variant();
  if (const auto* th = std::get_if<core::ThresholdTest>(&v))
    return {{"type", "threshold"}, {"delta", th->delta}, {"sigma", th->sigma}};
  if (const auto* li = std::get_if<core::LinearTest>(&v)) return {{"type", "linear"}, {"b", li->b}};
  return {{"type", "constant"}, {"p", std::get<core::ConstantTest>(v).p}};
}

core::TestFunction test_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw std::invalid_argument("test: missing string field 'type'");
  const std::string type = j.at("type").get<std::string>();
  if (type == "threshold") return core::TestFunction::threshold(number(j, "delta", "test"), number(j, "sigma", "test"));
  if (type == "linear") return core::TestFunction::linear(number(j, "b", "test"));
  if (type == "constant") return core::TestFunction::constant(number(j, "p", "test"));
  throw std::invalid_argument("test: unknown type '" + type + "'");
}

json to_json(const multistep::Audit& a) {
  json prefix = json::array();
  for (const auto& t : a.prefix) prefix.push_back(to_json(t));
  return {{"prefix", prefix}, {"tail", to_json(a.tail)}};
}

multistep::Audit audit_from_json(const json& j) {
  if (!j.is_object() || !j.contains("tail")) throw std::invalid_argument("audit: missing field 'tail'");
  multistep::Audit a;
  a.tail = test_from_json(j.at("tail"));
  if (j.contains("prefix")) {
    if (!j.at("prefix").is_array()) throw std::invalid_argument("audit: 'prefix' must be an array");
    for (const auto& t : j.at("prefix")) a.prefix.push_back(test_from_json(t));
  }
  return a;
}

json to_json(const core::StrategySolution& s) {
  return {{"utility", s.utility}, {"maximizers", s.maximizers}, {"continuum", s.continuum}};
}

json to_json(const linear::LinearDesign& d) {
  json j{{"case", linear::case_label(d.rosi_case)},
         {"b", d.b},
         {"x", d.incentivizable_x},
         {"utility", d.vendor_utility},
         {"verified", d.verified},
         {"branch", d.branch}};
  if (d.b_prime) j["b_prime"] = *d.b_prime;
  if (d.stated_b) j["stated_b"] = *d.stated_b;
  if (d.stated_b_prime) j["stated_b_prime"] = *d.stated_b_prime;
  if (d.stated_x) j["stated_x"] = *d.stated_x;
  return j;
}

json to_json(const sim::SimResult& r) {
  json hist = json::object();
  for (const auto& [t, n] : r.pass_time_histogram) hist[std::to_string(t)] = n;
  return {{"mean", r.mean},
          {"std_error", r.std_error},
          {"episodes", r.episodes},
          {"truncated_fraction", r.truncated_fraction},
          {"pass_time_histogram", hist}};
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), width_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_) throw std::invalid_argument("csv row width does not match header");
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_number(values[i]);
  out_ << '\n';
}

}  // namespace auditopt::io
