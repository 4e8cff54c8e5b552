#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "auditopt/core/strategy.hpp"
#include "auditopt/core/test_function.hpp"
#include "auditopt/linear/linear.hpp"
#include "auditopt/multistep/audit.hpp"
#include "auditopt/sim/sim.hpp"

namespace auditopt::io {

using nlohmann::json;

/// {"type":"threshold","delta":..,"sigma":..} | {"type":"linear","b":..} | {"type":"constant","p":..}
json to_json(const core::TestFunction& t);
/// Throws std::invalid_argument naming the offending field.
core::TestFunction test_from_json(const json& j);

/// {"prefix":[...],"tail":{...}}
json to_json(const multistep::Audit& a);
multistep::Audit audit_from_json(const json& j);

json to_json(const core::StrategySolution& s);
json to_json(const linear::LinearDesign& d);
json to_json(const sim::SimResult& r);

/// %.12g with '.' decimal; infinities as inf / -inf.
std::string format_number(double v);

/// Comma-separated rows of numbers after a fixed header.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);

 private:
  std::ostream& out_;
  std::size_t width_;
};

}  // namespace auditopt::io
