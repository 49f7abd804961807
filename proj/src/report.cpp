#include "peds/report.hpp"

#include <algorithm>
#include <ostream>

namespace peds {

PropertyCheck check_at_most(std::string name, double measured, double tolerance, std::string note) {
  PropertyCheck c;
  c.name = std::move(name);
  c.measured = measured;
  c.tolerance = tolerance;
  c.status = measured <= tolerance ? PropertyCheck::Status::Pass : PropertyCheck::Status::Fail;
  c.note = std::move(note);
  return c;
}

PropertyCheck skipped(std::string name, double tolerance, std::string reason) {
  PropertyCheck c;
  c.name = std::move(name);
  c.status = PropertyCheck::Status::Skip;
  c.tolerance = tolerance;
  c.note = std::move(reason);
  return c;
}

void write_property_line(std::ostream& out, const PropertyCheck& c) {
  const char* status = c.status == PropertyCheck::Status::Pass ? "PASS" : c.status == PropertyCheck::Status::Skip ? "SKIP" : "FAIL";
  out << "PROP " << c.name << ' ' << status << " measured=" << c.measured << " tol=" << c.tolerance;
  if (!c.note.empty()) out << " note=\"" << c.note << '"';
  out << '\n';
}

bool all_passed(const std::vector<PropertyCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed(); });
}

}  // namespace peds
