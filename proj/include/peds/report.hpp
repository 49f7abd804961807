#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace peds {

struct PropertyCheck {
  enum class Status { Pass, Fail, Skip };
  std::string name;
  Status status = Status::Fail;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string note;

  bool passed() const { return status != Status::Fail; }
};

/// Pass when measured <= tolerance (NaN fails).
PropertyCheck check_at_most(std::string name, double measured, double tolerance, std::string note = {});
PropertyCheck skipped(std::string name, double tolerance, std::string reason);

/// `PROP <name> PASS|FAIL|SKIP measured=<v> tol=<t>[ note=<...>]`
void write_property_line(std::ostream& out, const PropertyCheck& check);

bool all_passed(const std::vector<PropertyCheck>& checks);

}  // namespace peds
