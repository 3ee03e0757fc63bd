#include "quadmod/report.hpp"

#include <algorithm>

namespace quadmod {

bool Report::passed() const { return failures() == 0; }

std::size_t Report::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks_.begin(), checks_.end(), [](const CheckResult& c) { return !c.pass && !c.informational; }));
}

const CheckResult* Report::first_failure() const {
  for (const auto& c : checks_)
    if (!c.pass && !c.informational) return &c;
  return nullptr;
}

const CheckResult* Report::find(const std::string& id) const {
  for (const auto& c : checks_)
    if (c.id == id) return &c;
  return nullptr;
}

}  // namespace quadmod
