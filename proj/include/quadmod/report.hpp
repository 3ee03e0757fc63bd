#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace quadmod {

/// Closed interval of Fock levels on which an identity is asserted.
struct Window {
  std::size_t lo = 0;
  std::size_t hi = 0;
  std::string to_string() const { return "[" + std::to_string(lo) + ".." + std::to_string(hi) + "]"; }
  friend bool operator==(const Window&, const Window&) = default;
};

struct CheckResult {
  std::string id;
  std::string citation;
  std::optional<Window> window;
  bool pass = true;
  std::string witness;         // empty on pass
  bool informational = false;  // findings that never affect the exit code
};

/// Ordered list of identity checks. Order is part of the output contract.
class Report {
 public:
  void add(CheckResult r) { checks_.push_back(std::move(r)); }
  void add(std::string id, std::string citation, bool pass, std::string witness = {},
           std::optional<Window> window = std::nullopt) {
    checks_.push_back({std::move(id), std::move(citation), window, pass, pass ? std::string() : std::move(witness),
                       false});
  }
  void append(const Report& other) { checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end()); }

  const std::vector<CheckResult>& checks() const { return checks_; }
  bool passed() const;
  std::size_t failures() const;
  /// First non-informational failure, if any.
  const CheckResult* first_failure() const;
  const CheckResult* find(const std::string& id) const;

 private:
  std::vector<CheckResult> checks_;
};

}  // namespace quadmod
