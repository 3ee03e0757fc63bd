#pragma once

#include "quadmod/fock.hpp"

#include <string>

namespace quadmod::detail {

// Collects the first failure for one identity family.
struct Family {
  const TruncatedFock& fock;
  Window window;
  std::string witness;
  void expect(const FockOperator& lhs, const FockOperator& rhs, const std::string& context) {
    if (!witness.empty()) return;
    std::string d = fock.defect_witness(lhs - rhs, window);
    if (!d.empty()) witness = context + ": " + d;
  }
  void fail(const std::string& w) {
    if (witness.empty()) witness = w;
  }
  void emit(Report& rep, const std::string& id, const std::string& citation) const {
    rep.add({id, citation, window, witness.empty(), witness, false});
  }
};

inline Window full(const TruncatedFock& f) { return {0, f.depth()}; }
inline Window exact(const TruncatedFock& f) { return {0, f.depth() - 1}; }
inline Window positive(const TruncatedFock& f) { return {1, f.depth()}; }
inline Window modulo_compacts(const TruncatedFock& f) { return {2, f.depth()}; }

}  // namespace quadmod::detail
