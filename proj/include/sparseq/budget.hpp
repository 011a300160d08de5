#pragma once

#include <cstddef>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace sparseq {

/// Raised when a request exceeds the configured size budget (LP variable
/// count or combinatorial enumeration size). Maps to CLI exit code 3.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a numerical routine fails its post-solve certificate check.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Size caps for the expensive operations. The environment variable
/// SPARSE_EQ_BUDGET, when set to a positive integer, caps both the LP
/// variable count and enumeration sizes at that value.
struct Budget {
  std::size_t lp_variable_cap = 20000;
  std::size_t enumeration_cap = 1000000;

  static Budget from_env() {
    Budget b;
    if (const char* env = std::getenv("SPARSE_EQ_BUDGET")) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && v > 0) {
        b.lp_variable_cap = static_cast<std::size_t>(v);
        b.enumeration_cap = static_cast<std::size_t>(v);
      }
    }
    return b;
  }
};

}  // namespace sparseq
