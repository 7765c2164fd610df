#pragma once

// The end-to-end acceptance suite: eleven numbered criteria, each run on
// seeded instances and reported as a single pass/fail line.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace qcpcp {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 1;  // first instance seed; the rest follow consecutively
  int instances = 20;
  int colorings = 100;
};

class AcceptanceSuite {
 public:
  static constexpr int kCriteria = 11;

  explicit AcceptanceSuite(AcceptanceOptions opt = {});
  ~AcceptanceSuite();

  /// Runs criterion `id` (1..11). Exceptions are caught and reported as failures.
  CriterionResult run(int id);
  std::vector<CriterionResult> run_all(const std::function<void(const CriterionResult&)>& on_result = {});

 private:
  struct State;
  std::unique_ptr<State> st_;
};

/// "[PASS] 4  theta identity ... (1.23 s) detail".
std::string format_result(const CriterionResult& r);

}  // namespace qcpcp
