#ifndef HYDROHAM_REPORTS_HPP
#define HYDROHAM_REPORTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace hydroham {

enum class Status { Pass, Fail, Inconclusive };

const char* status_name(Status s);
/// Worst of two statuses: Fail beats Inconclusive beats Pass.
Status combine(Status a, Status b);

struct Failure {
  std::vector<int> indices;  // 1-based
  Status status = Status::Fail;
  std::string residual;
  std::string witness;
};

/// Outcome of one condition family over every index combination.
struct ConditionResult {
  std::string id;
  std::string group;
  std::string statement;
  int checked = 0;
  int failed = 0;
  Status status = Status::Pass;
  /// The first few failing index tuples.
  std::vector<Failure> failures;
};

struct CheckReport {
  std::string subject;
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<ConditionResult> conditions;
  std::vector<std::string> notes;

  Status status() const;
  bool passed() const { return status() == Status::Pass; }
  /// First condition that did not pass, or nullptr.
  const ConditionResult* first_failure() const;
  const ConditionResult* find(const std::string& id) const;
  void append(const CheckReport& other);

  nlohmann::json to_json() const;
  std::string summary() const;
};

}  // namespace hydroham

#endif  // HYDROHAM_REPORTS_HPP
