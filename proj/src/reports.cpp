#include "hydroham/reports.hpp"

#include <sstream>

namespace hydroham {

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass:
      return "pass";
    case Status::Fail:
      return "fail";
    case Status::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

Status combine(Status a, Status b) {
  if (a == Status::Fail || b == Status::Fail) return Status::Fail;
  if (a == Status::Inconclusive || b == Status::Inconclusive) return Status::Inconclusive;
  return Status::Pass;
}

Status CheckReport::status() const {
  Status s = Status::Pass;
  for (const auto& c : conditions) s = combine(s, c.status);
  return s;
}

const ConditionResult* CheckReport::first_failure() const {
  for (const auto& c : conditions) {
    if (c.status != Status::Pass) return &c;
  }
  return nullptr;
}

const ConditionResult* CheckReport::find(const std::string& id) const {
  for (const auto& c : conditions) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

void CheckReport::append(const CheckReport& other) {
  conditions.insert(conditions.end(), other.conditions.begin(), other.conditions.end());
  notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

nlohmann::json CheckReport::to_json() const {
  nlohmann::json j;
  j["subject"] = subject;
  j["status"] = status_name(status());
  j["seed"] = seed;
  j["trials"] = trials;
  j["conditions"] = nlohmann::json::array();
  for (const auto& c : conditions) {
    nlohmann::json r;
    r["id"] = c.id;
    r["group"] = c.group;
    r["statement"] = c.statement;
    r["status"] = status_name(c.status);
    r["checked"] = c.checked;
    r["failed"] = c.failed;
    r["failures"] = nlohmann::json::array();
    for (const auto& f : c.failures) {
      r["failures"].push_back({{"indices", f.indices},
                               {"status", status_name(f.status)},
                               {"residual", f.residual},
                               {"witness", f.witness}});
    }
    j["conditions"].push_back(r);
  }
  j["notes"] = notes;
  return j;
}

std::string CheckReport::summary() const {
  std::ostringstream out;
  out << subject << ": " << status_name(status()) << " (seed " << seed << ", " << trials << " trials)\n";
  for (const auto& c : conditions) {
    out << "  [" << status_name(c.status) << "] " << c.id << "  " << c.checked << " checked";
    if (c.failed > 0) out << ", " << c.failed << " failed";
    out << "\n";
    for (const auto& f : c.failures) {
      out << "      at (";
      for (std::size_t i = 0; i < f.indices.size(); ++i) out << (i ? "," : "") << f.indices[i];
      out << "): " << f.residual << "\n";
      if (!f.witness.empty()) out << "      " << f.witness << "\n";
    }
  }
  for (const auto& n : notes) out << "  note: " << n << "\n";
  return out.str();
}

}  // namespace hydroham
