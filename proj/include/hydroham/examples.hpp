#ifndef HYDROHAM_EXAMPLES_HPP
#define HYDROHAM_EXAMPLES_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace hydroham {

enum class ClaimStatus { Verified, VerifiedWithConvention, NotVerified };

/// "verified", "verified-with-convention" or "not-verified".
const char* claim_status_name(ClaimStatus s);

/// One sentence of a worked example and what computation made of it.
struct Claim {
  std::string id;
  std::string statement;
  ClaimStatus status = ClaimStatus::NotVerified;
  /// How the printed data had to be read or corrected (empty when verified).
  std::string resolution;
  /// Resolved data and attempted variants, in the order they were produced.
  std::vector<std::pair<std::string, std::string>> data;
};

struct ReproduceConfig {
  std::uint64_t seed = 0;
  int trials = 25;
  /// Total degree of polynomial density and operator ansatze.
  int degree = 4;
};

struct ExampleReport {
  std::string example;
  ReproduceConfig config;
  std::vector<Claim> claims;

  /// No claim is not-verified.
  bool passed() const;
  const Claim* find(const std::string& id) const;
  nlohmann::json to_json() const;
  std::string text() const;
};

/// three-wave, two-wave, sinh-gordon, kdv-1, kdv-2, gkdv:n, linear-kdv, harry-dym.
std::vector<std::string> example_ids();

/// Runs the example's pipeline. Throws std::invalid_argument for unknown ids.
ExampleReport reproduce(const std::string& id, const ReproduceConfig& config = {});

}  // namespace hydroham

#endif  // HYDROHAM_EXAMPLES_HPP
