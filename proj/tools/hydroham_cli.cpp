#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hydroham/catalog.hpp"
#include "hydroham/examples.hpp"
#include "hydroham/transform.hpp"
#include "hydroham/variational.hpp"

using namespace hydroham;

namespace {

constexpr int kPass = 0;
constexpr int kClaimFailure = 1;
constexpr int kUsage = 2;

struct RunConfig {
  std::uint64_t seed = 0;
  int trials = 25;
  int degree = 4;
  std::string format = "text";

  bool json() const { return format == "json"; }
  ZeroTestOptions options() const {
    ZeroTestOptions o;
    o.seed = seed;
    o.trials = trials;
    return o;
  }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int emit_report(const CheckReport& r, const RunConfig& cfg) {
  if (cfg.json()) {
    std::cout << r.to_json().dump(2) << "\n";
  } else {
    std::cout << r.summary();
  }
  return r.passed() ? kPass : kClaimFailure;
}

int cmd_check(const std::string& path, const RunConfig& cfg) {
  NonHomOperator c = parse_operator(read_file(path));
  CheckReport r = check_full(c, cfg.options());
  r.subject = path;
  return emit_report(r, cfg);
}

int cmd_invert(const std::string& equation, const RunConfig& cfg) {
  EvolutionSystem s = invert_equation(scalar_equation(equation));
  if (cfg.json()) {
    nlohmann::json j;
    j["equation"] = equation;
    j["system"] = format_system(s);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << format_system(s);
  }
  return kPass;
}

int cmd_catalog_list(const RunConfig& cfg) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& e : catalog()) {
    if (cfg.json()) {
      j.push_back({{"id", e.id}, {"components", e.n}, {"rank", e.rank}, {"constraints", e.side_constraints}});
    } else {
      std::cout << e.id << "  n=" << e.n << "  rank=" << e.rank;
      for (const auto& c : e.side_constraints) std::cout << "  [" << c << " = 0]";
      std::cout << "\n";
    }
  }
  if (cfg.json()) std::cout << j.dump(2) << "\n";
  return kPass;
}

int cmd_catalog_show(const std::string& id, const RunConfig& cfg) {
  const CatalogEntry& e = find_entry(id);
  if (cfg.json()) {
    nlohmann::json j;
    j["id"] = e.id;
    j["template"] = e.template_text;
    j["constraints"] = e.side_constraints;
    j["chart"] = e.chart;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "# " << e.id << "\n";
    for (const auto& c : e.side_constraints) std::cout << "# constraint: " << c << " = 0\n";
    for (const auto& c : e.chart) std::cout << "# chart: " << c << "\n";
    std::cout << e.template_text;
  }
  return kPass;
}

int cmd_catalog_verify(const std::string& id, const RunConfig& cfg) {
  return emit_report(verify_entry(id, cfg.trials, cfg.seed), cfg);
}

int cmd_reproduce(const std::string& id, const RunConfig& cfg) {
  ReproduceConfig rc;
  rc.seed = cfg.seed;
  rc.trials = cfg.trials;
  rc.degree = cfg.degree;
  ExampleReport r;
  try {
    r = reproduce(id, rc);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (cfg.json()) {
    std::cout << r.to_json().dump(2) << "\n";
  } else {
    std::cout << r.text();
  }
  return r.passed() ? kPass : kClaimFailure;
}

int cmd_match(const std::string& path, const std::vector<std::string>& maps, const RunConfig& cfg) {
  NonHomOperator c = parse_operator(read_file(path));
  std::vector<PointMap> extra;
  for (const auto& m : maps) extra.push_back(parse_point_map(read_file(m)));
  auto found = match_catalog(c, extra, cfg.options());
  if (cfg.json()) {
    nlohmann::json j;
    j["matched"] = found.has_value();
    if (found) {
      j["entry"] = found->entry_id;
      j["map"] = describe(found->map);
      j["bindings"] = found->instantiation.describe();
    }
    std::cout << j.dump(2) << "\n";
  } else if (found) {
    std::cout << "entry: " << found->entry_id << "\nmap: " << describe(found->map)
              << "\nbindings: " << found->instantiation.describe() << "\n";
  } else {
    std::cout << "no catalog entry matched (restricted search: permutations, sign flips and given maps)\n";
  }
  return found ? kPass : kClaimFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic checks for non-homogeneous Hamiltonian operators of hydrodynamic type"};
  app.require_subcommand(1);
  // Global flags may follow the subcommand.
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--seed", cfg.seed, "Seed for randomized zero tests")->capture_default_str();
  app.add_option("--trials", cfg.trials, "Random specializations per zero test / instantiations per entry")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--degree", cfg.degree, "Total degree of density and operator ansatze")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--format", cfg.format, "Output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "json"}));

  std::string file;
  std::string text;
  std::vector<std::string> maps;
  std::function<int()> action;

  auto* check = app.add_subcommand("check", "Run every Hamiltonianity condition on an operator file");
  check->add_option("operator", file, "Operator file")->required();
  check->callback([&] { action = [&] { return cmd_check(file, cfg); }; });

  auto* invert = app.add_subcommand("invert", "Invert a scalar evolution equation into an x-evolution system");
  invert->add_option("equation", text, "Equation, e.g. \"u_t = 6*u*u_x + u_xxx\"")->required();
  invert->callback([&] { action = [&] { return cmd_invert(text, cfg); }; });

  auto* cat = app.add_subcommand("catalog", "The classification of degenerate operators");
  cat->require_subcommand(1);
  cat->fallthrough();
  cat->add_subcommand("list", "List entries")->callback([&] { action = [&] { return cmd_catalog_list(cfg); }; });
  auto* show = cat->add_subcommand("show", "Print an entry's operator file");
  show->add_option("id", text, "Entry id, e.g. C3,2")->required();
  show->callback([&] { action = [&] { return cmd_catalog_show(text, cfg); }; });
  auto* verify = cat->add_subcommand("verify", "check_full on random constraint-respecting instantiations");
  verify->add_option("id", text, "Entry id")->required();
  verify->callback([&] { action = [&] { return cmd_catalog_verify(text, cfg); }; });

  auto* rep = app.add_subcommand("reproduce", "Reproduce a worked example claim by claim");
  rep->add_option("example", text, "three-wave, two-wave, sinh-gordon, kdv-1, kdv-2, gkdv:n, linear-kdv, harry-dym")
      ->required();
  rep->callback([&] { action = [&] { return cmd_reproduce(text, cfg); }; });

  auto* match = app.add_subcommand("match", "Identify an operator with a catalog entry");
  match->add_option("operator", file, "Operator file")->required();
  match->add_option("--map", maps, "Point-map file tried before relabelling (repeatable)");
  match->callback([&] { action = [&] { return cmd_match(file, maps, cfg); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }
  try {
    return action();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const ParseError& e) {
    std::cerr << "error: at position " << e.position() << ": " << e.what() << "\n";
  } catch (const TransformError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const CatalogError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const ExprError& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kUsage;
}
