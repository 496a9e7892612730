#ifndef HYDROHAM_PARSE_HPP
#define HYDROHAM_PARSE_HPP

#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hydroham/expr.hpp"

namespace hydroham {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Names the grammar understands.
///
/// Field variables are always reachable as u1..u9 (any uN); `variables` adds
/// aliases, variables[0] naming field 1. Functions are declared on first use
/// unless auto-declaration is off; later uses must agree on the arity.
struct SymbolTable {
  std::vector<std::string> variables{"u", "v", "w"};
  std::set<std::string> params;
  std::map<std::string, int> functions;
  /// Algebraic functions: name -> radicand in arg1 (name(z)^2 = radicand(z)).
  std::map<std::string, Expr> radicals;
  bool auto_declare = true;

  int field_of(const std::string& name) const;
};

Expr parse(const std::string& text, SymbolTable& symbols);
Expr parse(const std::string& text);

/// Pretty-printer emitting the parser's grammar. Fields print with the
/// table's aliases when given, as uN otherwise.
std::string to_string(const Expr& e, const SymbolTable* symbols = nullptr);

}  // namespace hydroham

#endif  // HYDROHAM_PARSE_HPP
