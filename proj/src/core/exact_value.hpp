#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <optional>
#include <string>

namespace larckit {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Exact eigenvalue tag: a rational plus rational coefficients over a declared
// finite set of irrational symbols ("sqrt2", "sqrt3", "pi", ...). The declared
// symbols together with 1 are assumed linearly independent over Q; declaring a
// set for which that fails voids the exact certificates.
struct ExactValue {
  Rational rational;
  std::map<std::string, Rational> coeffs;  // zero coefficients are dropped

  void normalize();  // erase zero coefficients
  bool is_rational() const { return coeffs.empty(); }

  // Numeric value; declared overrides extend the builtin table. Throws
  // std::invalid_argument on an unresolvable symbol.
  double value(const std::map<std::string, double>& symbols) const;
};

// Builtin symbols: "sqrtN" for positive non-square integer N, "pi", "e".
std::optional<double> builtin_symbol_value(const std::string& name);

double resolve_symbol(const std::string& name,
                      const std::map<std::string, double>& symbols);

}  // namespace larckit
