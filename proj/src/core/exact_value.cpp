#include "core/exact_value.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace larckit {

void ExactValue::normalize() {
  for (auto it = coeffs.begin(); it != coeffs.end();) {
    if (it->second == 0)
      it = coeffs.erase(it);
    else
      ++it;
  }
}

std::optional<double> builtin_symbol_value(const std::string& name) {
  if (name == "pi") return std::numbers::pi;
  if (name == "e") return std::numbers::e;
  if (name.size() > 4 && name.rfind("sqrt", 0) == 0) {
    long long n = 0;
    for (size_t i = 4; i < name.size(); ++i) {
      char c = name[i];
      if (c < '0' || c > '9') return std::nullopt;
      n = n * 10 + (c - '0');
      if (n > 1000000000LL) return std::nullopt;
    }
    if (n < 2) return std::nullopt;
    long long r = static_cast<long long>(std::llround(std::sqrt(double(n))));
    if (r * r == n) return std::nullopt;  // perfect square is not irrational
    return std::sqrt(double(n));
  }
  return std::nullopt;
}

double resolve_symbol(const std::string& name,
                      const std::map<std::string, double>& symbols) {
  auto it = symbols.find(name);
  if (it != symbols.end()) return it->second;
  if (auto v = builtin_symbol_value(name)) return *v;
  throw std::invalid_argument("unknown irrational symbol: " + name);
}

double ExactValue::value(const std::map<std::string, double>& symbols) const {
  double out = static_cast<double>(rational);
  for (const auto& [name, c] : coeffs)
    out += static_cast<double>(c) * resolve_symbol(name, symbols);
  return out;
}

}  // namespace larckit
