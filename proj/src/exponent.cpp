#include "tfuncert/exponent.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace tfuncert {

std::string Exponent::to_string() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

Exponent parse_exponent(const std::string& text) {
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "inf" || lower == "infinity" || lower == "∞") return Exponent::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("malformed exponent '" + text + "'");
  }
  if (used != text.size()) throw DomainError("malformed exponent '" + text + "'");
  return Exponent(v);
}

}  // namespace tfuncert
