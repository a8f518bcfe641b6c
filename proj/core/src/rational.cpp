#include "vqi/rational.hpp"

#include <cstdlib>

namespace vqi {

Rational Rational::parse(const std::string& text) {
  const auto parse_int = [](const std::string& s) -> std::int64_t {
    if (s.empty()) throw ParseError("Rational: empty component in '" + s + "'");
    std::size_t pos = 0;
    std::int64_t value = 0;
    try {
      value = std::stoll(s, &pos);
    } catch (const std::exception&) {
      throw ParseError("Rational: cannot parse '" + s + "'");
    }
    if (pos != s.size()) throw ParseError("Rational: trailing characters in '" + s + "'");
    return value;
  };

  const std::size_t slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_int(text));
  return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

}  // namespace vqi
