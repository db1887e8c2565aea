#include "x4/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace x4 {

namespace {

Integer parse_integer(std::string_view s, std::string_view whole) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  if (i == s.size()) throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j])))
      throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
  Integer v(std::string(s.substr(i)));
  return s[0] == '-' ? Integer(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
  Integer p = parse_integer(text.substr(0, slash), text);
  auto qs = text.substr(slash + 1);
  if (!qs.empty() && (qs[0] == '-' || qs[0] == '+'))
    throw std::invalid_argument("denominator must be unsigned: '" + std::string(text) + "'");
  Integer q = parse_integer(qs, text);
  if (q == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  return Rational(p, q);
}

std::string to_string(const Rational& r) {
  Integer q = denominator(r);
  if (q == 1) return numerator(r).str();
  return numerator(r).str() + "/" + q.str();
}

Integer floor(const Rational& r) {
  Integer p = numerator(r), q = denominator(r);
  Integer t = p / q;  // truncates toward zero
  if (p < 0 && t * q != p) t -= 1;
  return t;
}

}  // namespace x4
