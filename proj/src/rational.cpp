#include "soficlab/rational.hpp"

#include <cctype>

#include "soficlab/error.hpp"

namespace soficlab {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

BigInt parse_integer(std::string_view s) {
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  return BigInt(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den))
      throw Error("malformed rational \"" + std::string(text) + "\"");
    BigInt d = parse_integer(den);
    if (d == 0) throw Error("zero denominator in \"" + std::string(text) + "\"");
    Rational q(parse_integer(num), d);
    q.canonicalize();
    return q;
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) whole.remove_prefix(1);
    if (whole.empty()) whole = "0";
    if (!is_integer_literal(whole) || (!frac.empty() && !is_integer_literal(frac)) ||
        (!frac.empty() && (frac[0] == '-' || frac[0] == '+')))
      throw Error("malformed rational \"" + std::string(text) + "\"");
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt num = parse_integer(whole) * scale + (frac.empty() ? BigInt(0) : parse_integer(frac));
    Rational q(negative ? BigInt(-num) : num, scale);
    q.canonicalize();
    return q;
  }
  if (!is_integer_literal(s)) throw Error("malformed rational \"" + std::string(text) + "\"");
  return Rational(parse_integer(s));
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const BigInt& z) { return z.get_str(); }

}  // namespace soficlab
