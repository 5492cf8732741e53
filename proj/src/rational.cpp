#include "dqs/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace dqs {

namespace {

using BigInt = boost::multiprecision::cpp_int;

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (auto slash = text.find('/'); slash != std::string::npos) {
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den))
      throw std::invalid_argument("bad rational literal: " + text);
    BigInt d(den);
    if (d == 0) throw std::invalid_argument("zero denominator: " + text);
    return Rational(BigInt(num), d);
  }
  if (auto dot = text.find('.'); dot != std::string::npos) {
    const std::string whole = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    if (!is_integer_token(whole.empty() ? "0" : whole) || frac.empty() ||
        !is_integer_token(frac))
      throw std::invalid_argument("bad decimal literal: " + text);
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt w(whole.empty() ? "0" : whole);
    BigInt f(frac);
    const bool neg = !whole.empty() && whole[0] == '-';
    BigInt num = w * scale + (neg ? -f : f);
    return Rational(num, scale);
  }
  if (!is_integer_token(text))
    throw std::invalid_argument("bad rational literal: " + text);
  return Rational(BigInt(text));
}

std::string to_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace dqs
