#include "tiltlab/rational.hpp"

#include <cctype>

#include "tiltlab/errors.hpp"

namespace tiltlab {

std::string to_string(const rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::int64_t parse_int(const std::string& s, const std::string& whole) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
  if (i == s.size()) throw parse_error("bad rational: '" + whole + "'");
  std::int64_t v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw parse_error("bad rational: '" + whole + "'");
    v = v * 10 + (s[i] - '0');
    if (v > (std::int64_t{1} << 52)) throw parse_error("rational out of range: '" + whole + "'");
  }
  return neg ? -v : v;
}

std::string strip(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

rational parse_rational(const std::string& text) {
  std::string s = strip(text);
  auto slash = s.find('/');
  if (slash == std::string::npos) return rational(parse_int(s, text));
  std::int64_t num = parse_int(strip(s.substr(0, slash)), text);
  std::int64_t den = parse_int(strip(s.substr(slash + 1)), text);
  if (den == 0) throw parse_error("zero denominator: '" + text + "'");
  return rational(num, den);
}

std::int64_t floor_of(const rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() < 0 && q * r.denominator() != r.numerator()) --q;
  return q;
}

std::int64_t ceil_of(const rational& r) { return -floor_of(-r); }

}  // namespace tiltlab
