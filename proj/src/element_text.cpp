#include "tiltlab/element_text.hpp"

#include <cctype>
#include <sstream>

#include "tiltlab/errors.hpp"

namespace tiltlab {

namespace {

class parser {
 public:
  explicit parser(const std::string& s) : s_(s) {}

  std::vector<parsed_expr> run() {
    std::vector<parsed_expr> out;
    skip();
    if (peek() == '(') {
      ++i_;
      out.push_back(sum());
      skip();
      while (peek() == ',') {
        ++i_;
        out.push_back(sum());
        skip();
      }
      expect(')');
    } else {
      out.push_back(sum());
    }
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return out;
  }

 private:
  char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw parse_error("cannot parse element '" + s_ + "' at offset " + std::to_string(i_) + ": " + why);
  }
  void expect(char c) {
    skip();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }

  std::int64_t integer() {
    skip();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an integer");
    std::int64_t v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (s_[i_++] - '0');
      if (v > (std::int64_t{1} << 52)) fail("integer too large");
    }
    return v;
  }

  rational exponent() {
    skip();
    if (peek() != '{') return rational(integer());
    ++i_;
    skip();
    bool neg = false;
    if (peek() == '-') {
      neg = true;
      ++i_;
    }
    std::int64_t num = integer();
    std::int64_t den = 1;
    skip();
    if (peek() == '/') {
      ++i_;
      den = integer();
      if (den == 0) fail("zero denominator");
    }
    expect('}');
    return rational(neg ? -num : num, den);
  }

  parsed_term term_() {
    parsed_term t;
    bool any = false;
    for (;;) {
      skip();
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::int64_t v = integer();
        __int128 prod = static_cast<__int128>(t.coeff) * v;
        if (prod > (static_cast<__int128>(1) << 62)) fail("coefficient too large");
        t.coeff = static_cast<std::int64_t>(prod);
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        parsed_atom a;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') a.name += s_[i_++];
        skip();
        if (peek() == '^') {
          ++i_;
          a.exp = exponent();
        }
        t.atoms.push_back(a);
      } else {
        fail("expected a coefficient or a name");
      }
      any = true;
      skip();
      if (peek() != '*') break;
      ++i_;
    }
    if (!any) fail("empty term");
    return t;
  }

  parsed_expr sum() {
    parsed_expr e;
    skip();
    bool neg = false;
    if (peek() == '-' || peek() == '+') neg = s_[i_++] == '-';
    for (;;) {
      parsed_term t = term_();
      if (neg) t.coeff = -t.coeff;
      e.push_back(t);
      skip();
      if (peek() != '+' && peek() != '-') break;
      neg = s_[i_++] == '-';
    }
    return e;
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

int var_slot(const std::string& name) {
  if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] < '1' + max_vars) return name[1] - '1';
  return -1;
}

layer_elem component(const layer_ring_ptr& r, std::size_t f, const parsed_expr& expr, const std::string& text) {
  const auto& fac = r->factor(f);
  std::vector<term> ts;
  for (const auto& pt : expr) {
    monomial m;
    std::int64_t t_units = 0;
    bool drop = false;
    for (const auto& a : pt.atoms) {
      if (a.exp < 0) throw parse_error("negative exponent in '" + text + "'");
      if (a.name == "t") {
        rational k = a.exp * fac.eisen_exp;
        if (!is_integral(k))
          throw parse_error("t^{" + to_string(a.exp) + "} is not in the lattice (1/" + std::to_string(fac.eisen_exp) + ")Z");
        t_units += k.numerator();
      } else if (a.name == "T" && r->char_p()) {
        if (!is_integral(a.exp)) throw parse_error("T needs an integer exponent in '" + text + "'");
        t_units += a.exp.numerator();
      } else if (a.name == "p") {
        if (!is_integral(a.exp)) throw parse_error("p needs an integer exponent in '" + text + "'");
        t_units += a.exp.numerator() * fac.eisen_exp;
      } else if (int s = var_slot(a.name); s >= 0) {
        if (s >= fac.num_vars) throw parse_error("variable " + a.name + " is not present in this ring");
        rational k = a.exp * fac.var_den;
        if (!is_integral(k))
          throw parse_error(a.name + "^{" + to_string(a.exp) + "} is not in the lattice (1/" + std::to_string(fac.var_den) + ")Z");
        m.x[s] += static_cast<std::int32_t>(k.numerator());
      } else {
        throw parse_error("unknown name '" + a.name + "' in '" + text + "'");
      }
    }
    if (t_units >= static_cast<std::int64_t>(fac.eisen_exp) * (r->n_digits() + 1)) drop = true;
    if (drop) continue;
    m.t = static_cast<std::int32_t>(t_units);
    ts.push_back({m, r->mod().from_signed(pt.coeff)});
  }
  return layer_elem::from_terms(r, f, ts);
}

std::string coeff_prefix(u64 c, bool has_mono) {
  if (!has_mono) return std::to_string(c);
  if (c == 1) return "";
  return std::to_string(c) + "*";
}

}  // namespace

std::vector<parsed_expr> parse_expression(const std::string& text) { return parser(text).run(); }

layer_elem parse_layer_elem(const layer_ring_ptr& r, const std::string& text) {
  auto comps = parse_expression(text);
  layer_elem out(r);
  if (comps.size() == 1) {
    for (std::size_t f = 0; f < r->num_factors(); ++f) out = out + component(r, f, comps[0], text);
    return out;
  }
  if (comps.size() != r->num_factors())
    throw parse_error("tuple of size " + std::to_string(comps.size()) + " for a ring with " +
                      std::to_string(r->num_factors()) + " factors");
  for (std::size_t f = 0; f < comps.size(); ++f) out = out + component(r, f, comps[f], text);
  return out;
}

std::string terms_text(const std::vector<term>& ts, const layer_factor& f, const std::string& t_name, bool integer_t) {
  if (ts.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : ts) {
    std::vector<std::string> parts;
    if (t.mono.t > 0) {
      if (integer_t)
        parts.push_back(t.mono.t == 1 ? t_name : t_name + "^{" + std::to_string(t.mono.t) + "}");
      else
        parts.push_back(t_name + "^{" + to_string(rational(t.mono.t, f.eisen_exp)) + "}");
    }
    for (int i = 0; i < f.num_vars; ++i) {
      if (!t.mono.x[i]) continue;
      rational e(t.mono.x[i], f.var_den);
      std::string name = "x" + std::to_string(i + 1);
      parts.push_back(e == 1 ? name : name + "^{" + to_string(e) + "}");
    }
    if (!first) os << " + ";
    first = false;
    os << coeff_prefix(t.coeff, !parts.empty());
    for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "*" : "") << parts[i];
  }
  return os.str();
}

// Characteristic-p layers are tilt presentations: integer powers of T.
std::string to_text(const layer_elem& x) {
  const auto& r = x.ring();
  const std::string t_name = r->char_p() ? "T" : "t";
  if (r->num_factors() == 1) return terms_text(x.part(0), r->factor(0), t_name, r->char_p());
  std::string s = "(";
  for (std::size_t f = 0; f < r->num_factors(); ++f) {
    if (f) s += ", ";
    s += terms_text(x.part(f), r->factor(f), t_name, r->char_p());
  }
  return s + ")";
}

std::string to_text(const quot_elem& x) { return to_text(canonical_lift(x)); }

}  // namespace tiltlab
