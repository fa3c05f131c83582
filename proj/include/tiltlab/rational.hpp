#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace tiltlab {

using rational = boost::rational<std::int64_t>;

// "a/b", or "a" when the denominator is 1.
std::string to_string(const rational& r);

// Accepts "a", "-a", "a/b".
rational parse_rational(const std::string& text);

inline bool is_integral(const rational& r) { return r.denominator() == 1; }

// boost's mixed int/rational equality recurses under C++20 rewritten
// comparisons; these exact overloads take precedence.
inline bool operator==(const rational& a, int b) { return a == rational(b); }
inline bool operator!=(const rational& a, int b) { return !(a == rational(b)); }

std::int64_t floor_of(const rational& r);
std::int64_t ceil_of(const rational& r);

}  // namespace tiltlab
