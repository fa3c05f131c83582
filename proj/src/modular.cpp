#include "tiltlab/modular.hpp"

#include <string>

#include "tiltlab/errors.hpp"

namespace tiltlab {

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

u64 checked_power(u64 p, int k) {
  u64 r = 1;
  for (int i = 0; i < k; ++i) {
    if (r > (u64{1} << 63) / p) throw spec_error("p^" + std::to_string(k) + " overflows 63 bits");
    r *= p;
  }
  return r;
}

modulus::modulus(u64 prime, int digits) : p(prime), n(digits), m(checked_power(prime, digits)) {
  if (!is_prime(prime)) throw non_prime(std::to_string(prime) + " is not prime");
}

u64 modulus::pow(u64 a, u64 e) const {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

u64 modulus::inv(u64 a) const {
  // extended Euclid on (a, m)
  std::int64_t t = 0, nt = 1;
  std::int64_t r = static_cast<std::int64_t>(m), nr = static_cast<std::int64_t>(a % m);
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::int64_t tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw error("modular inverse of a non-unit");
  return t < 0 ? static_cast<u64>(t + static_cast<std::int64_t>(m)) : static_cast<u64>(t);
}

int modulus::val(u64 a) const {
  a %= m;
  if (a == 0) return n;
  int v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

u64 modulus::from_signed(std::int64_t a) const {
  std::int64_t r = a % static_cast<std::int64_t>(m);
  if (r < 0) r += static_cast<std::int64_t>(m);
  return static_cast<u64>(r);
}

u64 modulus::p_power(int k) const {
  if (k >= n) return 0;
  u64 r = 1;
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

}  // namespace tiltlab
