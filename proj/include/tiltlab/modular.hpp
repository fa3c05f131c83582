#pragma once

#include <cstdint>
#include <vector>

namespace tiltlab {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

bool is_prime(u64 n);

// Z/p^n with p^n < 2^63.
struct modulus {
  u64 p = 2;
  int n = 1;
  u64 m = 2;

  modulus() = default;
  modulus(u64 prime, int digits);

  u64 add(u64 a, u64 b) const { u64 s = a + b; return s >= m ? s - m : s; }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + m - b; }
  u64 neg(u64 a) const { return a == 0 ? 0 : m - a; }
  u64 mul(u64 a, u64 b) const { return static_cast<u64>((u128)a * b % m); }
  u64 pow(u64 a, u64 e) const;
  // inverse of a unit (a coprime to p)
  u64 inv(u64 a) const;
  // p-adic valuation; returns n for 0
  int val(u64 a) const;
  u64 from_signed(std::int64_t a) const;
  u64 p_power(int k) const;  // p^k mod m (0 when k >= n)

  bool operator==(const modulus& o) const { return p == o.p && n == o.n; }
};

// p^k as an exact integer; throws spec_error on overflow past 2^63.
u64 checked_power(u64 p, int k);

}  // namespace tiltlab
