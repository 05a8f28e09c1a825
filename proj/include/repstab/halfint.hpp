#pragma once

#include <cstdint>
#include <string>

namespace repstab {

// Exact half-integer. All tree distances and Gromov products in the Cayley
// tree are multiples of 1/2, so we store twice the value and never touch
// floating point until a caller asks for a double.
struct HalfInt {
  std::int64_t twice = 0;

  constexpr HalfInt() = default;
  constexpr explicit HalfInt(std::int64_t t) : twice(t) {}
  static constexpr HalfInt whole(std::int64_t n) { return HalfInt(2 * n); }

  constexpr bool is_integer() const { return twice % 2 == 0; }
  constexpr double value() const { return static_cast<double>(twice) / 2.0; }

  friend constexpr bool operator==(HalfInt a, HalfInt b) { return a.twice == b.twice; }
  friend constexpr bool operator!=(HalfInt a, HalfInt b) { return a.twice != b.twice; }
  friend constexpr bool operator<(HalfInt a, HalfInt b) { return a.twice < b.twice; }
  friend constexpr bool operator<=(HalfInt a, HalfInt b) { return a.twice <= b.twice; }
  friend constexpr bool operator>(HalfInt a, HalfInt b) { return a.twice > b.twice; }
  friend constexpr bool operator>=(HalfInt a, HalfInt b) { return a.twice >= b.twice; }
  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return HalfInt(a.twice + b.twice); }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return HalfInt(a.twice - b.twice); }
  friend constexpr HalfInt operator*(std::int64_t n, HalfInt a) { return HalfInt(n * a.twice); }
};

// Renders "3" or "7/2".
inline std::string to_string(HalfInt h) {
  if (h.is_integer()) return std::to_string(h.twice / 2);
  return std::to_string(h.twice) + "/2";
}

}  // namespace repstab
