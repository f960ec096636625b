#pragma once

#include <compare>
#include <stdexcept>
#include <string>

namespace spindir {

// Exact half-integer quantum number, stored as twice its value. Keeps
// j, m, k, J, L, M arithmetic free of floating-point rounding.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  constexpr HalfInt(int whole) : twice_(2 * whole) {}  // intentionally implicit

  static constexpr HalfInt from_twice(int twice) {
    HalfInt h;
    h.twice_ = twice;
    return h;
  }
  static constexpr HalfInt half() { return from_twice(1); }

  constexpr int twice() const { return twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  constexpr double value() const { return 0.5 * twice_; }

  // Exact integer value; throws when the number is half-odd.
  constexpr int to_int() const {
    if (!is_integer()) throw std::domain_error("HalfInt: not an integer");
    return twice_ / 2;
  }

  constexpr auto operator<=>(const HalfInt&) const = default;

  constexpr HalfInt operator-() const { return from_twice(-twice_); }
  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) {
    return from_twice(a.twice_ + b.twice_);
  }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) {
    return from_twice(a.twice_ - b.twice_);
  }
  constexpr HalfInt& operator+=(HalfInt o) {
    twice_ += o.twice_;
    return *this;
  }
  constexpr HalfInt& operator-=(HalfInt o) {
    twice_ -= o.twice_;
    return *this;
  }

 private:
  int twice_ = 0;
};

constexpr HalfInt abs(HalfInt x) { return x.twice() < 0 ? -x : x; }

// True when a - b is an integer, i.e. both live on the same multiplet ladder.
constexpr bool same_ladder(HalfInt a, HalfInt b) { return (a - b).is_integer(); }

inline std::string to_string(HalfInt x) {
  if (x.is_integer()) return std::to_string(x.to_int());
  return std::to_string(x.twice()) + "/2";
}

}  // namespace spindir
