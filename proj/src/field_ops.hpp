#pragma once

#include <cstdint>

#include <gmpxx.h>

#include "ssq/exactla.hpp"

namespace ssq::detail {

struct FpOps {
  std::int64_t p;
  using T = std::int64_t;
  bool zero(T a) const { return a == 0; }
  T add(T a, T b) const {
    T s = a + b;
    return s >= p ? s - p : s;
  }
  T sub(T a, T b) const {
    T s = a - b;
    return s < 0 ? s + p : s;
  }
  T mul(T a, T b) const { return static_cast<T>((static_cast<__int128>(a) * b) % p); }
  T inv(T a) const { return mod_inverse(a, p); }
  T neg(T a) const { return a == 0 ? 0 : p - a; }
};

struct QOps {
  using T = mpq_class;
  bool zero(const T& a) const { return sgn(a) == 0; }
  T add(const T& a, const T& b) const { return a + b; }
  T sub(const T& a, const T& b) const { return a - b; }
  T mul(const T& a, const T& b) const { return a * b; }
  T inv(const T& a) const { return T(1) / a; }
  T neg(const T& a) const { return -a; }
};

}  // namespace ssq::detail
