#pragma once

#include <gtest/gtest.h>

#include <cmath>
#include <optional>

#include "vfield/core4.hpp"
#include "vfield/errors.hpp"

namespace vfield::testing {

/// Error code raised by fn, or nullopt when it returns normally.
template <class F>
std::optional<ErrorCode> error_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline double dist(Complex a, Complex b) { return std::abs(a - b); }
inline double dist(const FourVector& a, const FourVector& b) { return (a - b).max_abs(); }
inline double dist(const Matrix4& a, const Matrix4& b) { return (a - b).max_abs(); }

}  // namespace vfield::testing

#define EXPECT_VF_ERROR(stmt, code) \
  EXPECT_EQ(::vfield::testing::error_of([&] { (void)(stmt); }), std::optional(code))
