#pragma once

#include "netref/linalg.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace netref::testing {

inline ::testing::AssertionResult vectors_near(const Vector& a, const Vector& b, double tol) {
  if (a.size() != b.size()) {
    return ::testing::AssertionFailure() << "sizes " << a.size() << " and " << b.size();
  }
  for (Index i = 0; i < a.size(); ++i) {
    if (!(std::abs(a(i) - b(i)) <= tol)) {
      return ::testing::AssertionFailure()
             << "entry " << i << ": " << a(i) << " vs " << b(i) << " (tol " << tol << ")";
    }
  }
  return ::testing::AssertionSuccess();
}

inline ::testing::AssertionResult relatively_near(double a, double b, double rel) {
  const double scale = std::max({1e-300, std::abs(a), std::abs(b)});
  if (std::abs(a - b) <= rel * scale) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << a << " vs " << b << " (relative tol " << rel << ")";
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace netref::testing
