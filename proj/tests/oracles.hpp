#pragma once

// Independent reference computations for tests. Deliberately naive.

#include <cmath>
#include <functional>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// Integral over (0, b] through x = b e^{-y}, truncated at y = ymax.
inline double simpson_from_zero(const std::function<double(double)>& f, double b,
                                double ymax = 700.0, int n = 400000) {
  return simpson([&](double y) { return f(b * std::exp(-y)) * b * std::exp(-y); }, 0.0, ymax, n);
}

}  // namespace oracle
