#pragma once

#include <random>

#include "gdl/tf_core.hpp"

namespace gdl::testing {

inline Signal random_signal(const SignalGrid& grid, std::mt19937_64& rng, bool unit = true) {
  std::normal_distribution<double> n(0.0, 1.0);
  Signal s(grid);
  for (int j = 0; j < grid.L; ++j) s[j] = Complex(n(rng), n(rng));
  if (unit) s *= Complex(1.0 / s.norm());
  return s;
}

// A well-localized signal: a few random time-frequency shifts of the
// Gaussian window near the origin with random complex weights.
inline Signal localized_signal(const SignalGrid& grid, std::mt19937_64& rng, int terms = 3) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const Window g = gaussian_window(grid);
  Signal s(grid);
  for (int k = 0; k < terms; ++k) s += Complex(u(rng), u(rng)) * tf_shift(g.signal(), {u(rng), u(rng)});
  return s;
}

inline double max_abs_diff(const Signal& a, const Signal& b) {
  double m = 0.0;
  for (int j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace gdl::testing
