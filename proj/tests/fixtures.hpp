#pragma once

#include "cfmm/finite_system.hpp"

#include <initializer_list>
#include <utility>
#include <vector>

namespace fixture {

using cfmm::FiniteMarketSystem;
using cfmm::Rational;
using cfmm::RationalVector;

inline FiniteMarketSystem build(std::vector<std::vector<int>> states,
                                std::vector<std::pair<std::size_t, std::size_t>> edges) {
  std::vector<RationalVector> s;
  for (const auto& row : states) {
    RationalVector v;
    for (int c : row) v.emplace_back(c);
    s.push_back(std::move(v));
  }
  return FiniteMarketSystem(std::move(s), std::move(edges));
}

// States (1,3), (1,4), (2,1), (2,2).
inline constexpr std::size_t k13 = 0, k14 = 1, k21 = 2, k22 = 3;

// a -> b -> c on the line.
inline FiniteMarketSystem chain3() { return build({{0}, {1}, {2}}, {{0, 1}, {1, 2}}); }

// Simplex x1 + x2 = 1 sampled at x1 = 0, 0.5, 1 with y in M(x) iff y1 > x1.
inline FiniteMarketSystem simplex3() {
  std::vector<RationalVector> s = {{Rational(0), Rational(1)},
                                   {Rational(1, 2), Rational(1, 2)},
                                   {Rational(1), Rational(0)}};
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (s[j][0] > s[i][0]) e.emplace_back(i, j);
  return FiniteMarketSystem(std::move(s), std::move(e));
}

// All integer points of {1..4}^2 with x1 x2 in {4, 6}, linked both ways along
// each product level set (a fee-free constant-product pool).
inline FiniteMarketSystem product_levels() {
  std::vector<std::vector<int>> pts;
  for (int a = 1; a <= 6; ++a)
    for (int b = 1; b <= 6; ++b)
      if (a * b == 4 || a * b == 6) pts.push_back({a, b});
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (i != j && pts[i][0] * pts[i][1] == pts[j][0] * pts[j][1]) e.emplace_back(i, j);
  return build(pts, e);
}

// Every coordinatewise increase on {0,1,2}^2 is a transition.
inline FiniteMarketSystem increase_grid() {
  std::vector<std::vector<int>> pts;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b) pts.push_back({a, b});
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (i != j && pts[j][0] >= pts[i][0] && pts[j][1] >= pts[i][1]) e.emplace_back(i, j);
  return build(pts, e);
}

}  // namespace fixture
