#include "gwa/simplex.hpp"

#include <cstddef>
#include <stdexcept>

namespace gwa {

std::optional<std::vector<Rat>> feasible_point(std::vector<std::vector<Rat>> A,
                                               std::vector<Rat> b) {
  std::size_t m = A.size();
  if (b.size() != m) throw std::invalid_argument("row count mismatch");
  std::size_t n = m == 0 ? 0 : A[0].size();
  for (const auto& row : A)
    if (row.size() != n) throw std::invalid_argument("ragged matrix");
  if (m == 0) return std::vector<Rat>(n, Rat(0));

  for (std::size_t i = 0; i < m; ++i)
    if (b[i] < 0) {
      b[i] = -b[i];
      for (auto& v : A[i]) v = -v;
    }

  // Tableau over original columns plus one artificial per row; phase one
  // minimizes the artificial sum.
  std::size_t cols = n + m;
  std::vector<std::vector<Rat>> T(m, std::vector<Rat>(cols + 1, Rat(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
    T[i][n + i] = 1;
    T[i][cols] = b[i];
    basis[i] = n + i;
  }
  // Reduced-cost row, priced out for the artificial basis.
  std::vector<Rat> obj(cols + 1, Rat(0));
  for (std::size_t j = 0; j <= cols; ++j) {
    Rat s(0);
    for (std::size_t i = 0; i < m; ++i) s += T[i][j];
    obj[j] = (j >= n && j < cols ? Rat(1) : Rat(0)) - s;
  }

  while (true) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j)
      if (obj[j] < 0) {
        enter = j;
        break;
      }
    if (enter == cols) break;
    std::size_t leave = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (T[i][enter] <= 0) continue;
      if (leave == m) {
        leave = i;
        continue;
      }
      Rat lhs = T[i][cols] * T[leave][enter];
      Rat rhs = T[leave][cols] * T[i][enter];
      if (lhs < rhs || (lhs == rhs && basis[i] < basis[leave])) leave = i;
    }
    if (leave == m)
      throw std::logic_error("phase-one objective unbounded");  // cannot happen
    Rat piv = T[leave][enter];
    for (auto& v : T[leave]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || T[i][enter] == 0) continue;
      Rat f = T[i][enter];
      for (std::size_t j = 0; j <= cols; ++j) T[i][j] -= f * T[leave][j];
    }
    if (obj[enter] != 0) {
      Rat f = obj[enter];
      for (std::size_t j = 0; j <= cols; ++j) obj[j] -= f * T[leave][j];
    }
    basis[leave] = enter;
  }

  // Objective value is -obj[rhs]; zero means every artificial was driven out
  // of the solution value.
  if (obj[cols] != 0) return std::nullopt;
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] >= n && T[i][cols] != 0) return std::nullopt;

  std::vector<Rat> x(n, Rat(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = T[i][cols];
  return x;
}

}  // namespace gwa
