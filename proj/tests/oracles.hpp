#pragma once

// Independent reference implementations used only by the tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<long double>>;

/// Determinant by Gaussian elimination with partial pivoting.
inline long double det(Matrix a) {
  const std::size_t n = a.size();
  long double d = 1.0L;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
    }
    if (a[p][c] == 0.0L) return 0.0L;
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const long double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return d;
}

inline long double vandermonde(const std::vector<double>& z) {
  long double v = 1.0L;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) v *= static_cast<long double>(z[i]) - z[j];
  }
  return v;
}

/// det{exp(-pi_i z_j)} / (Delta(pi) Delta(z)) straight from the definition.
inline long double h_direct(const std::vector<double>& pi, const std::vector<double>& z) {
  Matrix m(pi.size(), std::vector<long double>(z.size()));
  for (std::size_t i = 0; i < pi.size(); ++i) {
    for (std::size_t j = 0; j < z.size(); ++j) m[i][j] = std::exp(-static_cast<long double>(pi[i]) * z[j]);
  }
  return det(m) / (vandermonde(pi) * vandermonde(z));
}

/// det{a_i^{lambda_j + N - j}} / det{a_i^{N - j}}.
inline long double bialternant(const std::vector<std::int64_t>& lambda, const std::vector<double>& a) {
  const std::size_t n = a.size();
  Matrix num(n, std::vector<long double>(n)), den(n, std::vector<long double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto shift = static_cast<long double>(n - 1 - j);
      const long double part = j < lambda.size() ? static_cast<long double>(lambda[j]) : 0.0L;
      num[i][j] = std::pow(static_cast<long double>(a[i]), part + shift);
      den[i][j] = std::pow(static_cast<long double>(a[i]), shift);
    }
  }
  return det(num) / det(den);
}

/// Maximum up-right path sum from (0,0) to (rows-1, cols-1), listing every path as a
/// bitmask of down moves.
inline double lpp_paths(const std::vector<std::vector<double>>& w) {
  const std::size_t rows = w.size(), cols = w[0].size(), steps = rows + cols - 2;
  double best = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << steps); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != rows - 1) continue;
    std::size_t i = 0, j = 0;
    double s = w[0][0];
    for (std::size_t k = 0; k < steps; ++k) {
      if (mask & (1u << k)) ++i; else ++j;
      s += w[i][j];
    }
    best = std::max(best, s);
  }
  return best;
}

/// Classical RSK by row bumping. Column j of xi contributes xi[i][j] copies of letter
/// i + 1. Returns, after each column, the GT pattern of the insertion tableau:
/// level k holds the shape of the entries <= k + 1.
inline std::vector<std::vector<std::vector<double>>> rsk_bumping(
    const std::vector<std::vector<int>>& xi) {
  const std::size_t rows = xi.size(), cols = xi[0].size();
  std::vector<std::vector<int>> tableau;
  std::vector<std::vector<std::vector<double>>> out;
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) {
      for (int c = 0; c < xi[i][j]; ++c) {
        int letter = static_cast<int>(i) + 1;
        for (std::size_t r = 0;; ++r) {
          if (r == tableau.size()) {
            tableau.push_back({letter});
            break;
          }
          auto& row = tableau[r];
          auto it = std::upper_bound(row.begin(), row.end(), letter);
          if (it == row.end()) {
            row.push_back(letter);
            break;
          }
          std::swap(*it, letter);
        }
      }
    }
    std::vector<std::vector<double>> pattern(rows);
    for (std::size_t k = 0; k < rows; ++k) {
      pattern[k].assign(k + 1, 0.0);
      for (std::size_t r = 0; r < tableau.size() && r <= k; ++r) {
        pattern[k][r] = static_cast<double>(
            std::count_if(tableau[r].begin(), tableau[r].end(),
                          [&](int v) { return v <= static_cast<int>(k) + 1; }));
      }
    }
    out.push_back(pattern);
  }
  return out;
}

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Regularized lower incomplete gamma for integer shape: P(k, x) = 1 - e^{-x} sum_{m<k} x^m/m!.
inline double gamma_cdf_int(int k, double x) {
  if (x <= 0.0) return 0.0;
  double term = 1.0, sum = 1.0;
  for (int m = 1; m < k; ++m) {
    term *= x / m;
    sum += term;
  }
  return 1.0 - std::exp(-x) * sum;
}

}  // namespace oracle
