// Copyright 2026 The pacp-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pacp::lp {

enum class Status { kOptimal, kUnbounded };

struct Result {
  Status status = Status::kOptimal;
  std::vector<double> x;
  double objective = 0.0;
};

/// max c'x  s.t.  A x <= b, x >= 0, with b >= 0 so the origin is a basic
/// feasible start. Dense tableau simplex with Bland's rule; intended for
/// the handful of variables in a per-receiver rate problem.
inline Result maximize(const std::vector<double>& c,
                       const std::vector<std::vector<double>>& a,
                       const std::vector<double>& b) {
  const std::size_t n = c.size();
  const std::size_t m = b.size();
  if (a.size() != m) throw std::invalid_argument("lp: row count mismatch");
  for (std::size_t r = 0; r < m; ++r) {
    if (a[r].size() != n) throw std::invalid_argument("lp: column mismatch");
    if (!(b[r] >= 0.0)) throw std::invalid_argument("lp: b must be >= 0");
  }

  // Row r < m: constraint r with slack n + r. Row m: reduced costs.
  const std::size_t width = n + m + 1;
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(width, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t k = 0; k < n; ++k) t[r][k] = a[r][k];
    t[r][n + r] = 1.0;
    t[r][width - 1] = b[r];
    basis[r] = n + r;
  }
  for (std::size_t k = 0; k < n; ++k) t[m][k] = -c[k];

  double scale = 1.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  const double eps = 1e-12 * scale;

  Result res;
  for (;;) {
    std::size_t enter = width;
    for (std::size_t k = 0; k + 1 < width; ++k) {
      if (t[m][k] < -eps) {
        enter = k;
        break;
      }
    }
    if (enter == width) break;

    std::size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
      if (t[r][enter] <= 1e-12) continue;
      const double ratio = t[r][width - 1] / t[r][enter];
      if (ratio < best ||
          (ratio == best && leave < m && basis[r] < basis[leave])) {
        best = ratio;
        leave = r;
      }
    }
    if (leave == m) {
      res.status = Status::kUnbounded;
      return res;
    }

    const double piv = t[leave][enter];
    for (double& v : t[leave]) v /= piv;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == leave || t[r][enter] == 0.0) continue;
      const double f = t[r][enter];
      for (std::size_t k = 0; k < width; ++k) t[r][k] -= f * t[leave][k];
    }
    basis[leave] = enter;
  }

  res.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) res.x[basis[r]] = std::max(0.0, t[r][width - 1]);
  }
  for (std::size_t k = 0; k < n; ++k) res.objective += c[k] * res.x[k];
  return res;
}

}  // namespace pacp::lp
