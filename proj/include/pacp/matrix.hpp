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

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <vector>

namespace pacp {

/// Dense row-major N x N matrix indexed by ordered vehicle pair
/// (sender, receiver).
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0)
      : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }

  double& operator()(std::size_t i, std::size_t j) {
    assert(i < n_ && j < n_);
    return data_[i * n_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    assert(i < n_ && j < n_);
    return data_[i * n_ + j];
  }

  double max_abs_diff(const SquareMatrix& other) const {
    assert(other.n_ == n_);
    double m = 0.0;
    for (std::size_t k = 0; k < data_.size(); ++k) {
      m = std::max(m, data_[k] > other.data_[k] ? data_[k] - other.data_[k]
                                                : other.data_[k] - data_[k]);
    }
    return m;
  }

  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

}  // namespace pacp
