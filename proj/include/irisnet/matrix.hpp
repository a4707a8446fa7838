// Copyright 2026 The irisnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IRISNET_MATRIX_HPP_
#define IRISNET_MATRIX_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace irisnet {

/// Dense row-major grid. Used for images, masks, kernels and response maps.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int rows, int cols, T fill = T{})
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}
  Grid(int rows, int cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int r, int c) { return data_[index(r, c)]; }
  const T& operator()(int r, int c) const { return data_[index(r, c)]; }

  std::span<T> row(int r) {
    return {data_.data() + index(r, 0), static_cast<std::size_t>(cols_)};
  }
  std::span<const T> row(int r) const {
    return {data_.data() + index(r, 0), static_cast<std::size_t>(cols_)};
  }

  std::vector<T>& values() { return data_; }
  const std::vector<T>& values() const { return data_; }

  template <typename U>
  bool same_shape(const Grid<U>& o) const { return rows_ == o.rows() && cols_ == o.cols(); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using Matrix = Grid<double>;
using BitGrid = Grid<std::uint8_t>;

/// Flat binary vector (iris code bits or sampled mask bits); values are 0 or 1.
using Bits = std::vector<std::uint8_t>;

/// Circular shift along columns: out(r, c) = in(r, (c - k) mod cols).
/// Positive k moves content to the right.
template <typename T>
Grid<T> shift_cols(const Grid<T>& in, int k) {
  Grid<T> out(in.rows(), in.cols());
  const int w = in.cols();
  if (w == 0) return out;
  const int s = ((k % w) + w) % w;
  for (int r = 0; r < in.rows(); ++r) {
    for (int c = 0; c < w; ++c) out(r, (c + s) % w) = in(r, c);
  }
  return out;
}

}  // namespace irisnet

#endif  // IRISNET_MATRIX_HPP_
