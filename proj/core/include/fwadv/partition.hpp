// Copyright 2026 The fwadv Authors.
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

#include <cstddef>
#include <vector>

#include "fwadv/tensor.hpp"

namespace fwadv {

/// Half-open axis-aligned box [c0,c1) x [r0,r1) x [k0,k1) of pixel coordinates.
/// Groups used by the nuclear group norms span exactly one channel.
struct GroupBox {
  std::size_t c0 = 0, c1 = 0;
  std::size_t r0 = 0, r1 = 0;
  std::size_t k0 = 0, k1 = 0;

  std::size_t channel() const noexcept { return c0; }
  std::size_t rows() const noexcept { return r1 - r0; }
  std::size_t cols() const noexcept { return k1 - k0; }
  std::size_t size() const noexcept { return (c1 - c0) * rows() * cols(); }
  bool contains(std::size_t c, std::size_t r, std::size_t k) const noexcept {
    return c >= c0 && c < c1 && r >= r0 && r < r1 && k >= k0 && k < k1;
  }
  friend bool operator==(const GroupBox&, const GroupBox&) = default;
};

/// Disjoint cover of a tensor shape by single-channel rectangles.
class GroupPartition {
 public:
  GroupPartition() = default;
  /// Validates the boxes against `shape`; throws ValidationError unless they
  /// are nonempty, single-channel, pairwise disjoint and cover every pixel.
  GroupPartition(Shape shape, std::vector<GroupBox> groups);

  /// Regular tiles_r x tiles_c tiling of each channel; the last row/column
  /// of tiles absorbs any remainder.
  static GroupPartition grid(Shape shape, std::size_t tiles_r, std::size_t tiles_c);

  const Shape& shape() const noexcept { return shape_; }
  const std::vector<GroupBox>& groups() const noexcept { return groups_; }
  std::size_t size() const noexcept { return groups_.size(); }
  const GroupBox& operator[](std::size_t g) const { return groups_[g]; }
  bool empty() const noexcept { return groups_.empty(); }

  /// Group index owning each flat coordinate.
  std::vector<std::size_t> owner_map() const;

  friend bool operator==(const GroupPartition&, const GroupPartition&) = default;

 private:
  Shape shape_;
  std::vector<GroupBox> groups_;
};

}  // namespace fwadv
