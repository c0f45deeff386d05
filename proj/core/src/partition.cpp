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

#include "fwadv/partition.hpp"

#include <limits>
#include <string>

#include "fwadv/error.hpp"

namespace fwadv {

namespace {

std::string box_str(const GroupBox& b) {
  return "[" + std::to_string(b.c0) + "," + std::to_string(b.c1) + "," + std::to_string(b.r0) +
         "," + std::to_string(b.r1) + "," + std::to_string(b.k0) + "," + std::to_string(b.k1) +
         ")";
}

}  // namespace

GroupPartition::GroupPartition(Shape shape, std::vector<GroupBox> groups)
    : shape_(shape), groups_(std::move(groups)) {
  if (groups_.empty()) throw ValidationError("partition has no groups");
  constexpr std::size_t kUnowned = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> owner(shape_.size(), kUnowned);
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const GroupBox& b = groups_[g];
    if (b.c1 != b.c0 + 1)
      throw ValidationError("group " + std::to_string(g) + " " + box_str(b) +
                            " must span exactly one channel");
    if (b.r0 >= b.r1 || b.k0 >= b.k1)
      throw ValidationError("group " + std::to_string(g) + " " + box_str(b) + " is empty");
    if (b.c1 > shape_.channels || b.r1 > shape_.height || b.k1 > shape_.width)
      throw ValidationError("group " + std::to_string(g) + " " + box_str(b) +
                            " exceeds shape " + shape_.str());
    for (std::size_t r = b.r0; r < b.r1; ++r)
      for (std::size_t k = b.k0; k < b.k1; ++k) {
        std::size_t& o = owner[(b.c0 * shape_.height + r) * shape_.width + k];
        if (o != kUnowned)
          throw ValidationError("groups " + std::to_string(o) + " and " + std::to_string(g) +
                                " overlap");
        o = g;
      }
  }
  for (std::size_t i = 0; i < owner.size(); ++i)
    if (owner[i] == kUnowned)
      throw ValidationError("partition leaves flat coordinate " + std::to_string(i) +
                            " uncovered");
}

GroupPartition GroupPartition::grid(Shape shape, std::size_t tiles_r, std::size_t tiles_c) {
  if (tiles_r == 0 || tiles_c == 0 || tiles_r > shape.height || tiles_c > shape.width)
    throw ValidationError("grid " + std::to_string(tiles_r) + "x" + std::to_string(tiles_c) +
                          " does not fit shape " + shape.str());
  const std::size_t th = shape.height / tiles_r;
  const std::size_t tw = shape.width / tiles_c;
  std::vector<GroupBox> boxes;
  for (std::size_t c = 0; c < shape.channels; ++c)
    for (std::size_t i = 0; i < tiles_r; ++i)
      for (std::size_t j = 0; j < tiles_c; ++j) {
        GroupBox b;
        b.c0 = c;
        b.c1 = c + 1;
        b.r0 = i * th;
        b.r1 = i + 1 == tiles_r ? shape.height : (i + 1) * th;
        b.k0 = j * tw;
        b.k1 = j + 1 == tiles_c ? shape.width : (j + 1) * tw;
        boxes.push_back(b);
      }
  return GroupPartition(shape, std::move(boxes));
}

std::vector<std::size_t> GroupPartition::owner_map() const {
  std::vector<std::size_t> owner(shape_.size(), 0);
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const GroupBox& b = groups_[g];
    for (std::size_t r = b.r0; r < b.r1; ++r)
      for (std::size_t k = b.k0; k < b.k1; ++k)
        owner[(b.c0 * shape_.height + r) * shape_.width + k] = g;
  }
  return owner;
}

}  // namespace fwadv
