// Copyright 2026 The geo-attitude Authors
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
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "geo_attitude/so3.hpp"

namespace geo_attitude {

/// Open geodesic ball {R : d(R, center) < radius} with 0 < radius < pi/2.
class Cell {
 public:
  /// Throws Error(kValidationError) unless 0 < radius < pi/2.
  Cell(const Rotation& center, double radius);

  const Rotation& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Rotation center_;
  double radius_;
};

bool contains(const Cell& cell, const Rotation& r);

/// Cell centers sharing one radius. Indices are 0-based.
class SamplingSet {
 public:
  /// Throws Error(kValidationError) on an empty list, an invalid radius, or
  /// coincident centers.
  SamplingSet(std::vector<Rotation> centers, double radius);

  std::size_t size() const { return centers_.size(); }
  double radius() const { return radius_; }
  const Rotation& center(std::size_t i) const { return centers_.at(i); }
  const std::vector<Rotation>& centers() const { return centers_; }
  Cell cell(std::size_t i) const { return Cell(centers_.at(i), radius_); }

 private:
  std::vector<Rotation> centers_;
  double radius_;
};

/// All j != i with d(R_i, R_j) < 2 theta, ascending.
std::vector<std::size_t> neighborhood(const SamplingSet& set, std::size_t i);

/// Adjacency graph: (i, j) is an edge iff the open cells intersect, i.e.
/// d(R_i, R_j) < 2 theta.
class CellGraph {
 public:
  explicit CellGraph(const SamplingSet& set);

  std::size_t size() const { return adjacency_.size(); }
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return adjacency_.at(i); }
  bool has_edge(std::size_t i, std::size_t j) const;
  /// Each undirected edge once, as (i, j) with i < j.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

 private:
  std::vector<std::vector<std::size_t>> adjacency_;
};

struct SamplingReport {
  bool every_cell_has_neighbor = true;     // condition i
  bool centers_outside_other_cells = true; // condition ii
  bool neighbor_distances_in_range = true; // condition iii
  double coverage_fraction = 0.0;          // condition iv, Monte Carlo
  std::size_t coverage_samples = 0;
  std::vector<std::string> issues;

  bool structural_ok() const {
    return every_cell_has_neighbor && centers_outside_other_cells && neighbor_distances_in_range;
  }
  bool covers_so3() const { return coverage_fraction >= 1.0; }
};

/// Checks the structural sampling conditions exactly and estimates coverage
/// of SO(3) from `coverage_samples` Haar-uniform draws. Never throws for
/// condition failures; they are listed in `issues`.
SamplingReport validate_sampling(const SamplingSet& set, std::size_t coverage_samples = 100000,
                                 std::uint64_t seed = 0);

/// Haar-uniform rotation (normalized Gaussian quaternion).
Rotation uniform_rotation(std::mt19937_64& rng);

/// Haar-uniform rotation inside the open cell.
Rotation uniform_rotation_in_cell(const Cell& cell, std::mt19937_64& rng);

struct CellSequence {
  std::vector<std::size_t> indices;
  Rotation start;
  Rotation goal;

  std::size_t length() const { return indices.size(); }
};

/// Fewest-hop chain of adjacent cells from a cell containing `start` to a
/// cell containing `goal`. Among equally short chains the lowest start index
/// wins, then the lowest goal index, then breadth-first discovery order.
///
/// Throws Error(kNotCovered) if either attitude lies in no cell and
/// Error(kDisconnected) if no chain exists.
CellSequence plan_sequence(const CellGraph& graph, const SamplingSet& set, const Rotation& start,
                           const Rotation& goal);

}  // namespace geo_attitude
