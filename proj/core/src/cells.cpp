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

#include "geo_attitude/cells.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

#include "geo_attitude/errors.hpp"

namespace geo_attitude {

namespace {

// Angular distance that reports pi for antipodal pairs instead of throwing;
// every comparison here is against at most 2 theta < pi.
double separation(const Rotation& a, const Rotation& b) {
  const double trace = (a.matrix().transpose() * b.matrix()).trace();
  if (trace + 1.0 <= kAntipodalTolerance) return std::numbers::pi;
  return angular_distance(a, b);
}

}  // namespace

Cell::Cell(const Rotation& center, double radius) : center_(center), radius_(radius) {
  if (!(radius > 0.0 && radius < std::numbers::pi / 2.0)) {
    std::ostringstream msg;
    msg << "cell radius must lie in (0, pi/2), got " << radius;
    throw Error(ErrorCode::kValidationError, msg.str());
  }
}

bool contains(const Cell& cell, const Rotation& r) {
  return separation(r, cell.center()) < cell.radius();
}

SamplingSet::SamplingSet(std::vector<Rotation> centers, double radius)
    : centers_(std::move(centers)), radius_(radius) {
  if (centers_.empty()) {
    throw Error(ErrorCode::kValidationError, "sampling set has no cells");
  }
  Cell probe(centers_.front(), radius_);  // validates the radius
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    for (std::size_t j = i + 1; j < centers_.size(); ++j) {
      if (chordal_distance(centers_[i], centers_[j]) < 1e-12) {
        std::ostringstream msg;
        msg << "cell centers " << i << " and " << j << " coincide";
        throw Error(ErrorCode::kValidationError, msg.str());
      }
    }
  }
}

std::vector<std::size_t> neighborhood(const SamplingSet& set, std::size_t i) {
  std::vector<std::size_t> out;
  const Rotation& ci = set.center(i);
  for (std::size_t j = 0; j < set.size(); ++j) {
    if (j == i) continue;
    if (separation(ci, set.center(j)) < 2.0 * set.radius()) out.push_back(j);
  }
  return out;
}

CellGraph::CellGraph(const SamplingSet& set) : adjacency_(set.size()) {
  for (std::size_t i = 0; i < set.size(); ++i) adjacency_[i] = neighborhood(set, i);
}

bool CellGraph::has_edge(std::size_t i, std::size_t j) const {
  const auto& n = adjacency_.at(i);
  return std::binary_search(n.begin(), n.end(), j);
}

std::vector<std::pair<std::size_t, std::size_t>> CellGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < adjacency_.size(); ++i) {
    for (std::size_t j : adjacency_[i]) {
      if (i < j) out.emplace_back(i, j);
    }
  }
  return out;
}

Rotation uniform_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Quaterniond q;
  double n = 0.0;
  do {
    q = Eigen::Quaterniond(normal(rng), normal(rng), normal(rng), normal(rng));
    n = q.norm();
  } while (n < 1e-12);
  q.coeffs() /= n;
  return Rotation::nearest(q.toRotationMatrix());
}

Rotation uniform_rotation_in_cell(const Cell& cell, std::mt19937_64& rng) {
  // Haar density in the rotation angle psi is proportional to sin^2(psi / 2).
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double theta = cell.radius();
  const double peak = std::pow(std::sin(theta / 2.0), 2);
  double psi = 0.0;
  for (;;) {
    psi = theta * unit(rng);
    if (unit(rng) * peak < std::pow(std::sin(psi / 2.0), 2)) break;
  }
  Vector3 axis;
  do {
    axis = Vector3(normal(rng), normal(rng), normal(rng));
  } while (axis.norm() < 1e-12);
  axis.normalize();
  return cell.center() * exp_so3(psi * axis);
}

SamplingReport validate_sampling(const SamplingSet& set, std::size_t coverage_samples,
                                 std::uint64_t seed) {
  SamplingReport report;
  const double theta = set.radius();
  const std::size_t n = set.size();

  for (std::size_t i = 0; i < n; ++i) {
    const auto nbrs = neighborhood(set, i);
    if (nbrs.empty()) {
      report.every_cell_has_neighbor = false;
      report.issues.push_back("cell " + std::to_string(i) + " has an empty neighborhood");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = separation(set.center(i), set.center(j));
      if (d < theta) {
        report.centers_outside_other_cells = false;
        if (i < j) {
          report.issues.push_back("center " + std::to_string(j) + " lies inside cell " +
                                  std::to_string(i));
        }
      }
    }
    for (std::size_t j : nbrs) {
      const double d = separation(set.center(i), set.center(j));
      if (!(d > theta && d < 2.0 * theta) && i < j) {
        report.neighbor_distances_in_range = false;
        std::ostringstream msg;
        msg << "neighbors " << i << " and " << j << " at distance " << d
            << " outside (theta, 2 theta)";
        report.issues.push_back(msg.str());
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::size_t covered = 0;
  for (std::size_t k = 0; k < coverage_samples; ++k) {
    const Rotation r = uniform_rotation(rng);
    for (std::size_t i = 0; i < n; ++i) {
      // Antipodal samples never fall inside a cell; skip the log there.
      if (r.matrix().cwiseProduct(set.center(i).matrix()).sum() < -1.0 + kAntipodalTolerance) {
        continue;
      }
      if (separation(r, set.center(i)) < theta) {
        ++covered;
        break;
      }
    }
  }
  report.coverage_samples = coverage_samples;
  report.coverage_fraction =
      coverage_samples == 0 ? 0.0 : static_cast<double>(covered) / coverage_samples;
  if (report.coverage_fraction < 1.0) {
    std::ostringstream msg;
    msg << "cells cover an estimated fraction " << report.coverage_fraction
        << " of SO(3) (partial region)";
    report.issues.push_back(msg.str());
  }
  return report;
}

namespace {

struct BfsTree {
  std::vector<std::size_t> distance;
  std::vector<std::size_t> parent;
};

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

BfsTree breadth_first(const CellGraph& graph, std::size_t source) {
  BfsTree tree{std::vector<std::size_t>(graph.size(), kUnreached),
               std::vector<std::size_t>(graph.size(), kUnreached)};
  std::queue<std::size_t> frontier;
  tree.distance[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const std::size_t i = frontier.front();
    frontier.pop();
    for (std::size_t j : graph.neighbors(i)) {
      if (tree.distance[j] != kUnreached) continue;
      tree.distance[j] = tree.distance[i] + 1;
      tree.parent[j] = i;
      frontier.push(j);
    }
  }
  return tree;
}

std::vector<std::size_t> containing_cells(const SamplingSet& set, const Rotation& r) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (r.matrix().cwiseProduct(set.center(i).matrix()).sum() < -1.0 + kAntipodalTolerance) {
      continue;
    }
    if (contains(set.cell(i), r)) out.push_back(i);
  }
  return out;
}

}  // namespace

CellSequence plan_sequence(const CellGraph& graph, const SamplingSet& set, const Rotation& start,
                           const Rotation& goal) {
  const auto sources = containing_cells(set, start);
  if (sources.empty()) throw Error(ErrorCode::kNotCovered, "start attitude lies in no cell");
  const auto targets = containing_cells(set, goal);
  if (targets.empty()) throw Error(ErrorCode::kNotCovered, "goal attitude lies in no cell");

  std::size_t best_distance = kUnreached;
  std::size_t best_target = kUnreached;
  BfsTree best_tree;
  for (std::size_t s : sources) {
    BfsTree tree = breadth_first(graph, s);
    for (std::size_t t : targets) {
      if (tree.distance[t] < best_distance) {
        best_distance = tree.distance[t];
        best_target = t;
        best_tree = tree;
      }
    }
  }
  if (best_distance == kUnreached) {
    throw Error(ErrorCode::kDisconnected, "no chain of adjacent cells joins start and goal");
  }

  CellSequence seq{{}, start, goal};
  for (std::size_t v = best_target; v != kUnreached; v = best_tree.parent[v]) {
    seq.indices.push_back(v);
  }
  std::reverse(seq.indices.begin(), seq.indices.end());
  return seq;
}

}  // namespace geo_attitude
