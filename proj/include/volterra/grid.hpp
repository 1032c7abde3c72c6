#pragma once

#include <cstddef>
#include <vector>

namespace volterra {

// Partition 0 = t_0 < t_1 < ... < t_n of [0, T]. Cell j is [t_j, t_{j+1}).
class TimeGrid {
public:
  TimeGrid() = default;

  static TimeGrid uniform(double horizon, std::size_t cells);
  static TimeGrid from_nodes(std::vector<double> nodes);
  // Geometric nodes around `split`: split*e^{-k*step} for k = 1..depth_steps
  // below it, then split*e^{k*step} up to `horizon` (which must be hit exactly
  // up to rounding). Node 0 is prepended.
  static TimeGrid log_spaced(double split, double horizon, double step, std::size_t depth_steps);

  std::size_t cells() const noexcept { return nodes_.empty() ? 0 : nodes_.size() - 1; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double width(std::size_t j) const { return nodes_[j + 1] - nodes_[j]; }
  double midpoint(std::size_t j) const { return 0.5 * (nodes_[j] + nodes_[j + 1]); }
  double horizon() const { return nodes_.back(); }
  std::vector<double> widths() const;

  bool is_uniform(double rel_tol = 1e-12) const;
  // Index of the node equal to t (relative tolerance 1e-10); throws otherwise.
  std::size_t index_of(double t) const;
  // Nearest node index.
  std::size_t nearest(double t) const;

  TimeGrid refine() const;
  TimeGrid coarsen(std::size_t factor) const;
  // Splits the first cell dyadically: nodes t_1 2^{-k}, k = 1..levels.
  TimeGrid refine_origin(std::size_t levels) const;

private:
  explicit TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {}
  std::vector<double> nodes_;
};

inline TimeGrid make_grid(double horizon, std::size_t cells) {
  return TimeGrid::uniform(horizon, cells);
}

// Interior node indices round(k*n/(count+1)), k = 1..count.
std::vector<std::size_t> standard_subgrid(std::size_t cells, std::size_t count = 8);
// Same times on a grid whose last cell has the base spacing (uniform grids,
// possibly refined at the origin).
std::vector<std::size_t> standard_subgrid(const TimeGrid& grid, std::size_t count = 8);

}  // namespace volterra
