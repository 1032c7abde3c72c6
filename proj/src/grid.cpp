#include "volterra/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "volterra/error.hpp"

namespace volterra {

TimeGrid TimeGrid::uniform(double horizon, std::size_t cells) {
  if (cells < 2) throw InvalidArgument("grid needs at least 2 cells");
  if (!(horizon > 0.0)) throw InvalidArgument("grid horizon must be positive");
  std::vector<double> nodes(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i)
    nodes[i] = horizon * static_cast<double>(i) / static_cast<double>(cells);
  nodes.back() = horizon;
  return TimeGrid(std::move(nodes));
}

TimeGrid TimeGrid::from_nodes(std::vector<double> nodes) {
  if (nodes.size() < 2) throw InvalidArgument("grid needs at least 2 nodes");
  if (nodes.front() != 0.0) throw InvalidArgument("grid must start at 0");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i] > nodes[i - 1])) throw InvalidArgument("grid nodes must be strictly increasing");
  return TimeGrid(std::move(nodes));
}

TimeGrid TimeGrid::log_spaced(double split, double horizon, double step, std::size_t depth_steps) {
  if (!(split > 0.0) || !(horizon >= split) || !(step > 0.0))
    throw InvalidArgument("log_spaced: need 0 < split <= horizon and step > 0");
  std::vector<double> nodes{0.0};
  for (std::size_t k = depth_steps; k >= 1; --k)
    nodes.push_back(split * std::exp(-static_cast<double>(k) * step));
  nodes.push_back(split);
  const double span = std::log(horizon / split) / step;
  const auto up = static_cast<std::size_t>(std::llround(span));
  if (std::abs(span - static_cast<double>(up)) > 1e-9)
    throw InvalidArgument("log_spaced: horizon/split is not an integer number of steps");
  for (std::size_t k = 1; k <= up; ++k) nodes.push_back(split * std::exp(static_cast<double>(k) * step));
  if (up > 0) nodes.back() = horizon;
  return from_nodes(std::move(nodes));
}

std::vector<double> TimeGrid::widths() const {
  std::vector<double> w(cells());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = width(j);
  return w;
}

bool TimeGrid::is_uniform(double rel_tol) const {
  const double h = horizon() / static_cast<double>(cells());
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (std::abs(nodes_[i] - h * static_cast<double>(i)) > rel_tol * horizon()) return false;
  return true;
}

std::size_t TimeGrid::nearest(double t) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t);
  if (it == nodes_.end()) return nodes_.size() - 1;
  auto i = static_cast<std::size_t>(it - nodes_.begin());
  if (i > 0 && std::abs(nodes_[i - 1] - t) <= std::abs(nodes_[i] - t)) --i;
  return i;
}

std::size_t TimeGrid::index_of(double t) const {
  const std::size_t i = nearest(t);
  if (std::abs(nodes_[i] - t) > 1e-10 * std::max(1.0, std::abs(t)))
    throw InvalidArgument("time " + std::to_string(t) + " is not a grid node");
  return i;
}

TimeGrid TimeGrid::refine() const {
  std::vector<double> nodes;
  nodes.reserve(2 * nodes_.size() - 1);
  for (std::size_t j = 0; j + 1 < nodes_.size(); ++j) {
    nodes.push_back(nodes_[j]);
    nodes.push_back(midpoint(j));
  }
  nodes.push_back(nodes_.back());
  return TimeGrid(std::move(nodes));
}

TimeGrid TimeGrid::refine_origin(std::size_t levels) const {
  if (cells() == 0) throw InvalidArgument("cannot refine an empty grid");
  std::vector<double> nodes{0.0};
  for (std::size_t k = levels; k >= 1; --k) nodes.push_back(std::ldexp(nodes_[1], -static_cast<int>(k)));
  nodes.insert(nodes.end(), nodes_.begin() + 1, nodes_.end());
  return TimeGrid(std::move(nodes));
}

TimeGrid TimeGrid::coarsen(std::size_t factor) const {
  if (factor == 0 || cells() % factor != 0)
    throw InvalidArgument("coarsen factor must divide the cell count");
  std::vector<double> nodes;
  for (std::size_t i = 0; i < nodes_.size(); i += factor) nodes.push_back(nodes_[i]);
  return from_nodes(std::move(nodes));
}

std::vector<std::size_t> standard_subgrid(const TimeGrid& grid, std::size_t count) {
  const std::size_t m = static_cast<std::size_t>(std::llround(grid.horizon() / grid.width(grid.cells() - 1)));
  std::vector<std::size_t> idx;
  for (std::size_t k = 1; k <= count; ++k) {
    const double x = static_cast<double>(k * m) / static_cast<double>(count + 1);
    idx.push_back(grid.index_of(std::round(x) * grid.horizon() / static_cast<double>(m)));
  }
  return idx;
}

std::vector<std::size_t> standard_subgrid(std::size_t cells, std::size_t count) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 1; k <= count; ++k) {
    const double x = static_cast<double>(k * cells) / static_cast<double>(count + 1);
    idx.push_back(static_cast<std::size_t>(std::llround(x)));
  }
  return idx;
}

}  // namespace volterra
