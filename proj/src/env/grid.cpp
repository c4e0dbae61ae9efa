#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include "navevo/error.hpp"
#include "navevo/maze.hpp"
#include "navevo/robot.hpp"

namespace navevo {

Cell OccupancyGrid::cell_of(Vec2 p) const {
  auto idx = [&](double v) {
    return std::clamp(static_cast<int>(std::floor(v / cell_size)), 0, resolution - 1);
  };
  return {idx(p.x), idx(p.y)};
}

Rect OccupancyGrid::cell_rect(Cell c) const {
  return {{c.ix * cell_size, c.iy * cell_size}, {(c.ix + 1) * cell_size, (c.iy + 1) * cell_size}};
}

int default_resolution(double side) { return std::max(10, static_cast<int>(std::lround(side * 10.0))); }

OccupancyGrid rasterize(const Maze& maze, int resolution) {
  if (resolution < 10) throw Error("grid resolution must be at least 10");
  OccupancyGrid grid;
  grid.resolution = resolution;
  grid.cell_size = maze.side / resolution;
  grid.cells.assign(static_cast<std::size_t>(resolution) * resolution, 0);
  const double r = robot::kRadius;
  for (const auto& w : maze.walls) {
    const Cell lo = grid.cell_of({w.min.x - r, w.min.y - r});
    const Cell hi = grid.cell_of({w.max.x + r, w.max.y + r});
    for (int iy = lo.iy; iy <= hi.iy; ++iy) {
      for (int ix = lo.ix; ix <= hi.ix; ++ix) {
        if (distance(grid.cell_rect({ix, iy}), w) < r) {
          grid.cells[static_cast<std::size_t>(iy) * resolution + ix] = 1;
        }
      }
    }
  }
  return grid;
}

double GridPath::length(double cell_size) const {
  return (straight + diagonal * std::numbers::sqrt2) * cell_size;
}

namespace {

struct Open {
  double f;
  double g;
  int index;
  // Min-heap on f, then on g descending (prefer deeper nodes), then index.
  bool operator>(const Open& o) const {
    if (f != o.f) return f > o.f;
    if (g != o.g) return g < o.g;
    return index > o.index;
  }
};

}  // namespace

std::optional<GridPath> grid_shortest_path(const OccupancyGrid& grid, Cell from, Cell to) {
  if (!grid.in_range(from) || !grid.in_range(to)) return std::nullopt;
  const int n = grid.resolution;
  auto index = [n](Cell c) { return c.iy * n + c.ix; };
  auto free = [&](Cell c) {
    return grid.in_range(c) && (!grid.occupied(c) || c == from || c == to);
  };
  auto heuristic = [&](Cell c) {
    const int dx = std::abs(c.ix - to.ix), dy = std::abs(c.iy - to.iy);
    return (std::max(dx, dy) - std::min(dx, dy)) + std::min(dx, dy) * std::numbers::sqrt2;
  };

  const std::size_t total = static_cast<std::size_t>(n) * n;
  std::vector<GridPath> best(total);
  std::vector<double> g(total, INFINITY);
  std::vector<std::uint8_t> closed(total, 0);
  std::priority_queue<Open, std::vector<Open>, std::greater<>> open;

  g[index(from)] = 0.0;
  open.push({heuristic(from), 0.0, index(from)});
  while (!open.empty()) {
    const Open cur = open.top();
    open.pop();
    if (closed[cur.index]) continue;
    closed[cur.index] = 1;
    const Cell c{cur.index % n, cur.index / n};
    if (c == to) return best[cur.index];
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const Cell nb{c.ix + dx, c.iy + dy};
        if (!free(nb)) continue;
        const bool diag = dx != 0 && dy != 0;
        if (diag && (!free({c.ix + dx, c.iy}) || !free({c.ix, c.iy + dy}))) continue;
        const int ni = index(nb);
        if (closed[ni]) continue;
        GridPath p = best[cur.index];
        (diag ? p.diagonal : p.straight) += 1;
        const double ng = p.straight + p.diagonal * std::numbers::sqrt2;
        if (ng < g[ni]) {
          g[ni] = ng;
          best[ni] = p;
          open.push({ng + heuristic(nb), ng, ni});
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<double> astar_length(const OccupancyGrid& grid, Vec2 from, Vec2 to) {
  const auto path = grid_shortest_path(grid, grid.cell_of(from), grid.cell_of(to));
  if (!path) return std::nullopt;
  return path->length(grid.cell_size);
}

std::optional<double> astar_length(const Maze& maze, Vec2 from, Vec2 to, int resolution) {
  return astar_length(rasterize(maze, resolution), from, to);
}

}  // namespace navevo
