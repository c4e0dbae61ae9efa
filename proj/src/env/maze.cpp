#include <cmath>

#include "navevo/error.hpp"
#include "navevo/maze.hpp"
#include "navevo/robot.hpp"
#include "navevo/text.hpp"

namespace navevo {

std::vector<Rect> perimeter_walls(double side) {
  const double t = kWallThickness;
  return {
      Rect{{0.0, 0.0}, {side, t}},
      Rect{{0.0, side - t}, {side, side}},
      Rect{{0.0, t}, {t, side - t}},
      Rect{{side - t, t}, {side, side - t}},
  };
}

Maze empty_maze(double side, Pose start, Vec2 target) {
  Maze m;
  m.side = side;
  m.walls = perimeter_walls(side);
  m.start = start;
  m.target = target;
  return m;
}

bool point_in_free_space(const Maze& maze, Vec2 p, double clearance) {
  if (p.x - clearance < 0.0 || p.y - clearance < 0.0 || p.x + clearance > maze.side ||
      p.y + clearance > maze.side) {
    return false;
  }
  for (const auto& w : maze.walls) {
    if (distance(w, p) < clearance) return false;
  }
  return true;
}

void validate(const Maze& maze) {
  if (!(maze.side > 4.0 * robot::kRadius)) throw Error("maze side too small");
  for (const auto& w : maze.walls) {
    if (!(w.min.x <= w.max.x && w.min.y <= w.max.y)) throw Error("wall with inverted corners");
    if (w.min.x < 0.0 || w.min.y < 0.0 || w.max.x > maze.side || w.max.y > maze.side) {
      throw Error("wall outside bounds");
    }
  }
  // Every perimeter strip must be covered by some wall.
  for (const auto& p : perimeter_walls(maze.side)) {
    bool covered = false;
    for (const auto& w : maze.walls) {
      if (w.min.x <= p.min.x && w.min.y <= p.min.y && w.max.x >= p.max.x && w.max.y >= p.max.y) {
        covered = true;
        break;
      }
    }
    if (!covered) throw Error("perimeter wall missing");
  }
  if (!point_in_free_space(maze, maze.start.position(), robot::kRadius)) {
    throw Error("start pose not in free space");
  }
  if (!point_in_free_space(maze, maze.target, robot::kRadius)) throw Error("target not in free space");
}

Maze quantized(Maze maze) {
  auto q = [](double v) { return text::quantize(v, 6); };
  maze.side = q(maze.side);
  for (auto& w : maze.walls) {
    w.min = {q(w.min.x), q(w.min.y)};
    w.max = {q(w.max.x), q(w.max.y)};
  }
  maze.start = {q(maze.start.x), q(maze.start.y), q(maze.start.theta)};
  maze.target = {q(maze.target.x), q(maze.target.y)};
  return maze;
}

}  // namespace navevo
