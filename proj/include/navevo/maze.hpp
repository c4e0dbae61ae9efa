#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "navevo/geometry.hpp"

namespace navevo {

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Vec2 position() const { return {x, y}; }
  friend bool operator==(const Pose&, const Pose&) = default;
};

/// Square indoor environment made of axis-aligned wall rectangles. The
/// perimeter walls lie inside [0, side]^2.
struct Maze {
  double side = 0.0;
  std::vector<Rect> walls;
  Pose start;
  Vec2 target;

  friend bool operator==(const Maze&, const Maze&) = default;
};

inline constexpr double kWallThickness = 0.1;

/// Four perimeter walls of thickness kWallThickness.
std::vector<Rect> perimeter_walls(double side);

/// Maze with only the perimeter walls.
Maze empty_maze(double side, Pose start, Vec2 target);

/// True iff the disc of radius `clearance` at p overlaps no wall and lies
/// within the bounds.
bool point_in_free_space(const Maze& maze, Vec2 p, double clearance);

/// Throws navevo::Error describing the first violated structural invariant
/// (bounds, perimeter, start/target clearance). Path existence is checked by
/// the generator, not here.
void validate(const Maze& maze);

// --- procedural generation -------------------------------------------------

struct MazeParams {
  double side_m = 14.0;
  double room_density = 0.8;
  double loop_probability = 1.0;
};

/// Recursive-division room layout with door gaps. Every divider gets one door
/// plus one extra-door chance per 4 m, each taken with `loop_probability`;
/// the extra doors make the free space non-simply-connected. Start and target
/// are sampled in free space and the pair is accepted only if the A* oracle
/// finds a path. Pure function of (params, seed).
Maze generate_maze(const MazeParams& params, std::uint64_t seed);

// --- occupancy and shortest paths --------------------------------------------

struct Cell {
  int ix = 0;
  int iy = 0;
  friend bool operator==(Cell, Cell) = default;
};

struct OccupancyGrid {
  int resolution = 0;
  double cell_size = 0.0;
  std::vector<std::uint8_t> cells;  // row-major, iy * resolution + ix

  bool in_range(Cell c) const {
    return c.ix >= 0 && c.iy >= 0 && c.ix < resolution && c.iy < resolution;
  }
  bool occupied(Cell c) const { return cells[static_cast<std::size_t>(c.iy) * resolution + c.ix] != 0; }
  Cell cell_of(Vec2 p) const;
  Rect cell_rect(Cell c) const;
};

/// 140 cells for a 14 m side; proportional otherwise.
int default_resolution(double side);

/// A cell is occupied iff its square lies within robot::kRadius of a wall
/// (the wall inflated by the robot disc).
OccupancyGrid rasterize(const Maze& maze, int resolution);

/// Step counts of an 8-connected grid path. Length is
/// (straight + diagonal * sqrt 2) * cell_size.
struct GridPath {
  int straight = 0;
  int diagonal = 0;

  double length(double cell_size) const;
  friend bool operator==(GridPath, GridPath) = default;
};

/// A* over free cells, octile heuristic, no corner cutting. The endpoint
/// cells are treated as free even if inflation marked them occupied.
std::optional<GridPath> grid_shortest_path(const OccupancyGrid& grid, Cell from, Cell to);

/// Shortest 8-connected grid path length in meters; nullopt when unreachable.
std::optional<double> astar_length(const Maze& maze, Vec2 from, Vec2 to, int resolution);
std::optional<double> astar_length(const OccupancyGrid& grid, Vec2 from, Vec2 to);

// --- text format ---------------------------------------------------------------

std::string to_text(const Maze& maze);
Maze maze_from_text(std::string_view text, const std::string& source = "<maze>");
void save_maze(const Maze& maze, const std::string& path);
Maze load_maze(const std::string& path);

/// Rounds every coordinate to the file precision so that save/load is exact.
Maze quantized(Maze maze);

}  // namespace navevo
