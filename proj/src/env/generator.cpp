#include <algorithm>
#include <cmath>
#include <vector>

#include "navevo/error.hpp"
#include "navevo/maze.hpp"
#include "navevo/random.hpp"
#include "navevo/robot.hpp"

namespace navevo {

namespace {

constexpr int kMaxLayouts = 20;
constexpr int kPlacementsPerLayout = 200;
constexpr double kPlacementMargin = 0.1;
constexpr double kMinSeparationFraction = 0.5;
constexpr double kCorridorProbability = 0.25;
constexpr int kExtraDoorSpacing = 4;

struct Chamber {
  int x0, y0, x1, y1;  // lattice units
};

// A dividing wall on a lattice line with the door units removed.
struct DividingWall {
  bool vertical;  // x = line, spanning [from, to) in y
  int line;
  int from;
  int to;
  std::vector<int> doors;
};

class LayoutBuilder {
public:
  LayoutBuilder(const MazeParams& params, Rng& rng)
      : params_(params), rng_(rng), units_(std::max(2, static_cast<int>(std::lround(params.side_m)))),
        unit_(params.side_m / units_) {}

  std::vector<Rect> build() {
    std::vector<Rect> walls = perimeter_walls(params_.side_m);
    if (params_.room_density <= 0.0) return walls;

    std::vector<Chamber> stack{{0, 0, units_, units_}};
    std::vector<DividingWall> dividers;
    while (!stack.empty()) {
      const Chamber c = stack.back();
      stack.pop_back();
      if (auto wall = split(c, stack)) dividers.push_back(*wall);
    }
    for (const auto& d : dividers) emit(d, walls);
    return walls;
  }

private:
  std::optional<DividingWall> split(const Chamber& c, std::vector<Chamber>& stack) {
    const int w = c.x1 - c.x0, h = c.y1 - c.y0;
    bool vertical = w > h || (w == h && rng_.bernoulli(0.5));
    const int span = vertical ? w : h;
    const bool corridor = span >= 3 && rng_.bernoulli(kCorridorProbability);
    const int min_part = corridor ? 1 : 2;
    if (span < 2 * min_part + (corridor ? 1 : 0)) return std::nullopt;
    const double p = std::min(1.0, params_.room_density * span / 4.0);
    if (!rng_.bernoulli(p)) return std::nullopt;

    const int lo = vertical ? c.x0 : c.y0;
    const int hi = vertical ? c.x1 : c.y1;
    int line;
    if (corridor) {
      line = rng_.bernoulli(0.5) ? lo + 1 : hi - 1;
    } else {
      line = static_cast<int>(rng_.uniform_int(lo + min_part, hi - min_part));
    }

    DividingWall d{vertical, line, vertical ? c.y0 : c.x0, vertical ? c.y1 : c.x1, {}};
    const int length = d.to - d.from;
    const int door = static_cast<int>(rng_.uniform_int(d.from, d.to - 1));
    d.doors.push_back(door);
    // One chance of an extra door per 4 lattice units of divider.
    const int chances = length / kExtraDoorSpacing;
    for (int chance = 0; chance < chances; ++chance) {
      if (!rng_.bernoulli(params_.loop_probability)) continue;
      std::vector<int> options;
      for (int k = d.from; k < d.to; ++k) {
        bool clear = true;
        for (int e : d.doors) clear = clear && std::abs(k - e) >= 2;
        if (clear) options.push_back(k);
      }
      if (!options.empty()) {
        d.doors.push_back(options[static_cast<std::size_t>(
            rng_.uniform_int(0, static_cast<std::int64_t>(options.size()) - 1))]);
      }
    }

    if (vertical) {
      stack.push_back({c.x0, c.y0, line, c.y1});
      stack.push_back({line, c.y0, c.x1, c.y1});
    } else {
      stack.push_back({c.x0, c.y0, c.x1, line});
      stack.push_back({c.x0, line, c.x1, c.y1});
    }
    return d;
  }

  void emit(const DividingWall& d, std::vector<Rect>& walls) const {
    std::vector<int> doors = d.doors;
    std::sort(doors.begin(), doors.end());
    int seg_from = d.from;
    auto flush = [&](int seg_to) {
      if (seg_to > seg_from) walls.push_back(segment_rect(d, seg_from, seg_to));
    };
    for (int k : doors) {
      flush(k);
      seg_from = k + 1;
    }
    flush(d.to);
  }

  Rect segment_rect(const DividingWall& d, int a, int b) const {
    const double half = kWallThickness / 2.0;
    const double side = params_.side_m;
    auto clampc = [side](double v) { return std::clamp(v, 0.0, side); };
    const double line = d.line * unit_;
    const double s0 = clampc(a * unit_ - half), s1 = clampc(b * unit_ + half);
    if (d.vertical) return {{line - half, s0}, {line + half, s1}};
    return {{s0, line - half}, {s1, line + half}};
  }

  const MazeParams& params_;
  Rng& rng_;
  int units_;
  double unit_;
};

std::optional<Maze> place_endpoints(std::vector<Rect> walls, const MazeParams& params, Rng& rng) {
  Maze maze;
  maze.side = params.side_m;
  maze.walls = std::move(walls);
  const double clearance = robot::kRadius + kPlacementMargin;
  const double lo = kWallThickness + clearance, hi = params.side_m - lo;
  const OccupancyGrid grid = rasterize(maze, default_resolution(params.side_m));
  for (int attempt = 0; attempt < kPlacementsPerLayout; ++attempt) {
    const Vec2 s{rng.uniform(lo, hi), rng.uniform(lo, hi)};
    const Vec2 t{rng.uniform(lo, hi), rng.uniform(lo, hi)};
    const double theta = rng.uniform(0.0, kTwoPi);
    if (distance(s, t) < kMinSeparationFraction * params.side_m) continue;
    if (!point_in_free_space(maze, s, clearance) || !point_in_free_space(maze, t, clearance)) continue;
    maze.start = {s.x, s.y, theta};
    maze.target = t;
    maze = quantized(std::move(maze));
    if (maze.start.theta >= kTwoPi) maze.start.theta = 0.0;
    if (!astar_length(grid, maze.start.position(), maze.target)) continue;
    return maze;
  }
  return std::nullopt;
}

}  // namespace

Maze generate_maze(const MazeParams& params, std::uint64_t seed) {
  if (!(params.side_m > 4.0 * robot::kRadius)) throw Error("maze side must exceed two robot diameters");
  if (params.room_density < 0.0 || params.loop_probability < 0.0 || params.loop_probability > 1.0) {
    throw Error("maze parameters out of range");
  }
  Rng rng(derive_seed(seed, {0x6d617a65}));
  for (int layout = 0; layout < kMaxLayouts; ++layout) {
    LayoutBuilder builder(params, rng);
    if (auto maze = place_endpoints(builder.build(), params, rng)) return *maze;
  }
  throw Error("maze generation failed after " + std::to_string(kMaxLayouts) +
              " layouts; parameters are pathological");
}

}  // namespace navevo
