#include <algorithm>
#include <cmath>

#include "navevo/sim.hpp"

namespace navevo {

namespace {
constexpr double kBucketSize = 0.5;
}

World::World(Maze maze) : maze_(std::move(maze)), bucket_size_(kBucketSize) {
  buckets_ = std::max(1, static_cast<int>(std::ceil(maze_.side / bucket_size_)));
  index_.resize(static_cast<std::size_t>(buckets_) * buckets_);
  auto clampi = [this](double v) {
    return std::clamp(static_cast<int>(std::floor(v / bucket_size_)), 0, buckets_ - 1);
  };
  for (int i = 0; i < static_cast<int>(maze_.walls.size()); ++i) {
    const Rect& w = maze_.walls[static_cast<std::size_t>(i)];
    for (int by = clampi(w.min.y); by <= clampi(w.max.y); ++by) {
      for (int bx = clampi(w.min.x); bx <= clampi(w.max.x); ++bx) {
        index_[static_cast<std::size_t>(by) * buckets_ + bx].push_back(i);
      }
    }
  }
}

void World::candidates(const Rect& box, std::vector<int>& out) const {
  auto clampi = [this](double v) {
    return std::clamp(static_cast<int>(std::floor(v / bucket_size_)), 0, buckets_ - 1);
  };
  const auto first = out.size();
  for (int by = clampi(box.min.y); by <= clampi(box.max.y); ++by) {
    for (int bx = clampi(box.min.x); bx <= clampi(box.max.x); ++bx) {
      for (int w : index_[static_cast<std::size_t>(by) * buckets_ + bx]) {
        if (std::find(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(), w) == out.end()) {
          out.push_back(w);
        }
      }
    }
  }
}

double World::clearance(Vec2 p, double cap) const {
  thread_local std::vector<int> scratch;
  scratch.clear();
  candidates({{p.x - cap, p.y - cap}, {p.x + cap, p.y + cap}}, scratch);
  double best = cap;
  for (int i : scratch) best = std::min(best, distance(maze_.walls[static_cast<std::size_t>(i)], p));
  return best;
}

std::optional<double> ray_rect(Vec2 origin, Vec2 dir, const Rect& r) {
  double t0 = 0.0, t1 = INFINITY;
  const double o[2] = {origin.x, origin.y};
  const double d[2] = {dir.x, dir.y};
  const double lo[2] = {r.min.x, r.min.y};
  const double hi[2] = {r.max.x, r.max.y};
  for (int a = 0; a < 2; ++a) {
    if (d[a] == 0.0) {
      if (o[a] < lo[a] || o[a] > hi[a]) return std::nullopt;
      continue;
    }
    double ta = (lo[a] - o[a]) / d[a];
    double tb = (hi[a] - o[a]) / d[a];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return std::nullopt;
  }
  return t0;
}

std::optional<double> World::raycast(Vec2 origin, double angle, double max_range) const {
  const Vec2 dir{std::cos(angle), std::sin(angle)};
  const Vec2 end = origin + max_range * dir;
  thread_local std::vector<int> scratch;
  scratch.clear();
  candidates({{std::min(origin.x, end.x), std::min(origin.y, end.y)},
              {std::max(origin.x, end.x), std::max(origin.y, end.y)}},
             scratch);
  std::optional<double> best;
  for (int i : scratch) {
    auto t = ray_rect(origin, dir, maze_.walls[static_cast<std::size_t>(i)]);
    if (t && *t <= max_range && (!best || *t < *best)) best = t;
  }
  return best;
}

std::optional<double> raycast(const Maze& maze, Vec2 origin, double angle, double max_range) {
  const Vec2 dir{std::cos(angle), std::sin(angle)};
  std::optional<double> best;
  for (const auto& w : maze.walls) {
    auto t = ray_rect(origin, dir, w);
    if (t && *t <= max_range && (!best || *t < *best)) best = t;
  }
  return best;
}

}  // namespace navevo
