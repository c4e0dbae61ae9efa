#include <string>

#include "navevo/robot.hpp"
#include "navevo/sim.hpp"
#include "navevo/text.hpp"

namespace navevo {

std::string render_svg(const Maze& maze, const std::vector<Vec2>& trajectory) {
  const double scale = 50.0;  // px per meter
  const double size = maze.side * scale;
  auto px = [&](double v) { return text::fixed(v * scale, 2); };
  // SVG y grows downwards.
  auto py = [&](double v) { return text::fixed(size - v * scale, 2); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + text::fixed(size, 0) + "\" height=\"" +
         text::fixed(size, 0) + "\" viewBox=\"0 0 " + text::fixed(size, 0) + " " + text::fixed(size, 0) +
         "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& w : maze.walls) {
    out += "<rect x=\"" + px(w.min.x) + "\" y=\"" + py(w.max.y) + "\" width=\"" + px(w.max.x - w.min.x) +
           "\" height=\"" + px(w.max.y - w.min.y) + "\" fill=\"#333\"/>\n";
  }
  if (!trajectory.empty()) {
    out += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (const auto& p : trajectory) out += px(p.x) + "," + py(p.y) + " ";
    out += "\"/>\n";
  }
  out += "<circle cx=\"" + px(maze.start.x) + "\" cy=\"" + py(maze.start.y) + "\" r=\"" +
         px(robot::kRadius) + "\" fill=\"#2ca02c\"/>\n";
  out += "<circle cx=\"" + px(maze.target.x) + "\" cy=\"" + py(maze.target.y) + "\" r=\"" +
         px(robot::kTargetRadius) + "\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace navevo
