#include <string>

#include "navevo/error.hpp"
#include "navevo/maze.hpp"
#include "navevo/text.hpp"

namespace navevo {

namespace {

std::string num(double v) { return text::fixed(v, 6); }

}  // namespace

std::string to_text(const Maze& maze) {
  std::string out = "maze v1 " + num(maze.side) + "\n";
  for (const auto& w : maze.walls) {
    out += "wall " + num(w.min.x) + " " + num(w.min.y) + " " + num(w.max.x) + " " + num(w.max.y) + "\n";
  }
  out += "start " + num(maze.start.x) + " " + num(maze.start.y) + " " + num(maze.start.theta) + "\n";
  out += "target " + num(maze.target.x) + " " + num(maze.target.y) + "\n";
  return out;
}

Maze maze_from_text(std::string_view text, const std::string& source) {
  Maze maze;
  bool have_header = false, have_start = false, have_target = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    const auto line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    const auto tok = text::split_ws(line);
    if (tok.empty() || tok[0].starts_with('#')) continue;

    auto numbers = [&](std::size_t first, std::size_t count) {
      if (tok.size() != first + count) {
        throw ParseError(source, line_no, "expected " + std::to_string(count) + " values after '" +
                                              std::string(tok[0]) + "'");
      }
      std::vector<double> v;
      for (std::size_t i = first; i < tok.size(); ++i) {
        auto d = text::parse_double(tok[i]);
        if (!d) throw ParseError(source, line_no, "bad number '" + std::string(tok[i]) + "'");
        v.push_back(*d);
      }
      return v;
    };

    if (!have_header) {
      if (tok.size() < 2 || tok[0] != "maze" || tok[1] != "v1") {
        throw ParseError(source, line_no, "expected header 'maze v1 <side>'");
      }
      maze.side = numbers(2, 1)[0];
      have_header = true;
    } else if (tok[0] == "wall") {
      const auto v = numbers(1, 4);
      if (v[0] > v[2] || v[1] > v[3]) throw ParseError(source, line_no, "wall corners inverted");
      maze.walls.push_back(Rect{{v[0], v[1]}, {v[2], v[3]}});
    } else if (tok[0] == "start") {
      const auto v = numbers(1, 3);
      maze.start = {v[0], v[1], v[2]};
      have_start = true;
    } else if (tok[0] == "target") {
      const auto v = numbers(1, 2);
      maze.target = {v[0], v[1]};
      have_target = true;
    } else {
      throw ParseError(source, line_no, "unknown record '" + std::string(tok[0]) + "'");
    }
  }
  if (!have_header) throw ParseError(source, line_no, "empty maze file");
  if (!have_start) throw ParseError(source, line_no, "missing start record");
  if (!have_target) throw ParseError(source, line_no, "missing target record");
  return maze;
}

void save_maze(const Maze& maze, const std::string& path) { text::write_file(path, to_text(maze)); }

Maze load_maze(const std::string& path) { return maze_from_text(text::read_file(path), path); }

}  // namespace navevo
