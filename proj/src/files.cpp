#include "turtle/files.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace turtle {

namespace {

std::string strip(std::string line) {
  if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
  const auto first = line.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = line.find_last_not_of(" \t\r");
  return line.substr(first, last - first + 1);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<EditCommand> read_command_file(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::vector<EditCommand> out;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const std::string text = strip(line);
    if (text.empty()) continue;
    try {
      out.push_back(parse_command(text));
    } catch (const CommandSyntaxError& e) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_command_file(const std::filesystem::path& path, const std::vector<EditCommand>& commands) {
  std::string text;
  for (const EditCommand& c : commands) text += format_command(c) + '\n';
  write_text(path, text);
}

std::vector<Point> read_trajectory_file(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::vector<Point> out;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const std::string text = strip(line);
    if (text.empty()) continue;
    std::istringstream fields(text);
    Point p;
    std::string rest;
    if (!(fields >> p.x >> p.y) || (fields >> rest)) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected 'x y'");
    }
    out.push_back(p);
  }
  return out;
}

void write_trajectory_file(const std::filesystem::path& path, const std::vector<Point>& points) {
  std::string text;
  char buf[80];
  for (const Point& p : points) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
    text += buf;
  }
  write_text(path, text);
}

}  // namespace turtle
