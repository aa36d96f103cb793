#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "turtle/editing.hpp"
#include "turtle/interpret.hpp"

namespace turtle {

inline constexpr const char* kVersion = "1.0.0";

/// Unreadable or malformed input file.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::filesystem::path& path);

/// One command per line; blank lines and `#` comments are skipped.
std::vector<EditCommand> read_command_file(const std::filesystem::path& path);
void write_command_file(const std::filesystem::path& path, const std::vector<EditCommand>& commands);

/// One `x y` pair per line; blank lines and `#` comments are skipped.
std::vector<Point> read_trajectory_file(const std::filesystem::path& path);
void write_trajectory_file(const std::filesystem::path& path, const std::vector<Point>& points);

}  // namespace turtle
